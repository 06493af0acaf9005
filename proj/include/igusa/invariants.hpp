#pragma once

#include <array>
#include <stdexcept>

#include "igusa/theta.hpp"

namespace igusa {

struct IndexOutOfRange : std::out_of_range {
  IndexOutOfRange() : std::out_of_range("theta index outside 1..10") {}
};

struct DecomposablePoint : std::runtime_error {
  DecomposablePoint()
      : std::runtime_error("h10 vanishes: the point is a product of elliptic curves, "
                           "not a genus-2 curve") {}
};

struct ModularValues {
  Complex h4, h10, h12, h16;
  PeriodMatrix omega;  // evaluation point
  Real floor;          // decomposability threshold ≈ 2^(−tail_bits/2)
};

struct IgusaPoint {
  Complex j1, j2, j3;
  PeriodMatrix omega;
};

// Index tuples of the weight-12 and weight-16 sums. One g-term is the fourth
// power of a 6-fold theta product; one f-term is the fourth power of an 8-fold
// product in which exactly one index repeats.
inline const std::array<std::array<int, 6>, 15>& g_tuples() {
  static const std::array<std::array<int, 6>, 15> t = {{{1, 5, 2, 9, 6, 10},
                                                        {1, 2, 9, 6, 8, 3},
                                                        {5, 9, 6, 8, 10, 7},
                                                        {5, 2, 6, 8, 3, 7},
                                                        {1, 5, 2, 10, 3, 7},
                                                        {1, 9, 8, 10, 3, 7},
                                                        {1, 5, 2, 8, 10, 4},
                                                        {1, 5, 9, 8, 3, 4},
                                                        {5, 9, 6, 10, 3, 4},
                                                        {2, 6, 8, 10, 3, 4},
                                                        {1, 2, 9, 6, 7, 4},
                                                        {1, 5, 6, 8, 7, 4},
                                                        {2, 9, 8, 10, 7, 4},
                                                        {5, 2, 9, 3, 7, 4},
                                                        {1, 6, 10, 3, 7, 4}}};
  return t;
}

inline const std::array<std::array<int, 8>, 60>& f_tuples() {
  static const std::array<std::array<int, 8>, 60> t = {{
      {8, 1, 5, 2, 9, 6, 8, 10}, {5, 1, 5, 2, 9, 6, 8, 3},  {10, 1, 2, 9, 6, 8, 10, 3},
      {3, 1, 5, 2, 9, 6, 10, 3}, {1, 1, 5, 9, 6, 8, 10, 7}, {2, 5, 2, 9, 6, 8, 10, 7},
      {1, 1, 5, 2, 6, 8, 3, 7},  {9, 5, 2, 9, 6, 8, 3, 7},  {9, 1, 5, 2, 9, 10, 3, 7},
      {6, 1, 5, 2, 6, 10, 3, 7}, {5, 1, 5, 9, 8, 10, 3, 7}, {2, 1, 2, 9, 8, 10, 3, 7},
      {6, 1, 9, 6, 8, 10, 3, 7}, {8, 1, 5, 2, 8, 10, 3, 7}, {10, 5, 2, 6, 8, 10, 3, 7},
      {3, 5, 9, 6, 8, 10, 3, 7}, {7, 1, 5, 2, 9, 6, 10, 7}, {7, 1, 2, 9, 6, 8, 3, 7},
      {9, 1, 5, 2, 9, 8, 10, 4}, {6, 1, 5, 2, 6, 8, 10, 4}, {2, 1, 5, 2, 9, 8, 3, 4},
      {6, 1, 5, 9, 6, 8, 3, 4},  {1, 1, 5, 9, 6, 10, 3, 4}, {2, 5, 2, 9, 6, 10, 3, 4},
      {1, 1, 2, 6, 8, 10, 3, 4}, {5, 5, 2, 6, 8, 10, 3, 4}, {9, 2, 9, 6, 8, 10, 3, 4},
      {8, 5, 9, 6, 8, 10, 3, 4}, {10, 1, 5, 9, 8, 10, 3, 4}, {3, 1, 5, 2, 8, 10, 3, 4},
      {5, 1, 5, 2, 9, 6, 7, 4},  {2, 1, 5, 2, 6, 8, 7, 4},  {9, 1, 5, 9, 6, 8, 7, 4},
      {8, 1, 2, 9, 6, 8, 7, 4},  {1, 1, 2, 9, 8, 10, 7, 4}, {5, 5, 2, 9, 8, 10, 7, 4},
      {6, 2, 9, 6, 8, 10, 7, 4}, {10, 1, 2, 9, 6, 10, 7, 4}, {10, 1, 5, 6, 8, 10, 7, 4},
      {1, 1, 5, 2, 9, 3, 7, 4},  {6, 5, 2, 9, 6, 3, 7, 4},  {8, 5, 2, 9, 8, 3, 7, 4},
      {5, 1, 5, 6, 10, 3, 7, 4}, {2, 1, 2, 6, 10, 3, 7, 4}, {9, 1, 9, 6, 10, 3, 7, 4},
      {8, 1, 6, 8, 10, 3, 7, 4}, {10, 5, 2, 9, 10, 3, 7, 4}, {3, 1, 2, 9, 6, 3, 7, 4},
      {3, 1, 5, 6, 8, 3, 7, 4},  {3, 2, 9, 8, 10, 3, 7, 4}, {7, 1, 5, 2, 8, 10, 7, 4},
      {7, 1, 5, 9, 8, 3, 7, 4},  {7, 5, 9, 6, 10, 3, 7, 4}, {7, 2, 6, 8, 10, 3, 7, 4},
      {4, 1, 5, 2, 9, 6, 10, 4}, {4, 1, 2, 9, 6, 8, 3, 4},  {4, 5, 9, 6, 8, 10, 7, 4},
      {4, 5, 2, 6, 8, 3, 7, 4},  {4, 1, 5, 2, 10, 3, 7, 4}, {4, 1, 9, 8, 10, 3, 7, 4},
  }};
  return t;
}

namespace detail {

inline Complex theta_product_pow4(const int* idx, int n, const ThetaVector& th) {
  long prec = th.values[0].prec();
  Complex p(Real::from_long(1, prec), Real::with_prec(prec));
  for (int i = 0; i < n; ++i) {
    if (idx[i] < 1 || idx[i] > 10) throw IndexOutOfRange();
    p = p * th.values[idx[i] - 1];
  }
  return pow_ui(p, 4);
}

}  // namespace detail

inline Complex helper_g(const std::array<int, 6>& k, const ThetaVector& th) {
  return detail::theta_product_pow4(k.data(), 6, th);
}

inline Complex helper_f(const std::array<int, 8>& k, const ThetaVector& th) {
  return detail::theta_product_pow4(k.data(), 8, th);
}

// h4 = Σ θ_i^8, h10 = Π θ_i², h12 = Σ over the 15 g-tuples, h16 = Σ over the 60 f-tuples
inline ModularValues modular_values(const ThetaVector& th) {
  long prec = th.values[0].prec();
  Complex zero(Real::with_prec(prec), Real::with_prec(prec));
  ModularValues mv;
  mv.h4 = zero;
  mv.h10 = Complex(Real::from_long(1, prec), Real::with_prec(prec));
  mv.h12 = zero;
  mv.h16 = zero;
  for (const Complex& t : th.values) {
    mv.h4 = mv.h4 + pow_ui(t, 8);
    mv.h10 = mv.h10 * t * t;
  }
  for (const auto& k : g_tuples()) mv.h12 = mv.h12 + helper_g(k, th);
  for (const auto& k : f_tuples()) mv.h16 = mv.h16 + helper_f(k, th);
  mv.omega = th.omega;
  mv.floor = sqrt(th.certified_tail);  // ≈ 2^(−tail_bits/2)
  return mv;
}

// I2 = h12/h10, I4 = h4, I6 = h16/h10, I10 = h10;
// j1 = I2⁵/I10, j2 = I4·I2³/I10, j3 = I6·I2²/I10
inline IgusaPoint igusa_point(const ModularValues& hv) {
  if (!(abs(hv.h10) > hv.floor)) throw DecomposablePoint();
  Complex i2 = hv.h12 / hv.h10;
  Complex i4 = hv.h4;
  Complex i6 = hv.h16 / hv.h10;
  const Complex& i10 = hv.h10;
  IgusaPoint p;
  p.j1 = pow_ui(i2, 5) / i10;
  p.j2 = i4 * pow_ui(i2, 3) / i10;
  p.j3 = i6 * pow_ui(i2, 2) / i10;
  p.omega = hv.omega;
  return p;
}

}  // namespace igusa
