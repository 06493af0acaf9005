#pragma once

#include <array>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "igusa/periods.hpp"

namespace igusa {

struct PrecisionInfeasible : std::runtime_error {
  PrecisionInfeasible()
      : std::runtime_error("theta series needs a truncation radius beyond the cap; "
                           "Siegel-reduce the period matrix first") {}
};

// Half-integer characteristic (m1, m2), stored as the 4 bits (2m1a, 2m1b, 2m2a, 2m2b).
struct ThetaCharacteristic {
  std::array<int, 4> half_bits{0, 0, 0, 0};
  int index = 0;  // 1..10 position in the frozen enumeration

  Rat m1(int i) const { return Rat(half_bits[i], 2); }
  Rat m2(int i) const { return Rat(half_bits[2 + i], 2); }
  bool even() const {
    return (half_bits[0] * half_bits[2] + half_bits[1] * half_bits[3]) % 2 == 0;
  }
};

// The ten even characteristics, numbered by the 4-bit value (2m1a,2m1b,2m2a,2m2b)
// in ascending binary order. The appendix product formulas assume this order.
inline const std::array<ThetaCharacteristic, 10>& even_characteristics() {
  static const std::array<ThetaCharacteristic, 10> table = [] {
    std::array<ThetaCharacteristic, 10> t{};
    int k = 0;
    for (int b = 0; b < 16; ++b) {
      ThetaCharacteristic ch{{(b >> 3) & 1, (b >> 2) & 1, (b >> 1) & 1, b & 1}, 0};
      if (!ch.even()) continue;
      ch.index = ++k;
      t[ch.index - 1] = ch;
    }
    return t;
  }();
  return table;
}

struct ThetaVector {
  std::array<Complex, 10> values;
  PeriodMatrix omega;
  int truncation_radius = 0;
  Real certified_tail;
};

// Smallest R with 8(R+2)·exp(−π·λmin·(R−1)²) < 2^(−tail_bits).
inline int theta_truncation_radius(const Real& lmin, long tail_bits, int cap = 4096) {
  if (!(lmin.sign() > 0)) throw PrecisionInfeasible();
  Real pi_v = Real::pi(64);
  Real ln2 = log(Real::from_long(2, 64));
  for (int r = 2; r <= cap; ++r) {
    Real quad = pi_v * lmin * Real::from_long((r - 1) * static_cast<long>(r - 1), 64);
    Real lhs = log(Real::from_long(8L * (r + 2), 64)) - quad;
    if (lhs < -(Real::from_long(tail_bits, 64) * ln2)) return r;
  }
  throw PrecisionInfeasible();
}

namespace detail {

// exp(πi·z)
inline Complex exp_pii(const Complex& z, long prec) {
  Real pi_v = Real::pi(prec);
  Complex w{-(pi_v * z.im), pi_v * z.re};
  return exp(w);
}

inline Complex cpow(const Complex& z, long e, long prec) {
  if (e >= 0) return pow_ui(z, static_cast<unsigned long>(e));
  Complex one(Real::from_long(1, prec), Real::with_prec(prec));
  return one / pow_ui(z, static_cast<unsigned long>(-e));
}

}  // namespace detail

// The ten even theta constants θ[m](Ω) = Σ_{n∈Z²} e^{πi[(n+m1)ᵀΩ(n+m1) + 2(n+m1)ᵀm2]},
// summed over ‖n‖∞ ≤ R with the tail certified by λmin(Im Ω). One shared sweep over
// the doubled lattice μ = 2(n+m1) feeds all characteristics: the quadratic factor
// depends only on μ, the characteristic enters through the parity of μ and a power
// of i. `min_radius` widens the sweep beyond the certified radius (for tail tests).
inline ThetaVector theta_vector(const PeriodMatrix& om, const PrecisionContext& ctx,
                                int radius_cap = 4096, int min_radius = 0) {
  long prec = ctx.working();
  Real lmin = im_min_eigenvalue(om.omega);
  int radius = theta_truncation_radius(lmin, static_cast<long>(ctx.tail_bits), radius_cap);
  int r_used = std::max(radius, min_radius);
  int m_max = 2 * r_used + 1;

  // tail = 8(R+2)·exp(−πλ(R−1)²), reported for the certified radius
  Real pi64 = Real::pi(64);
  Real tail = Real::from_long(8L * (radius + 2), 64) *
              exp(-(pi64 * lmin * Real::from_long((radius - 1) * static_cast<long>(radius - 1), 64)));

  // axis tables: e[m] = exp(πi m² Ω_jj / 4), built by the degree-2 recurrence
  Real quarter = Real::from_long(1, prec) / Real::from_long(4, prec);
  auto axis = [&](const Complex& ojj) {
    std::vector<Complex> e(m_max + 1);
    e[0] = Complex(Real::from_long(1, prec), Real::with_prec(prec));
    Complex step = detail::exp_pii(ojj * quarter, prec);             // exp(πi(2m+1)Ω/4) at m=0
    Complex ratio = step * step;                                      // exp(πiΩ/2)
    for (int m = 0; m < m_max; ++m) {
      e[m + 1] = e[m] * step;
      step = step * ratio;
    }
    return e;
  };
  std::vector<Complex> e00 = axis(om.omega(0, 0));
  std::vector<Complex> e11 = axis(om.omega(1, 1));
  Complex cross_unit = detail::exp_pii(om.omega(0, 1) * (quarter + quarter), prec);

  // characteristics bucketed by the parity (μ0, μ1) they sum over
  struct Slot {
    int ci, v2, v3;
  };
  std::array<std::vector<Slot>, 4> by_parity;
  for (const ThetaCharacteristic& ch : even_characteristics())
    by_parity[ch.half_bits[0] * 2 + ch.half_bits[1]].push_back(
        {ch.index - 1, ch.half_bits[2], ch.half_bits[3]});

  std::array<Complex, 10> acc;
  for (Complex& a : acc) a = Complex(Real::with_prec(prec), Real::with_prec(prec));

  // t += i^ph · base
  auto add_rotated = [](Complex& t, const Complex& base, int ph) {
    switch (ph & 3) {
      case 0: t.re = t.re + base.re; t.im = t.im + base.im; break;
      case 1: t.re = t.re - base.im; t.im = t.im + base.re; break;
      case 2: t.re = t.re - base.re; t.im = t.im - base.im; break;
      case 3: t.re = t.re + base.im; t.im = t.im - base.re; break;
    }
  };

  for (int u = -m_max; u <= m_max; ++u) {
    // cross(v) = exp(πi·u·v·Ω01/2) walked along the row
    Complex cross = detail::cpow(cross_unit, -static_cast<long>(u) * m_max, prec);
    Complex cstep = detail::cpow(cross_unit, u, prec);
    const Complex& eu = e00[std::abs(u)];
    for (int v = -m_max; v <= m_max; ++v) {
      Complex base = eu * e11[std::abs(v)] * cross;
      for (const Slot& s : by_parity[(u & 1) * 2 + (v & 1)])
        add_rotated(acc[s.ci], base, u * s.v2 + v * s.v3);
      cross = cross * cstep;
    }
  }

  ThetaVector out;
  out.values = std::move(acc);
  out.omega = om;
  out.truncation_radius = radius;
  out.certified_tail = tail;
  return out;
}

inline Complex theta_constant(const ThetaCharacteristic& m, const PeriodMatrix& om,
                              const PrecisionContext& ctx, int radius_cap = 4096,
                              int min_radius = 0) {
  for (const ThetaCharacteristic& ch : even_characteristics())
    if (ch.half_bits == m.half_bits)
      return theta_vector(om, ctx, radius_cap, min_radius).values[ch.index - 1];
  throw std::logic_error("theta_constant: characteristic is not one of the ten even ones");
}

}  // namespace igusa
