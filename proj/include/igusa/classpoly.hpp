#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "igusa/invariants.hpp"
#include "igusa/numeric.hpp"

namespace igusa {

struct ReconstructionUnstable : std::runtime_error {
  ReconstructionUnstable()
      : std::runtime_error("no precision rung yielded rational coefficients; "
                           "raise the doubling cap or the starting precision") {}
};

// ∏(x − j_k(Ω_i)) before reconstruction; coefficients ascending, leading 1
struct FloatPolynomials {
  std::array<std::vector<Complex>, 3> h;
  Real max_coeff;  // largest |coefficient|, drives the denominator budget
  Real max_imag;   // largest |Im coefficient|; nonzero signals a set not closed
                   // under complex conjugation (missing CM-type orbit)
};

// h[0], h[1], h[2] = the class polynomials of j1, j2, j3; coeff i on x^i, monic
struct ClassPolynomialSet {
  std::array<std::vector<Rat>, 3> h;
  long precision_used = 0;
  bool stable = false;  // identical rationals on two consecutive precision rungs
  Real residual;        // max over coefficients of |float − rational| and |Im|
};

struct DiscriminantData {
  std::array<Rat, 3> disc;
  std::array<Int, 3> denominators;
  std::array<Factorization, 3> factored;
};

inline FloatPolynomials assemble(const std::vector<IgusaPoint>& points,
                                 const PrecisionContext& ctx) {
  if (points.empty()) throw std::invalid_argument("assemble: no Igusa points");
  long prec = ctx.working();
  FloatPolynomials out;
  out.max_coeff = Real::with_prec(64);
  out.max_imag = Real::with_prec(64);
  for (int k = 0; k < 3; ++k) {
    std::vector<Complex> c{Complex(Real::from_long(1, prec), Real::with_prec(prec))};
    for (const IgusaPoint& p : points) {
      const Complex& root = k == 0 ? p.j1 : (k == 1 ? p.j2 : p.j3);
      std::vector<Complex> nxt(c.size() + 1,
                               Complex(Real::with_prec(prec), Real::with_prec(prec)));
      for (size_t i = 0; i < c.size(); ++i) {
        nxt[i + 1] = nxt[i + 1] + c[i];
        nxt[i] = nxt[i] - root * c[i];
      }
      c = std::move(nxt);
    }
    for (const Complex& z : c) {
      Real m = abs(z), mi = abs(z.im);
      if (m > out.max_coeff) out.max_coeff = m;
      if (mi > out.max_imag) out.max_imag = mi;
    }
    out.h[k] = std::move(c);
  }
  return out;
}

// Denominator budget, shrunk by the coefficient magnitude. Kept at 2^(bits/5):
// a generic unconverged float only admits approximations of quality 2^(-bits/2)
// once its convergent denominators pass 2^(bits/4), so everything under the
// budget that matches to tolerance is an honest rational, not noise.
inline Int reconstruction_denominator_cap(long bits, const Real& max_coeff) {
  long mag = 0;
  if (max_coeff > Real::from_long(1, 64)) mag = floor(log2(max_coeff)).to_long();
  long budget = std::max<long>(16, bits / 5 - mag);
  return pow_int(Int(2), static_cast<unsigned long>(budget));
}

inline std::optional<ClassPolynomialSet> reconstruct(const FloatPolynomials& fp,
                                                     const Int& max_den,
                                                     const PrecisionContext& ctx) {
  Real tol = pow2(-static_cast<long>(ctx.bits) / 2, 64);
  ClassPolynomialSet set;
  set.precision_used = static_cast<long>(ctx.bits);
  set.residual = Real::with_prec(64);
  for (int k = 0; k < 3; ++k) {
    set.h[k].reserve(fp.h[k].size());
    for (const Complex& z : fp.h[k]) {
      Real im = abs(z.im);
      if (im > tol) return std::nullopt;  // true coefficients are real
      auto r = rational_reconstruct(z.re, max_den, tol);
      if (!r) return std::nullopt;
      Real err = abs(z.re - to_real(*r, z.re.prec()));
      if (err > set.residual) set.residual = err;
      if (im > set.residual) set.residual = im;
      set.h[k].push_back(*r);
    }
    if (set.h[k].back() != 1) return std::nullopt;  // monic or bust
  }
  return set;
}

// Precision ladder around any producer of float polynomials. Doubles the bits on
// reconstruction failure and keeps going until two consecutive rungs agree
// exactly; a lone success at the cap is returned unstamped (stable = false).
template <typename Producer>
ClassPolynomialSet reconstruct_with_escalation(Producer&& produce, long start_bits,
                                               int max_doublings) {
  std::optional<ClassPolynomialSet> prev;
  std::optional<ClassPolynomialSet> best;
  long bits = start_bits;
  for (int rung = 0; rung <= max_doublings; ++rung, bits *= 2) {
    PrecisionContext ctx(bits);
    FloatPolynomials fp = produce(ctx);
    Int cap = reconstruction_denominator_cap(bits, fp.max_coeff);
    std::optional<ClassPolynomialSet> cand = reconstruct(fp, cap, ctx);
    if (!cand) {
      prev.reset();
      continue;
    }
    if (prev && prev->h == cand->h) {
      cand->stable = true;
      return *cand;
    }
    prev = cand;
    best = std::move(cand);
  }
  if (best) return *best;  // stable stays false: caller must not trust silently
  throw ReconstructionUnstable();
}

inline DiscriminantData discriminant_data(const ClassPolynomialSet& set) {
  DiscriminantData dd;
  for (int k = 0; k < 3; ++k) {
    dd.disc[k] = poly_discriminant(set.h[k]);
    dd.denominators[k] = den(dd.disc[k]);
    dd.factored[k] = factor(dd.denominators[k]);
  }
  return dd;
}

}  // namespace igusa
