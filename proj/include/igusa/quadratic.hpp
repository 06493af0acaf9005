#pragma once
// Exact arithmetic in a real quadratic field Q(√d0) over the integral basis
// {1, ω}, continued-fraction machinery for quadratic surds, the fundamental
// unit, and ideal principality tests (with explicit generators).

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "igusa/lattice.hpp"
#include "igusa/numeric.hpp"
#include "igusa/rational.hpp"
#include "igusa/real.hpp"

namespace igusa {

// ω = (1+√d0)/2 for d0 ≡ 1 (mod 4), ω = √d0 otherwise; ω² = t·ω − n and
// disc = t² − 4n is the field discriminant.
struct QuadField {
  Int d0;
  Int t, n;
  Int disc;
};

inline QuadField make_quad_field(const Int& d0) {
  if (d0 <= 1) throw std::invalid_argument("real quadratic field needs d0 > 1");
  if (is_square(d0)) throw std::invalid_argument("radicand must be nonsquare");
  QuadField f;
  f.d0 = d0;
  if (mod_floor(d0, Int(4)) == 1) {
    f.t = 1;
    f.n = (1 - d0) / 4;
  } else {
    f.t = 0;
    f.n = -d0;
  }
  f.disc = f.t * f.t - 4 * f.n;
  return f;
}

// n = square_root² · core with core squarefree (sign carried by core).
struct SquarefreeParts {
  Int square_root;
  Int core;
};

inline SquarefreeParts squarefree_decompose(const Int& n) {
  if (n == 0) throw std::invalid_argument("squarefree part of zero");
  Factorization fac = factor(n);
  SquarefreeParts out{Int(1), Int(fac.sign)};
  for (const auto& fe : fac.factors) {
    if (fe.exponent % 2 == 1) out.core *= fe.prime;
    out.square_root *= pow_int(fe.prime, fe.exponent / 2);
  }
  return out;
}

// u + v·ω with exact rational coordinates.
struct QuadElem {
  Rat u, v;
};

inline QuadElem qelem(long u, long v = 0) { return {Rat(u), Rat(v)}; }
inline bool qis_zero(const QuadElem& x) { return x.u == 0 && x.v == 0; }
inline bool qeq(const QuadElem& x, const QuadElem& y) { return x.u == y.u && x.v == y.v; }
inline QuadElem qneg(const QuadElem& x) { return {-x.u, -x.v}; }
inline QuadElem qadd(const QuadElem& x, const QuadElem& y) { return {x.u + y.u, x.v + y.v}; }
inline QuadElem qsub(const QuadElem& x, const QuadElem& y) { return {x.u - y.u, x.v - y.v}; }
inline QuadElem qscale(const QuadElem& x, const Rat& c) { return {c * x.u, c * x.v}; }

inline QuadElem qmul(const QuadField& f, const QuadElem& x, const QuadElem& y) {
  // (u1+v1ω)(u2+v2ω) with ω² = tω − n
  Rat vv = x.v * y.v;
  return {x.u * y.u - Rat(f.n) * vv, x.u * y.v + x.v * y.u + Rat(f.t) * vv};
}

inline QuadElem qconj(const QuadField& f, const QuadElem& x) {
  return {x.u + Rat(f.t) * x.v, -x.v};
}

inline Rat qnorm(const QuadField& f, const QuadElem& x) {
  return x.u * x.u + Rat(f.t) * x.u * x.v + Rat(f.n) * x.v * x.v;
}

inline Rat qtrace(const QuadField& f, const QuadElem& x) {
  return 2 * x.u + Rat(f.t) * x.v;
}

inline QuadElem qdiv(const QuadField& f, const QuadElem& x, const QuadElem& y) {
  Rat ny = qnorm(f, y);
  if (ny == 0) throw std::invalid_argument("division by zero element");
  return qscale(qmul(f, x, qconj(f, y)), 1 / ny);
}

inline bool qis_integral(const QuadElem& x) {
  return is_integer(x.u) && is_integer(x.v);
}

// Embedding with √disc > 0 (conjugate = the other real embedding).
inline Real quad_to_real(const QuadField& f, const QuadElem& x, mpfr_prec_t prec,
                         bool conjugate = false) {
  Real s = sqrt(to_real(f.disc, prec));
  if (conjugate) s = Real::from_long(0, prec) - s;
  Real om = (to_real(f.t, prec) + s) / 2;
  return to_real(x.u, prec) + to_real(x.v, prec) * om;
}

namespace detail {

// floor((p + √dd)/q) for nonsquare dd > 0, q ≠ 0, s = isqrt(dd); exact for
// either sign of q since √dd is irrational.
inline Int surd_floor(const Int& p, const Int& q, const Int& s) {
  return q > 0 ? floor_div(p + s, q) : floor_div(p + s + 1, q);
}

// θ = (p + √disc)/q expressed over {1, ω}: ((p − t) + 2ω)/q.
inline QuadElem surd_elem(const QuadField& f, const Int& p, const Int& q) {
  return {Rat(p - f.t) / Rat(q), Rat(2) / Rat(q)};
}

struct SurdChain {
  // state (p, q) ↦ multiplier m with Z + θ_state·Z = m · (Z + θ₀·Z),
  // recorded at first visit
  std::map<std::pair<Int, Int>, QuadElem> first_seen;
  // once the chain revisits a state: m_now / m_first — a unit of Z[ω]
  QuadElem cycle_unit;
};

// Continued-fraction expansion of (p + √disc)/q, q | disc − p², until the
// first repeated state. Multipliers follow Z+θ'Z = (θ−a)⁻¹ (Z+θZ).
inline SurdChain expand_surd(const QuadField& f, Int p, Int q) {
  if (q == 0 || mod_floor(f.disc - p * p, abs_int(q)) != 0)
    throw std::invalid_argument("invalid surd state");
  Int s = isqrt(f.disc);
  long cap = 256 + 32 * s.convert_to<long>();
  SurdChain ch;
  QuadElem m = qelem(1);
  for (long it = 0; it < cap; ++it) {
    auto key = std::make_pair(p, q);
    auto found = ch.first_seen.find(key);
    if (found != ch.first_seen.end()) {
      ch.cycle_unit = qdiv(f, m, found->second);
      return ch;
    }
    ch.first_seen.emplace(key, m);
    Int a = surd_floor(p, q, s);
    m = qdiv(f, m, qsub(surd_elem(f, p, q), QuadElem{Rat(a), Rat(0)}));
    Int p2 = a * q - p;
    Int num = f.disc - p2 * p2;
    if (mod_floor(num, abs_int(q)) != 0) throw std::logic_error("surd step not exact");
    Int q2 = num / q;
    p = p2;
    q = q2;
  }
  throw std::logic_error("surd period exceeded iteration cap");
}

}  // namespace detail

struct QuadUnit {
  QuadElem eps;   // integral coordinates; > 1 in the √disc > 0 embedding
  int norm_sign;  // N(ε) = ±1
};

// Fundamental unit via the cycle multiplier of the continued fraction of ω.
inline QuadUnit fundamental_unit(const QuadField& f) {
  detail::SurdChain ch = detail::expand_surd(f, f.t, Int(2));
  QuadElem e = ch.cycle_unit;
  Rat nr = qnorm(f, e);
  if (!qis_integral(e) || (nr != 1 && nr != -1))
    throw std::logic_error("continued fraction did not produce a unit");
  return {e, nr == 1 ? 1 : -1};
}

// Fractional ideal (1/den)·L with L a 2×2 column-HNF lattice over {1, ω}.
struct QuadIdeal {
  MatXz basis;
  Int den;
};

inline QuadIdeal quad_ideal(const QuadField& f, const std::vector<QuadElem>& gens) {
  Int d(1);
  for (const auto& g : gens) {
    d = lcm(d, den(g.u));
    d = lcm(d, den(g.v));
  }
  MatXz cols(2, 2 * static_cast<long>(gens.size()));
  long c = 0;
  Rat dr(d);
  for (const auto& g : gens) {
    QuadElem gw = qmul(f, g, qelem(0, 1));  // g·ω stays in the module
    cols(0, c) = num(g.u * dr);
    cols(1, c) = num(g.v * dr);
    ++c;
    cols(0, c) = num(gw.u * dr);
    cols(1, c) = num(gw.v * dr);
    ++c;
  }
  QuadIdeal out{hnf_basis(cols), d};
  return out;
}

inline Rat quad_ideal_norm(const QuadIdeal& I) {
  return Rat(abs_int(det_int(I.basis))) / Rat(I.den * I.den);
}

// Exact principality test: reduce to Z + τZ ~ Z + ωZ via continued-fraction
// tail matching (Serret), tracking multipliers so a generator comes out.
// Returns nullopt when the ideal is not principal.
inline std::optional<QuadElem> principal_generator(const QuadField& f, const QuadIdeal& I) {
  MatXz L = hnf_basis(I.basis);
  Int A = L(0, 0), B = L(0, 1), C = L(1, 1);
  if (mod_floor(A, C) != 0 || mod_floor(B, C) != 0)
    throw std::invalid_argument("lattice is not an O-module");
  Int ap = A / C, bp = B / C;
  Int nb = bp * bp + f.t * bp + f.n;  // N(bp + ω)
  if (mod_floor(nb, ap) != 0)
    throw std::invalid_argument("lattice is not an ideal");

  detail::SurdChain omega = detail::expand_surd(f, f.t, Int(2));

  // τ = (bp + ω)/ap as the surd (2bp + t + √disc)/(2ap)
  Int p = 2 * bp + f.t, q = 2 * ap;
  Int s = isqrt(f.disc);
  long cap = 512 + 64 * s.convert_to<long>();
  std::map<std::pair<Int, Int>, bool> seen;
  QuadElem m = qelem(1);
  for (long it = 0; it < cap; ++it) {
    auto key = std::make_pair(p, q);
    auto hit = omega.first_seen.find(key);
    if (hit != omega.first_seen.end()) {
      // m·(Z+τZ) = hit·(Z+ωZ)  ⇒  I = (C·ap/den)·(Z+τZ) = g·O
      QuadElem g = qscale(qdiv(f, hit->second, m), Rat(C * ap) / Rat(I.den));
      // generator sanity: right norm, and den·g solves L·x = coords exactly
      if (abs_rat(qnorm(f, g)) != quad_ideal_norm(I))
        throw std::logic_error("generator norm mismatch");
      Rat x1 = g.v * Rat(I.den) / Rat(C);
      Rat x0 = (g.u * Rat(I.den) - Rat(B) * x1) / Rat(A);
      if (!is_integer(x0) || !is_integer(x1))
        throw std::logic_error("generator escapes the ideal lattice");
      return g;
    }
    if (seen.count(key)) return std::nullopt;  // closed own cycle: no match
    seen.emplace(key, true);
    Int a = detail::surd_floor(p, q, s);
    m = qdiv(f, m, qsub(detail::surd_elem(f, p, q), QuadElem{Rat(a), Rat(0)}));
    Int p2 = a * q - p;
    Int num = f.disc - p2 * p2;
    if (mod_floor(num, abs_int(q)) != 0) throw std::logic_error("surd step not exact");
    Int q2 = num / q;
    p = p2;
    q = q2;
  }
  throw std::logic_error("principality scan exceeded iteration cap");
}

// h(K0) = 1 check: every prime ideal below the Minkowski bound √disc/2 must
// be principal (inert primes are skipped — they already are).
inline bool class_number_one(const QuadField& f) {
  Int bound = isqrt(f.disc) / 2;
  if (bound >= kTrialBound) throw std::invalid_argument("discriminant beyond desk scale");
  long b = bound.convert_to<long>();
  for (long pl : small_primes()) {
    if (pl > b) break;
    Int p(pl);
    for (long r = 0; r < pl; ++r) {
      // roots of x² − tx + n, i.e. ω ≡ r (mod prime above p)
      if (mod_floor(Int(r) * Int(r) - f.t * Int(r) + f.n, p) != 0) continue;
      MatXz L(2, 2);
      L(0, 0) = p;
      L(0, 1) = mod_floor(Int(-r), p);
      L(1, 0) = 0;
      L(1, 1) = 1;
      if (!principal_generator(f, QuadIdeal{L, Int(1)})) return false;
    }
  }
  return true;
}

}  // namespace igusa
