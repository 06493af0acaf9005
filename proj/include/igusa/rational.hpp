#pragma once

// Exact big-integer / rational scalars (GMP via Boost.Multiprecision,
// expression templates off so Eigen can hold them) and conversions to Real.

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>

#include "igusa/real.hpp"

namespace igusa {

using Int = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;

inline Int num(const Rat& q) { return Int(boost::multiprecision::numerator(q)); }
inline Int den(const Rat& q) { return Int(boost::multiprecision::denominator(q)); }
inline bool is_integer(const Rat& q) { return den(q) == 1; }

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }
inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }
inline Rat abs_rat(const Rat& a) { return a < 0 ? Rat(-a) : a; }

inline Int pow_int(Int base, unsigned long e) {
  Int r(1);
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// floor of sqrt (exact)
inline Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.backend().data(), n.backend().data());
  return r;
}

inline bool is_square(const Int& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.backend().data()) != 0;
}

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.backend().data(), a.backend().data(), b.backend().data());
  return q;
}

inline Int mod_floor(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_r(r.backend().data(), a.backend().data(), b.backend().data());
  return r;
}

// round(a/b) to nearest integer (ties toward +inf; any tie rule works for
// the gcd-descent reductions that use this)
inline Int round_div(const Int& a, const Int& b) {
  Int aa = b < 0 ? Int(-a) : a;
  Int bb = b < 0 ? Int(-b) : b;
  return floor_div(2 * aa + bb, 2 * bb);
}

inline Real to_real(const Int& n, long prec) {
  Real r = Real::with_prec(prec);
  mpfr_set_z(r.raw(), n.backend().data(), MPFR_RNDN);
  return r;
}

inline Real to_real(const Rat& q, long prec) {
  Real r = Real::with_prec(prec);
  mpfr_set_q(r.raw(), q.backend().data(), MPFR_RNDN);
  return r;
}

inline Int floor_to_int(const Real& x) {
  Int n;
  mpfr_get_z(n.backend().data(), x.raw(), MPFR_RNDD);
  return n;
}

inline Int round_to_int(const Real& x) {
  Int n;
  mpfr_get_z(n.backend().data(), x.raw(), MPFR_RNDN);
  return n;
}

inline std::string rat_str(const Rat& q) { return q.str(); }

inline std::optional<Rat> rat_from_str(const std::string& s) {
  try {
    Rat q(s);
    return q;
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace igusa
