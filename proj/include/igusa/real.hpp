#pragma once

// Arbitrary-precision real scalar over MPFR with value semantics.
// Binary operations round to the larger operand precision (MPFR_RNDN).

#include <mpfr.h>

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <string>
#include <utility>

namespace igusa {

struct PrecisionContext {
  long bits;
  long tail_bits;
  long guard_bits;

  explicit PrecisionContext(long bits_, long tail = 0, long guard = 64)
      : bits(bits_), tail_bits(tail > 0 ? tail : bits_ / 2), guard_bits(guard) {
    assert(bits >= 64 && guard_bits >= 32 && tail_bits <= bits);
  }

  // precision used for intermediate arithmetic
  long working() const { return bits + guard_bits; }
};

namespace detail {
inline long& default_prec() {
  thread_local long prec = 128;
  return prec;
}
}  // namespace detail

// RAII default-precision override for a scope
class ScopedPrecision {
 public:
  explicit ScopedPrecision(long prec) : saved_(detail::default_prec()) {
    detail::default_prec() = prec;
  }
  ~ScopedPrecision() { detail::default_prec() = saved_; }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  long saved_;
};

class Real {
 public:
  Real() { mpfr_init2(v_, detail::default_prec()); mpfr_set_zero(v_, 1); }
  explicit Real(long prec, bool /*tag*/) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(long x) { mpfr_init2(v_, detail::default_prec()); mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(int x) : Real(static_cast<long>(x)) {}
  Real(double x) { mpfr_init2(v_, detail::default_prec()); mpfr_set_d(v_, x, MPFR_RNDN); }

  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, 64); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real with_prec(long prec) { return Real(prec, true); }
  static Real from_long(long x, long prec) {
    Real r = with_prec(prec);
    mpfr_set_si(r.v_, x, MPFR_RNDN);
    return r;
  }
  static Real pi(long prec) {
    Real r = with_prec(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  // parses decimal or hex ("0x1.8p+1") representations
  static Real from_string(const std::string& s, long prec) {
    Real r = with_prec(prec);
    mpfr_set_str(r.v_, s.c_str(), 0, MPFR_RNDN);
    return r;
  }

  long prec() const { return mpfr_get_prec(v_); }
  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_); }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  std::string str(int digits = 20) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }
  // exact round-trip form
  std::string hex_str() const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra", v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  friend Real operator-(const Real& a) {
    Real r = with_prec(a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

#define IGUSA_REAL_BINOP(op, fn)                                  \
  friend Real operator op(const Real& a, const Real& b) {        \
    Real r = with_prec(std::max(a.prec(), b.prec()));            \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                             \
    return r;                                                     \
  }                                                               \
  friend Real operator op(const Real& a, long b) {               \
    Real r = with_prec(a.prec());                                \
    fn##_si(r.v_, a.v_, b, MPFR_RNDN);                           \
    return r;                                                     \
  }                                                               \
  Real& operator op##=(const Real& b) {                          \
    *this = *this op b;                                          \
    return *this;                                                 \
  }

  IGUSA_REAL_BINOP(+, mpfr_add)
  IGUSA_REAL_BINOP(-, mpfr_sub)
  IGUSA_REAL_BINOP(*, mpfr_mul)
  IGUSA_REAL_BINOP(/, mpfr_div)
#undef IGUSA_REAL_BINOP

  friend Real operator+(long a, const Real& b) { return b + a; }
  friend Real operator*(long a, const Real& b) { return b * a; }
  friend Real operator-(long a, const Real& b) {
    Real r = with_prec(b.prec());
    mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(long a, const Real& b) {
    Real r = with_prec(b.prec());
    mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }

  friend int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const Real& a, const Real& b) { return cmp(a, b) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return cmp(a, b) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return cmp(a, b) <= 0; }
  friend bool operator>=(const Real& a, const Real& b) { return cmp(a, b) >= 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_); }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
  friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }

#define IGUSA_REAL_FN(name, fn)            \
  friend Real name(const Real& a) {        \
    Real r = with_prec(a.prec());          \
    fn(r.v_, a.v_, MPFR_RNDN);             \
    return r;                              \
  }
  IGUSA_REAL_FN(abs, mpfr_abs)
  IGUSA_REAL_FN(sqrt, mpfr_sqrt)
  IGUSA_REAL_FN(exp, mpfr_exp)
  IGUSA_REAL_FN(log, mpfr_log)
  IGUSA_REAL_FN(log2, mpfr_log2)
  IGUSA_REAL_FN(sin, mpfr_sin)
  IGUSA_REAL_FN(cos, mpfr_cos)
  IGUSA_REAL_FN(floor, mpfr_rint_floor)
  IGUSA_REAL_FN(ceil, mpfr_rint_ceil)
  IGUSA_REAL_FN(round_nearest, mpfr_rint_round)
#undef IGUSA_REAL_FN

  friend void sincos(Real& s, Real& c, const Real& a) {
    s = with_prec(a.prec());
    c = with_prec(a.prec());
    mpfr_sin_cos(s.v_, c.v_, a.v_, MPFR_RNDN);
  }
  friend Real pow_si(const Real& a, long e) {
    Real r = with_prec(a.prec());
    mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }
  // a * 2^e, exact
  friend Real ldexp2(const Real& a, long e) {
    Real r = with_prec(a.prec());
    mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }
  friend Real hypot(const Real& a, const Real& b) {
    Real r = with_prec(std::max(a.prec(), b.prec()));
    mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real max(const Real& a, const Real& b) { return a >= b ? a : b; }
  friend Real min(const Real& a, const Real& b) { return a <= b ? a : b; }

 private:
  mpfr_t v_;
};

// 2^(-k) at modest precision, for tolerance thresholds
inline Real pow2(long k, long prec = 64) {
  Real r = Real::with_prec(prec);
  mpfr_set_si_2exp(r.raw(), 1, k, MPFR_RNDN);
  return r;
}

}  // namespace igusa
