#pragma once

// Complex numbers over Real (component-wise MPFR arithmetic).

#include "igusa/real.hpp"

namespace igusa {

struct Complex {
  Real re, im;

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im(Real::with_prec(re.prec())) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(long r) : re(r), im(0L) {}
  Complex(int r) : Complex(static_cast<long>(r)) {}
  Complex(double r) : re(r), im(0.0) {}

  static Complex with_prec(long prec) {
    return Complex(Real::with_prec(prec), Real::with_prec(prec));
  }

  long prec() const { return std::max(re.prec(), im.prec()); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator+(const Complex& a, const Complex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Complex operator-(const Complex& a, const Complex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
  friend Complex operator*(const Real& a, const Complex& b) { return b * a; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  friend Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }
  Complex& operator+=(const Complex& b) { re += b.re; im += b.im; return *this; }
  Complex& operator-=(const Complex& b) { re -= b.re; im -= b.im; return *this; }
  Complex& operator*=(const Complex& b) { *this = *this * b; return *this; }
  Complex& operator/=(const Complex& b) { *this = *this / b; return *this; }

  friend bool operator==(const Complex& a, const Complex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

  friend Complex conj(const Complex& a) { return {a.re, -a.im}; }
  friend Real abs2(const Complex& a) { return a.re * a.re + a.im * a.im; }
  friend Real abs(const Complex& a) { return hypot(a.re, a.im); }
  friend Complex exp(const Complex& a) {
    Real m = exp(a.re), s = Real::with_prec(a.prec()), c = Real::with_prec(a.prec());
    sincos(s, c, a.im);
    return {m * c, m * s};
  }
  friend Complex pow_ui(Complex a, unsigned long e) {
    Complex r(Real::from_long(1, a.prec()), Real::with_prec(a.prec()));
    while (e) {
      if (e & 1) r *= a;
      a *= a;
      e >>= 1;
    }
    return r;
  }
  // principal square root
  friend Complex sqrt(const Complex& a) {
    Real m = abs(a);
    Real u = sqrt((m + a.re) / 2L);
    Real v = sqrt((m - a.re) / 2L);
    if (a.im.sign() < 0) v = -v;
    return {u, v};
  }

  std::string str(int digits = 20) const {
    return "(" + re.str(digits) + (im.sign() < 0 ? " - " : " + ") +
           abs(im).str(digits) + "i)";
  }
};

}  // namespace igusa
