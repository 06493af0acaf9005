#pragma once

// Eigen scalar-trait glue for Int/Rat (via Boost) and Real/Complex.

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>
#include <Eigen/LU>

#include "igusa/bigcomplex.hpp"
#include "igusa/rational.hpp"

namespace Eigen {

template <>
struct NumTraits<igusa::Real> : GenericNumTraits<igusa::Real> {
  typedef igusa::Real Real;
  typedef igusa::Real NonInteger;
  typedef igusa::Real Nested;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 30,
    MulCost = 60
  };
  static inline Real epsilon() { return igusa::pow2(-100); }
  static inline Real dummy_precision() { return igusa::pow2(-80); }
  static inline int digits10() { return 30; }
};

template <>
struct NumTraits<igusa::Complex> : GenericNumTraits<igusa::Complex> {
  typedef igusa::Real Real;
  typedef igusa::Complex NonInteger;
  typedef igusa::Complex Nested;
  enum {
    IsComplex = 1,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 60,
    MulCost = 240
  };
  static inline Real epsilon() { return igusa::pow2(-100); }
  static inline Real dummy_precision() { return igusa::pow2(-80); }
  static inline int digits10() { return 30; }
};

}  // namespace Eigen

namespace igusa {

using Vec4q = Eigen::Matrix<Rat, 4, 1>;  // field element, power-basis coords
using Mat4q = Eigen::Matrix<Rat, 4, 4>;
using Vec4z = Eigen::Matrix<Int, 4, 1>;
using Mat4z = Eigen::Matrix<Int, 4, 4>;
using MatXz = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using MatXq = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using VecXz = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using Mat2c = Eigen::Matrix<Complex, 2, 2>;
using Mat2r = Eigen::Matrix<Real, 2, 2>;

inline Mat2c inverse2(const Mat2c& m) {
  Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Mat2c r;
  r(0, 0) = m(1, 1) / det;
  r(0, 1) = -m(0, 1) / det;
  r(1, 0) = -m(1, 0) / det;
  r(1, 1) = m(0, 0) / det;
  return r;
}

inline Complex det2(const Mat2c& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

}  // namespace igusa
