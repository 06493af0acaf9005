#include <doctest.h>

#include <vector>

#include "igusa/classpoly.hpp"

using namespace igusa;

namespace {

Complex cnum(double re, double im, long prec = 364) {
  Complex z;
  z.re = Real::with_prec(prec) + Real(re);
  z.im = Real::with_prec(prec) + Real(im);
  return z;
}

Complex from_rat(const Rat& q, long prec = 364) {
  return Complex(to_real(q, prec), Real::with_prec(prec));
}

IgusaPoint point(const Complex& j1, const Complex& j2, const Complex& j3) {
  IgusaPoint p;
  p.j1 = j1;
  p.j2 = j2;
  p.j3 = j3;
  return p;
}

Complex horner(const std::vector<Complex>& c, const Complex& x) {
  Complex acc = c.back();
  for (size_t i = c.size() - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

std::vector<Rat> rats(std::initializer_list<Rat> l) { return std::vector<Rat>(l); }

}  // namespace

TEST_SUITE_BEGIN("classpoly");

TEST_CASE("assemble expands the root products") {
  PrecisionContext ctx(300);

  // single vanishing point: all three polynomials are x
  std::vector<IgusaPoint> one{point(cnum(0, 0), cnum(0, 0), cnum(0, 0))};
  FloatPolynomials fp = assemble(one, ctx);
  for (int k = 0; k < 3; ++k) {
    REQUIRE(fp.h[k].size() == 2);
    CHECK(abs(fp.h[k][0]).is_zero());
    CHECK(fp.h[k][1].re == 1);
  }

  // roots {1, 2} → x² − 3x + 2
  std::vector<IgusaPoint> two{point(cnum(1, 0), cnum(1, 0), cnum(1, 0)),
                              point(cnum(2, 0), cnum(2, 0), cnum(2, 0))};
  fp = assemble(two, ctx);
  for (int k = 0; k < 3; ++k) {
    REQUIRE(fp.h[k].size() == 3);
    CHECK(fp.h[k][0].re == 2);
    CHECK(fp.h[k][1].re == -3);
    CHECK(fp.h[k][2].re == 1);
    CHECK(fp.h[k][0].im.is_zero());
  }

  CHECK_THROWS_AS(assemble({}, ctx), std::invalid_argument);
}

TEST_CASE("assembled polynomials vanish at their roots") {
  PrecisionContext ctx(300);
  std::vector<IgusaPoint> pts{
      point(cnum(1.5, 2.25), cnum(-0.75, 0.5), cnum(3.0, -1.0)),
      point(cnum(1.5, -2.25), cnum(-0.75, -0.5), cnum(3.0, 1.0)),
      point(cnum(-4.0, 0.125), cnum(2.0, -3.5), cnum(0.25, 0.0625)),
      point(cnum(-4.0, -0.125), cnum(2.0, 3.5), cnum(0.25, -0.0625)),
  };
  FloatPolynomials fp = assemble(pts, ctx);
  Real tol = pow2(-300, 64);
  for (int k = 0; k < 3; ++k)
    for (const IgusaPoint& p : pts) {
      const Complex& root = k == 0 ? p.j1 : (k == 1 ? p.j2 : p.j3);
      CHECK(abs(horner(fp.h[k], root)) < tol);
    }
  // the set above is closed under conjugation: coefficients are real
  CHECK(fp.max_imag < tol);

  // an unpaired complex point leaves imaginary residue
  std::vector<IgusaPoint> open{point(cnum(1.5, 2.25), cnum(1, 1), cnum(0, 1))};
  CHECK(assemble(open, ctx).max_imag > Real(1.0));
}

TEST_CASE("reconstruction recovers planted rationals and is idempotent") {
  PrecisionContext ctx(300);
  long prec = ctx.working();
  FloatPolynomials fp;
  fp.max_coeff = Real::from_long(1, 64);
  fp.max_imag = Real::with_prec(64);
  for (int k = 0; k < 3; ++k)
    fp.h[k] = {from_rat(Rat(1, 2), prec), from_rat(Rat(-3, 4), prec),
               from_rat(Rat(1), prec)};

  auto set = reconstruct(fp, Int(1) << 100, ctx);
  REQUIRE(set.has_value());
  for (int k = 0; k < 3; ++k) CHECK(set->h[k] == rats({Rat(1, 2), Rat(-3, 4), Rat(1)}));
  CHECK(set->residual < pow2(-290, 64));
  CHECK(set->precision_used == 300);
  CHECK_FALSE(set->stable);

  // a non-monic tail is rejected rather than normalized
  fp.h[1].back() = from_rat(Rat(2), prec);
  CHECK_FALSE(reconstruct(fp, Int(1) << 100, ctx).has_value());
}

TEST_CASE("reconstruction refuses irrational coefficients") {
  PrecisionContext ctx(300);
  long prec = ctx.working();
  FloatPolynomials fp;
  fp.max_coeff = Real::from_long(2, 64);
  fp.max_imag = Real::with_prec(64);
  Complex sqrt2(sqrt(Real::from_long(2, prec)), Real::with_prec(prec));
  for (int k = 0; k < 3; ++k) fp.h[k] = {sqrt2, from_rat(Rat(1), prec)};
  CHECK_FALSE(reconstruct(fp, Int(1) << 24, ctx).has_value());
}

namespace {

// additive noise with the low-bit garbage texture of a real float pipeline:
// scaling by √2 keeps every convergent denominator growing past the cap
Real float_noise(long log2_size, long prec) {
  return sqrt(Real::from_long(2, prec)) * pow2(log2_size, prec);
}

}  // namespace

TEST_CASE("escalation ladder settles after noise fades") {
  // harness: coefficients {1/2, −3/4, 1} with additive noise that shrinks as the
  // precision grows — NoMatch at 300 bits, clean from 600 bits on
  auto produce = [](const PrecisionContext& ctx) {
    long prec = ctx.working();
    Real noise = float_noise(ctx.bits <= 300 ? -50 : -static_cast<long>(ctx.bits), prec);
    FloatPolynomials fp;
    fp.max_coeff = Real::from_long(1, 64);
    fp.max_imag = Real::with_prec(64);
    for (int k = 0; k < 3; ++k) {
      fp.h[k] = {from_rat(Rat(1, 2), prec), from_rat(Rat(-3, 4), prec), from_rat(Rat(1), prec)};
      fp.h[k][0].re = fp.h[k][0].re + noise;
    }
    return fp;
  };
  ClassPolynomialSet set = reconstruct_with_escalation(produce, 300, 4);
  CHECK(set.stable);
  CHECK(set.precision_used == 1200);  // 600 and 1200 agreed
  for (int k = 0; k < 3; ++k) CHECK(set.h[k] == rats({Rat(1, 2), Rat(-3, 4), Rat(1)}));
}

TEST_CASE("escalation ladder reports failure modes honestly") {
  auto noisy = [](const PrecisionContext& ctx) {
    long prec = ctx.working();
    FloatPolynomials fp;
    fp.max_coeff = Real::from_long(1, 64);
    fp.max_imag = Real::with_prec(64);
    for (int k = 0; k < 3; ++k) {
      fp.h[k] = {from_rat(Rat(1, 2), prec), from_rat(Rat(1), prec)};
      fp.h[k][0].re = fp.h[k][0].re + float_noise(-50, prec);  // never fades
    }
    return fp;
  };
  CHECK_THROWS_AS(reconstruct_with_escalation(noisy, 300, 2), ReconstructionUnstable);

  // clean only at the last rung: best effort, not stamped stable
  auto late = [](const PrecisionContext& ctx) {
    long prec = ctx.working();
    Real noise = ctx.bits < 1200 ? float_noise(-50, prec) : Real::with_prec(prec);
    FloatPolynomials fp;
    fp.max_coeff = Real::from_long(1, 64);
    fp.max_imag = Real::with_prec(64);
    for (int k = 0; k < 3; ++k) {
      fp.h[k] = {from_rat(Rat(1, 2), prec), from_rat(Rat(1), prec)};
      fp.h[k][0].re = fp.h[k][0].re + noise;
    }
    return fp;
  };
  ClassPolynomialSet late_set = reconstruct_with_escalation(late, 300, 2);
  CHECK_FALSE(late_set.stable);
  CHECK(late_set.precision_used == 1200);
  CHECK(late_set.h[0] == rats({Rat(1, 2), Rat(1)}));
}

TEST_CASE("discriminants, denominators, factorizations") {
  ClassPolynomialSet set;
  set.h[0] = rats({Rat(0), Rat(1)});                      // x
  set.h[1] = rats({Rat(-1, 8), Rat(-1, 4), Rat(1)});      // x² − x/4 − 1/8
  set.h[2] = rats({Rat(-6), Rat(11), Rat(-6), Rat(1)});   // (x−1)(x−2)(x−3)
  DiscriminantData dd = discriminant_data(set);

  CHECK(dd.disc[0] == Rat(1));
  CHECK(dd.denominators[0] == 1);
  CHECK(dd.factored[0].factors.empty());

  CHECK(dd.disc[1] == Rat(9, 16));
  CHECK(dd.denominators[1] == 16);
  REQUIRE(dd.factored[1].factors.size() == 1);
  CHECK(dd.factored[1].factors[0].prime == 2);
  CHECK(dd.factored[1].factors[0].exponent == 4);

  // ∏_{i<j}(r_i − r_j)² for roots {1,2,3}
  CHECK(dd.disc[2] == Rat(4));
  CHECK(dd.denominators[2] == 1);

  // disc denominator divides lcm(coefficient denominators)^(2n−2)
  for (int k = 0; k < 3; ++k) {
    Int l(1);
    for (const Rat& c : set.h[k]) l = lcm(l, den(c));
    long n = static_cast<long>(set.h[k].size()) - 1;
    if (n >= 2) {
      Int bound = pow_int(l, static_cast<unsigned long>(2 * n - 2));
      CHECK(bound % dd.denominators[k] == 0);
    }
  }
}

TEST_SUITE_END();
