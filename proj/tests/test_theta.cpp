#include <doctest.h>

#include <array>
#include <string>
#include <vector>

#include "igusa/theta.hpp"

using namespace igusa;

namespace {

Complex cnum(double re, double im, long prec = 300) {
  Complex z;
  z.re = Real::with_prec(prec) + Real(re);
  z.im = Real::with_prec(prec) + Real(im);
  return z;
}

PeriodMatrix diag_pm(const Complex& a, const Complex& d) {
  PeriodMatrix pm;
  pm.omega(0, 0) = a;
  pm.omega(1, 1) = d;
  pm.omega(0, 1) = cnum(0, 0, a.prec());
  pm.omega(1, 0) = cnum(0, 0, a.prec());
  pm.reduced = true;
  return pm;
}

// independent genus-1 reference: θ[a/2, b/2](τ) = Σ_n exp(πi[(n+a/2)²τ + (2n+a)·b/2])
Complex g1_theta(int a_bit, int b_bit, const Complex& tau, long prec, int terms = 40) {
  Real pi_v = Real::pi(prec);
  Real two = Real::from_long(2, prec);
  Complex s(Real::with_prec(prec), Real::with_prec(prec));
  for (int n = -terms; n <= terms; ++n) {
    Real x = Real::from_long(n, prec) + Real::from_long(a_bit, prec) / two;
    Real q = x * x;
    Complex e(-(pi_v * q * tau.im), pi_v * (q * tau.re + x * Real::from_long(b_bit, prec)));
    s = s + exp(e);
  }
  return s;
}

Real rnum(const char* s, long prec = 360) { return Real::from_string(s, prec); }

}  // namespace

TEST_SUITE_BEGIN("theta");

TEST_CASE("even characteristics come in the frozen order") {
  const auto& chars = even_characteristics();
  REQUIRE(chars.size() == 10);

  const std::array<std::array<int, 4>, 10> expected = {{{0, 0, 0, 0},
                                                        {0, 0, 0, 1},
                                                        {0, 0, 1, 0},
                                                        {0, 0, 1, 1},
                                                        {0, 1, 0, 0},
                                                        {0, 1, 1, 0},
                                                        {1, 0, 0, 0},
                                                        {1, 0, 0, 1},
                                                        {1, 1, 0, 0},
                                                        {1, 1, 1, 1}}};
  for (int i = 0; i < 10; ++i) {
    CAPTURE(i);
    CHECK(chars[i].index == i + 1);
    CHECK(chars[i].half_bits == expected[i]);
    CHECK(chars[i].even());
    for (int j = 0; j < 2; ++j) {
      CHECK((chars[i].m1(j) == 0 || chars[i].m1(j) == Rat(1, 2)));
      CHECK((chars[i].m2(j) == 0 || chars[i].m2(j) == Rat(1, 2)));
    }
  }
  // ((0,0),(0,0)) first, ((1/2,1/2),(1/2,1/2)) last
  CHECK(chars[0].half_bits == std::array<int, 4>{0, 0, 0, 0});
  CHECK(chars[9].half_bits == std::array<int, 4>{1, 1, 1, 1});
}

TEST_CASE("theta at a far-out diagonal point") {
  PrecisionContext ctx(300);
  PeriodMatrix pm = diag_pm(cnum(0, 10), cnum(0, 10));
  Complex t1 = theta_constant(even_characteristics()[0], pm, ctx);
  CHECK(abs(t1 - cnum(1, 0)) < Real(1e-12));
  // dominant correction is 4·e^{−10π} ≈ 9.1e−14; the value is not exactly 1
  CHECK(abs(t1 - cnum(1, 0)) > Real(1e-14));
  // the all-half characteristic factors through an odd genus-1 constant
  Complex t10 = theta_constant(even_characteristics()[9], pm, ctx);
  ThetaVector tv = theta_vector(pm, ctx);
  CHECK(abs(t10) < tv.certified_tail);
}

TEST_CASE("classical value at diag(i, i)") {
  // θ[(0,0),(0,0)](diag(i,i)) = θ₃(i)² with θ₃(i) = π^¼ / Γ(¾)
  PrecisionContext ctx(300);
  PeriodMatrix pm = diag_pm(cnum(0, 1), cnum(0, 1));
  Complex t = theta_constant(even_characteristics()[0], pm, ctx);
  Real t3i = rnum("1.08643481121330801457531612151022345707020571");
  CHECK(abs(t.re - t3i * t3i) < Real(1e-42));
  CHECK(abs(t.im) < Real(1e-42));
}

TEST_CASE("all ten values against an external evaluation") {
  // Ω = [[1/8 + 5/4 i, −1/4 + 3/8 i], [·, 1/16 + 7/4 i]], entries exactly dyadic
  PrecisionContext ctx(300);
  long prec = ctx.working();
  PeriodMatrix pm;
  pm.omega(0, 0) = Complex(rnum("0.125", prec), rnum("1.25", prec));
  pm.omega(0, 1) = Complex(rnum("-0.25", prec), rnum("0.375", prec));
  pm.omega(1, 0) = pm.omega(0, 1);
  pm.omega(1, 1) = Complex(rnum("0.0625", prec), rnum("1.75", prec));

  const char* frozen[10][2] = {
      {"1.04350286963322718525557051657324059496280621",
       "0.0180813744507095775096314194026180978386214746"},
      {"1.02930945455238190668672270711203839440405856",
       "0.0120790791203350319013532506943692720130838648"},
      {"0.972565683835088538429521598704197683338744884",
       "-0.0148848172433600957732768034068836190273600121"},
      {"0.954621993568320066537671950382974948718523208",
       "-0.0152744291189006019076030728149484913909734303"},
      {"0.519149090615526958429591602217386783697021929",
       "0.0542834471799234414207441396492053932653128432"},
      {"0.491563801467767896173552365938506999268566862",
       "-0.00462380145949793192509926540511595642801011234"},
      {"0.751381374273097319975706232634793139196495721",
       "0.0820046797175611372314916616077577274852933315"},
      {"0.740394370041913210573941000688076003359273459",
       "0.0653357741678460749554763217145937471305096792"},
      {"0.394849061084089269337744606909975326954852952",
       "0.150465886000005159541474503798527908474559936"},
      {"0.191244513753481836452327062720721264340019517",
       "0.200802653884430424042622367314835086551681261"}};

  ThetaVector tv = theta_vector(pm, ctx);
  Real tol = Real(1e-42);
  for (int i = 0; i < 10; ++i) {
    CAPTURE(i);
    CHECK(abs(tv.values[i].re - rnum(frozen[i][0], prec)) < tol);
    CHECK(abs(tv.values[i].im - rnum(frozen[i][1], prec)) < tol);
  }
}

TEST_CASE("diagonal period matrices factor into genus-1 constants") {
  PrecisionContext ctx(300);
  long prec = ctx.working();
  Complex tau1(rnum("0.25", prec), rnum("1.0", prec));
  Complex tau2(rnum("-0.375", prec), rnum("1.5", prec));
  PeriodMatrix pm = diag_pm(tau1, tau2);

  ThetaVector tv = theta_vector(pm, ctx);
  Real tol = Real::with_prec(64) + pow2(-140, 64);
  for (const ThetaCharacteristic& ch : even_characteristics()) {
    CAPTURE(ch.index);
    Complex want = g1_theta(ch.half_bits[0], ch.half_bits[2], tau1, prec) *
                   g1_theta(ch.half_bits[1], ch.half_bits[3], tau2, prec);
    CHECK(abs(tv.values[ch.index - 1] - want) < tol);
  }
}

TEST_CASE("batch sweep equals individual evaluation bitwise") {
  PrecisionContext ctx(240);
  long prec = ctx.working();
  PeriodMatrix pm;
  pm.omega(0, 0) = Complex(rnum("0.125", prec), rnum("1.25", prec));
  pm.omega(0, 1) = Complex(rnum("-0.25", prec), rnum("0.375", prec));
  pm.omega(1, 0) = pm.omega(0, 1);
  pm.omega(1, 1) = Complex(rnum("0.0625", prec), rnum("1.75", prec));

  ThetaVector tv = theta_vector(pm, ctx);
  for (const ThetaCharacteristic& ch : even_characteristics()) {
    CAPTURE(ch.index);
    Complex single = theta_constant(ch, pm, ctx);
    CHECK(single.re.hex_str() == tv.values[ch.index - 1].re.hex_str());
    CHECK(single.im.hex_str() == tv.values[ch.index - 1].im.hex_str());
  }
}

TEST_CASE("tail certificate bounds a wider sweep") {
  PrecisionContext ctx(300);
  long prec = ctx.working();
  PeriodMatrix pm;
  pm.omega(0, 0) = Complex(rnum("0.125", prec), rnum("1.25", prec));
  pm.omega(0, 1) = Complex(rnum("-0.25", prec), rnum("0.375", prec));
  pm.omega(1, 0) = pm.omega(0, 1);
  pm.omega(1, 1) = Complex(rnum("0.0625", prec), rnum("1.75", prec));

  ThetaVector tv = theta_vector(pm, ctx);
  CHECK(tv.certified_tail <= pow2(-static_cast<long>(ctx.tail_bits), 64));
  CHECK(tv.truncation_radius >= 2);

  ThetaVector wide = theta_vector(pm, ctx, 4096, tv.truncation_radius + 2);
  for (int i = 0; i < 10; ++i) {
    CAPTURE(i);
    CHECK(abs(tv.values[i] - wide.values[i]) < tv.certified_tail);
  }
}

TEST_CASE("doubling the precision stays within the previous tail") {
  PrecisionContext coarse(300), fine(600);
  auto eval = [&](const PrecisionContext& ctx) {
    long prec = ctx.working();
    PeriodMatrix pm;
    pm.omega(0, 0) = Complex(rnum("0.125", prec), rnum("1.25", prec));
    pm.omega(0, 1) = Complex(rnum("-0.25", prec), rnum("0.375", prec));
    pm.omega(1, 0) = pm.omega(0, 1);
    pm.omega(1, 1) = Complex(rnum("0.0625", prec), rnum("1.75", prec));
    return theta_vector(pm, ctx);
  };
  ThetaVector a = eval(coarse);
  ThetaVector b = eval(fine);
  for (int i = 0; i < 10; ++i) {
    CAPTURE(i);
    CHECK(abs(a.values[i] - b.values[i]) < a.certified_tail);
  }
}

TEST_CASE("infeasible radius is reported, not silently truncated") {
  PrecisionContext ctx(300);
  // λmin = 2^−20 forces a five-digit radius, beyond the cap
  PeriodMatrix thin = diag_pm(Complex(rnum("0", 300), pow2(-20, 300)), cnum(0, 1));
  CHECK_THROWS_AS(theta_vector(thin, ctx), PrecisionInfeasible);
  // Im Ω not positive definite at all
  PeriodMatrix flipped = diag_pm(cnum(0, -1), cnum(0, 1));
  CHECK_THROWS_AS(theta_vector(flipped, ctx), PrecisionInfeasible);
  CHECK_THROWS_AS(theta_truncation_radius(Real::with_prec(64), 150), PrecisionInfeasible);
}

TEST_CASE("product of squares vanishes only for decomposable points") {
  PrecisionContext ctx(300);
  long prec = ctx.working();

  auto h10 = [&](const PeriodMatrix& pm) {
    ThetaVector tv = theta_vector(pm, ctx);
    Complex p(Real::from_long(1, prec), Real::with_prec(prec));
    for (const Complex& t : tv.values) p = p * t * t;
    return p;
  };

  PeriodMatrix split = diag_pm(cnum(0.25, 1.0), cnum(-0.375, 1.5));
  CHECK(abs(h10(split)) < pow2(-250, 64));

  PeriodMatrix generic;
  generic.omega(0, 0) = Complex(rnum("0.125", prec), rnum("1.25", prec));
  generic.omega(0, 1) = Complex(rnum("-0.25", prec), rnum("0.375", prec));
  generic.omega(1, 0) = generic.omega(0, 1);
  generic.omega(1, 1) = Complex(rnum("0.0625", prec), rnum("1.75", prec));
  CHECK(abs(h10(generic)) > Real(1e-8));
}

TEST_SUITE_END();
