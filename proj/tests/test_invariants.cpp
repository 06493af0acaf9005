#include <doctest.h>

#include <array>
#include <vector>

#include "igusa/classgroup.hpp"
#include "igusa/invariants.hpp"

using namespace igusa;

namespace {

Complex cnum(double re, double im, long prec = 300) {
  Complex z;
  z.re = Real::with_prec(prec) + Real(re);
  z.im = Real::with_prec(prec) + Real(im);
  return z;
}

Real rnum(const char* s, long prec = 360) { return Real::from_string(s, prec); }

ThetaVector const_vector(const Complex& v) {
  ThetaVector tv;
  for (Complex& t : tv.values) t = v;
  return tv;
}

PeriodMatrix dyadic_pm(long prec) {
  PeriodMatrix pm;
  pm.omega(0, 0) = Complex(rnum("0.125", prec), rnum("1.25", prec));
  pm.omega(0, 1) = Complex(rnum("-0.25", prec), rnum("0.375", prec));
  pm.omega(1, 0) = pm.omega(0, 1);
  pm.omega(1, 1) = Complex(rnum("0.0625", prec), rnum("1.75", prec));
  pm.reduced = true;
  return pm;
}

// j-invariants of a CM field's first class/type, Siegel-reduced, at ctx
IgusaPoint cm_point(long a, long b, const PrecisionContext& ctx) {
  CMField k = cmfield_from_quartic(Int(a), Int(b));
  auto classes = class_group(k);
  auto types = cm_types(k);
  auto pols = polarizations(k, classes[0], types[0]);
  PeriodMatrix pm = period_matrix(k, classes[0], types[0], pols[0], ctx);
  SiegelReduction red = siegel_reduce(pm.omega, ctx);
  PeriodMatrix rpm;
  rpm.omega = red.omega;
  rpm.reduced = true;
  return igusa_point(modular_values(theta_vector(rpm, ctx)));
}

Real rel_err(const Complex& got, const Complex& want) {
  Real scale = abs(want);
  if (!(scale.sign() > 0)) return abs(got - want);
  return abs(got - want) / scale;
}

}  // namespace

TEST_SUITE_BEGIN("invariants");

TEST_CASE("tuple tables carry the locked term counts") {
  CHECK(g_tuples().size() == 15);
  CHECK(f_tuples().size() == 60);
  for (const auto& t : g_tuples())
    for (int i : t) {
      CHECK(i >= 1);
      CHECK(i <= 10);
    }
  for (const auto& t : f_tuples()) {
    for (int i : t) {
      CHECK(i >= 1);
      CHECK(i <= 10);
    }
    // each f-term repeats exactly one index
    std::array<int, 11> count{};
    for (int i : t) ++count[i];
    int repeats = 0;
    for (int c : count) repeats += (c == 2);
    CHECK(repeats == 1);
  }

  // unit thetas count the terms
  ThetaVector ones = const_vector(cnum(1, 0));
  ModularValues mv = modular_values(ones);
  CHECK(mv.h4.re == 10);
  CHECK(mv.h4.im.is_zero());
  CHECK(mv.h10.re == 1);
  CHECK(mv.h12.re == 15);
  CHECK(mv.h16.re == 60);
}

TEST_CASE("helper powers and argument order") {
  ThetaVector twos = const_vector(cnum(2, 0));
  Complex f = helper_f({1, 2, 3, 4, 5, 6, 7, 8}, twos);
  Complex g = helper_g({1, 5, 2, 9, 6, 10}, twos);
  CHECK(f.re == (1L << 32));
  CHECK(f.im.is_zero());
  CHECK(g.re == (1L << 24));

  // exact permutation invariance on power-of-two inputs
  ThetaVector pows;
  for (int i = 0; i < 10; ++i) pows.values[i] = cnum(double(1L << i), 0);
  Complex g1 = helper_g({1, 5, 2, 9, 6, 10}, pows);
  Complex g2 = helper_g({10, 9, 6, 5, 2, 1}, pows);
  CHECK(g1.re.hex_str() == g2.re.hex_str());
  Complex f1 = helper_f({8, 1, 5, 2, 9, 6, 8, 10}, pows);
  Complex f2 = helper_f({10, 8, 9, 6, 5, 2, 1, 8}, pows);
  CHECK(f1.re.hex_str() == f2.re.hex_str());

  CHECK_THROWS_AS(helper_g({0, 1, 2, 3, 4, 5}, twos), IndexOutOfRange);
  CHECK_THROWS_AS(helper_f({1, 2, 3, 4, 5, 6, 7, 11}, twos), IndexOutOfRange);
}

TEST_CASE("igusa point formula plumbing") {
  ModularValues mv;
  mv.h4 = cnum(1, 0);
  mv.h10 = cnum(1, 0);
  mv.h12 = cnum(1, 0);
  mv.h16 = cnum(1, 0);
  IgusaPoint p = igusa_point(mv);
  CHECK(p.j1.re == 1);
  CHECK(p.j2.re == 1);
  CHECK(p.j3.re == 1);

  mv.h4 = cnum(0, 0);
  mv.h12 = cnum(0, 0);
  mv.h16 = cnum(0, 0);
  p = igusa_point(mv);
  CHECK(p.j1.re.is_zero());
  CHECK(p.j2.re.is_zero());
  CHECK(p.j3.re.is_zero());

  mv.h10 = cnum(0, 0);
  CHECK_THROWS_AS(igusa_point(mv), DecomposablePoint);
}

TEST_CASE("decomposable points are refused with their floor") {
  PrecisionContext ctx(300);
  PeriodMatrix split;
  split.omega(0, 0) = cnum(0.25, 1.0);
  split.omega(1, 1) = cnum(-0.375, 1.5);
  split.omega(0, 1) = cnum(0, 0);
  split.omega(1, 0) = cnum(0, 0);
  ModularValues mv = modular_values(theta_vector(split, ctx));
  CHECK(abs(mv.h10) < mv.floor);
  CHECK_THROWS_AS(igusa_point(mv), DecomposablePoint);
}

TEST_CASE("weights 4/10/12/16 under the symplectic inversion") {
  // certifies the characteristic numbering: only the source convention makes
  // the appendix sums transform as modular forms
  PrecisionContext ctx(300);
  long prec = ctx.working();
  PeriodMatrix pm = dyadic_pm(prec);

  std::vector<Mat4z> gammas;
  gammas.push_back(symplectic_j());
  gammas.push_back(Mat4z(detail::translation_block(Int(1), Int(0), Int(-1)) * symplectic_j()));
  gammas.push_back(Mat4z(symplectic_j() * detail::gl2_block(1, 1, 0, 1) *
                         detail::translation_block(Int(0), Int(-1), Int(1))));

  ModularValues base = modular_values(theta_vector(pm, ctx));
  Real tol = pow2(-static_cast<long>(ctx.tail_bits) / 2, 64);

  for (size_t gi = 0; gi < gammas.size(); ++gi) {
    CAPTURE(gi);
    const Mat4z& g = gammas[gi];
    PeriodMatrix moved;
    moved.omega = symplectic_apply(g, pm.omega);
    // det(CΩ + D) from the lower blocks
    Mat2c den;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        den(i, j) = Complex(Real::from_long(g(2 + i, 2 + j).convert_to<long>(), prec),
                            Real::with_prec(prec));
        for (int t = 0; t < 2; ++t)
          den(i, j) = den(i, j) + Real::from_long(g(2 + i, t).convert_to<long>(), prec) *
                                      pm.omega(t, j);
      }
    Complex det = det2(den);

    ModularValues moved_mv = modular_values(theta_vector(moved, ctx));
    CHECK(rel_err(moved_mv.h4, base.h4 * pow_ui(det, 4)) < tol);
    CHECK(rel_err(moved_mv.h10, base.h10 * pow_ui(det, 10)) < tol);
    CHECK(rel_err(moved_mv.h12, base.h12 * pow_ui(det, 12)) < tol);
    CHECK(rel_err(moved_mv.h16, base.h16 * pow_ui(det, 16)) < tol);
  }
}

TEST_CASE("homogeneity in the theta vector") {
  PrecisionContext ctx(300);
  ThetaVector tv = theta_vector(dyadic_pm(ctx.working()), ctx);
  Complex c = cnum(0.7, 0.2, ctx.working());

  ThetaVector scaled = tv;
  for (Complex& t : scaled.values) t = t * c;

  ModularValues a = modular_values(tv);
  ModularValues b = modular_values(scaled);
  Real tol = pow2(-180, 64);
  CHECK(rel_err(b.h4, a.h4 * pow_ui(c, 8)) < tol);
  CHECK(rel_err(b.h10, a.h10 * pow_ui(c, 20)) < tol);
  CHECK(rel_err(b.h12, a.h12 * pow_ui(c, 24)) < tol);
  CHECK(rel_err(b.h16, a.h16 * pow_ui(c, 32)) < tol);

  IgusaPoint pa = igusa_point(a);
  IgusaPoint pb = igusa_point(b);
  CHECK(rel_err(pb.j1, pa.j1) < tol);
  CHECK(rel_err(pb.j2, pa.j2) < tol);
  CHECK(rel_err(pb.j3, pa.j3) < tol);
}

TEST_CASE("zeta5 point has vanishing absolute invariants") {
  PrecisionContext ctx(300);
  IgusaPoint p = cm_point(5, 5, ctx);
  Real tol = Real::from_string("1e-45", 64);
  CHECK(abs(p.j1) < tol);
  CHECK(abs(p.j2) < tol);
  CHECK(abs(p.j3) < tol);
}

TEST_CASE("absolute invariants survive symplectic scrambling") {
  PrecisionContext ctx(300);
  CMField k = cmfield_from_quartic(Int(4), Int(2));
  auto classes = class_group(k);
  auto types = cm_types(k);
  auto pols = polarizations(k, classes[0], types[0]);
  PeriodMatrix pm = period_matrix(k, classes[0], types[0], pols[0], ctx);
  SiegelReduction red0 = siegel_reduce(pm.omega, ctx);
  PeriodMatrix home;
  home.omega = red0.omega;
  home.reduced = true;
  IgusaPoint base = igusa_point(modular_values(theta_vector(home, ctx)));

  // 20 deterministic words in the generators
  std::vector<Mat4z> words;
  Mat4z j = symplectic_j();
  long seeds[20][3] = {{1, 0, -1}, {2, 1, 0},  {0, -1, 1}, {-2, 1, 1}, {1, 1, 1},
                       {3, 0, 0},  {0, 2, -1}, {1, -2, 0}, {-1, 0, 2}, {2, -1, -2},
                       {0, 1, 0},  {1, 2, -1}, {-3, 1, 0}, {2, 0, 1},  {0, 0, -2},
                       {1, -1, 1}, {-1, 2, 0}, {2, 2, 2},  {0, -2, 1}, {-2, 0, -1}};
  for (int i = 0; i < 20; ++i) {
    Mat4z w = Mat4z(detail::translation_block(Int(seeds[i][0]), Int(seeds[i][1]),
                                              Int(seeds[i][2])) *
                    j);
    if (i % 3 == 1) w = Mat4z(w * detail::gl2_block(1, (i % 5) - 2, 0, 1));
    if (i % 4 == 2) w = Mat4z(j * w);
    words.push_back(w);
  }

  Real tol = pow2(-static_cast<long>(ctx.tail_bits) / 2, 64);
  for (size_t wi = 0; wi < words.size(); ++wi) {
    CAPTURE(wi);
    REQUIRE(is_symplectic(words[wi]));
    Mat2c scrambled = symplectic_apply(words[wi], home.omega);
    SiegelReduction red = siegel_reduce(scrambled, ctx);
    PeriodMatrix there;
    there.omega = red.omega;
    there.reduced = true;
    IgusaPoint p = igusa_point(modular_values(theta_vector(there, ctx)));
    CHECK(rel_err(p.j1, base.j1) < tol);
    CHECK(rel_err(p.j2, base.j2) < tol);
    CHECK(rel_err(p.j3, base.j3) < tol);
  }
}

TEST_SUITE_END();
