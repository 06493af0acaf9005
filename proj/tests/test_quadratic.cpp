#include <doctest.h>

#include <optional>
#include <random>
#include <vector>

#include "igusa/quadratic.hpp"

using namespace igusa;

TEST_SUITE_BEGIN("quadratic");

namespace {

bool is_squarefree_small(long n) {
  for (long k = 2; k * k <= n; ++k)
    if (n % (k * k) == 0) return false;
  return true;
}

// minimal unit > 1 by scanning v: 2u + tv = ±√(v²·disc ± 4)
std::optional<QuadElem> brute_unit(const QuadField& f, long vmax) {
  for (long v = 1; v <= vmax; ++v) {
    for (int sg : {-1, 1}) {
      Int s2 = Int(v) * Int(v) * f.disc + Int(4 * sg);
      if (s2 < 0 || !is_square(s2)) continue;
      Int s = isqrt(s2);
      Int twou = s - f.t * Int(v);
      if (mod_floor(twou, Int(2)) != 0) continue;
      return QuadElem{Rat(twou / 2), Rat(v)};
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("field construction and element arithmetic") {
  QuadField f5 = make_quad_field(Int(5));
  CHECK(f5.t == 1);
  CHECK(f5.n == -1);
  CHECK(f5.disc == 5);
  QuadField f2 = make_quad_field(Int(2));
  CHECK(f2.t == 0);
  CHECK(f2.n == -2);
  CHECK(f2.disc == 8);
  CHECK_THROWS(make_quad_field(Int(9)));
  CHECK_THROWS(make_quad_field(Int(1)));

  // ω satisfies its minimal polynomial
  QuadElem w = qelem(0, 1);
  QuadElem lhs = qmul(f5, w, w);
  QuadElem rhs = qsub(qscale(w, Rat(f5.t)), qelem(0));
  rhs.u -= Rat(f5.n);
  CHECK(qeq(lhs, rhs));

  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    QuadElem a{Rat(static_cast<long>(rng() % 19) - 9), Rat(static_cast<long>(rng() % 19) - 9)};
    QuadElem b{Rat(static_cast<long>(rng() % 19) - 9), Rat(static_cast<long>(rng() % 19) - 9)};
    CHECK(qeq(qmul(f5, a, b), qmul(f5, b, a)));
    CHECK(qnorm(f5, qmul(f5, a, b)) == qnorm(f5, a) * qnorm(f5, b));
    CHECK(qnorm(f5, a) == qnorm(f5, qconj(f5, a)));
    if (!qis_zero(b)) CHECK(qeq(qmul(f5, qdiv(f5, a, b), b), a));
  }
}

TEST_CASE("embeddings are the two real roots") {
  for (long d0 : {2L, 5L, 13L, 21L}) {
    QuadField f = make_quad_field(Int(d0));
    QuadElem w = qelem(0, 1);
    for (bool cj : {false, true}) {
      Real x = quad_to_real(f, w, 256, cj);
      Real res = x * x - x * f.t.convert_to<long>() + f.n.convert_to<long>();
      CHECK(abs(res) < pow2(-200));
    }
    CHECK(quad_to_real(f, w, 256, false).to_double() > quad_to_real(f, w, 256, true).to_double());
  }
}

TEST_CASE("squarefree decomposition") {
  auto p = squarefree_decompose(Int(12));
  CHECK(p.square_root == 2);
  CHECK(p.core == 3);
  p = squarefree_decompose(Int(720));
  CHECK(p.square_root == 12);
  CHECK(p.core == 5);
  p = squarefree_decompose(Int(49));
  CHECK(p.square_root == 7);
  CHECK(p.core == 1);
  p = squarefree_decompose(Int(-18));
  CHECK(p.square_root == 3);
  CHECK(p.core == -2);
  std::mt19937_64 rng(32);
  for (int i = 0; i < 40; ++i) {
    Int n = Int(1 + rng() % 100000);
    auto sp = squarefree_decompose(n);
    CHECK(sp.square_root * sp.square_root * sp.core == n);
    CHECK(is_squarefree_small(sp.core.convert_to<long>()));
  }
}

TEST_CASE("fundamental unit anchors") {
  // golden ratio
  QuadUnit u5 = fundamental_unit(make_quad_field(Int(5)));
  CHECK(u5.eps.u == 0);
  CHECK(u5.eps.v == 1);
  CHECK(u5.norm_sign == -1);
  // 1 + √2
  QuadUnit u2 = fundamental_unit(make_quad_field(Int(2)));
  CHECK(u2.eps.u == 1);
  CHECK(u2.eps.v == 1);
  CHECK(u2.norm_sign == -1);
  // 2 + √3
  QuadUnit u3 = fundamental_unit(make_quad_field(Int(3)));
  CHECK(u3.eps.u == 2);
  CHECK(u3.eps.v == 1);
  CHECK(u3.norm_sign == 1);
  // (3+√13)/2
  QuadUnit u13 = fundamental_unit(make_quad_field(Int(13)));
  CHECK(u13.eps.u == 1);
  CHECK(u13.eps.v == 1);
  CHECK(u13.norm_sign == -1);
  // 4 + √17
  QuadUnit u17 = fundamental_unit(make_quad_field(Int(17)));
  CHECK(u17.eps.u == 3);
  CHECK(u17.eps.v == 2);
  CHECK(u17.norm_sign == -1);
  // long Pell cycle
  QuadUnit u94 = fundamental_unit(make_quad_field(Int(94)));
  CHECK(u94.eps.u == 2143295);
  CHECK(u94.eps.v == 221064);
  CHECK(u94.norm_sign == 1);
}

TEST_CASE("fundamental unit matches brute-force scan for small radicands") {
  for (long d0 = 2; d0 <= 60; ++d0) {
    if (!is_squarefree_small(d0)) continue;
    QuadField f = make_quad_field(Int(d0));
    QuadUnit u = fundamental_unit(f);
    // unit norm is ±1 exactly
    Rat nn = qnorm(f, u.eps);
    CHECK(abs_rat(nn) == 1);
    CHECK(nn == Rat(u.norm_sign));
    auto b = brute_unit(f, 1 << 16);
    REQUIRE(b.has_value());
    CHECK(u.eps.u == b->u);
    CHECK(u.eps.v == b->v);
  }
}

TEST_CASE("principal ideals round-trip to a generator") {
  std::mt19937_64 rng(33);
  for (long d0 : {2L, 5L, 10L, 13L, 15L, 21L}) {
    QuadField f = make_quad_field(Int(d0));
    for (int i = 0; i < 12; ++i) {
      QuadElem g{Rat(static_cast<long>(rng() % 13) - 6), Rat(static_cast<long>(rng() % 13) - 6)};
      if (qis_zero(g)) g = qelem(3, 1);
      // ideal (g) presented by the generators {g, (1+ω)g}
      QuadIdeal I = quad_ideal(f, {g, qmul(f, g, qelem(1, 1))});
      CHECK(quad_ideal_norm(I) == abs_rat(qnorm(f, g)));
      auto rec = principal_generator(f, I);
      REQUIRE(rec.has_value());
      CHECK(abs_rat(qnorm(f, *rec)) == abs_rat(qnorm(f, g)));
      // rec/g must be a unit with integral coordinates
      QuadElem ratio = qdiv(f, *rec, g);
      CHECK(qis_integral(ratio));
      CHECK(abs_rat(qnorm(f, ratio)) == 1);
    }
  }
}

TEST_CASE("unit ideal and scaled copies") {
  QuadField f = make_quad_field(Int(5));
  QuadIdeal one = quad_ideal(f, {qelem(1)});
  auto g = principal_generator(f, one);
  REQUIRE(g.has_value());
  CHECK(abs_rat(qnorm(f, *g)) == 1);
  // fractional scaling
  QuadIdeal half = quad_ideal(f, {QuadElem{Rat(1) / Rat(2), Rat(0)}, QuadElem{Rat(0), Rat(1) / Rat(2)}});
  auto gh = principal_generator(f, half);
  REQUIRE(gh.has_value());
  CHECK(abs_rat(qnorm(f, *gh)) == Rat(1) / Rat(4));
}

TEST_CASE("non-principal primes are rejected") {
  // prime above 2 in Q(√10): x² − 10y² = ±2 has no solution (mod 5)
  QuadField f10 = make_quad_field(Int(10));
  MatXz L(2, 2);
  L(0, 0) = 2, L(0, 1) = 0, L(1, 0) = 0, L(1, 1) = 1;
  CHECK_FALSE(principal_generator(f10, QuadIdeal{L, Int(1)}).has_value());
  // but its square is (2)
  QuadIdeal sq = quad_ideal(f10, {qelem(4), qelem(0, 2), qelem(10)});
  auto g = principal_generator(f10, sq);
  REQUIRE(g.has_value());
  CHECK(abs_rat(qnorm(f10, *g)) == 4);

  // prime above 3 in Q(√79), class number 3
  QuadField f79 = make_quad_field(Int(79));
  MatXz L3(2, 2);
  L3(0, 0) = 3, L3(0, 1) = 2, L3(1, 0) = 0, L3(1, 1) = 1;  // ω ≡ 1, stored reduced
  CHECK_FALSE(principal_generator(f79, QuadIdeal{L3, Int(1)}).has_value());

  // ramified prime above 3 in Q(√3) is principal: (√3)
  QuadField f3 = make_quad_field(Int(3));
  MatXz Lr(2, 2);
  Lr(0, 0) = 3, Lr(0, 1) = 0, Lr(1, 0) = 0, Lr(1, 1) = 1;
  auto gr = principal_generator(f3, QuadIdeal{Lr, Int(1)});
  REQUIRE(gr.has_value());
  CHECK(abs_rat(qnorm(f3, *gr)) == 3);
}

TEST_CASE("class number one detection") {
  for (long d0 : {2L, 3L, 5L, 6L, 7L, 11L, 13L, 17L, 19L, 21L, 29L, 33L, 37L, 41L}) {
    CAPTURE(d0);
    CHECK(class_number_one(make_quad_field(Int(d0))));
  }
  for (long d0 : {10L, 15L, 26L, 30L, 34L, 35L, 39L, 65L, 79L}) {
    CAPTURE(d0);
    CHECK_FALSE(class_number_one(make_quad_field(Int(d0))));
  }
}

TEST_SUITE_END();
