#pragma once

// Period matrices of CM abelian surfaces: principal polarizations on an ideal
// class, symplectic normalization of the trace pairing, the 2×2 period matrix
// Ω = P2⁻¹P1, and Siegel reduction toward the fundamental domain.

#include <array>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "igusa/bigcomplex.hpp"
#include "igusa/classgroup.hpp"
#include "igusa/cmfield.hpp"
#include "igusa/lattice.hpp"

namespace igusa {

struct NoPrincipalPolarization : std::runtime_error {
  NoPrincipalPolarization()
      : std::runtime_error("ideal class admits no principal polarization for this CM type") {}
};
struct WindowExhausted : std::runtime_error {
  WindowExhausted()
      : std::runtime_error(
            "polarization found at the unit-sweep boundary; raise the sweep window") {}
};
struct DegenerateLattice : std::runtime_error {
  explicit DegenerateLattice(const char* what) : std::runtime_error(what) {}
};

struct Polarization {
  Vec4q xi;       // power-basis coordinates; conj(ξ) = −ξ, Im φ(ξ) > 0 on the type
  Mat4z pairing;  // E(i,j) = Tr(ξ · v_i · conj(v_j)) over the ideal Z-basis
};

struct PeriodMatrix {
  Mat2c omega;
  std::array<int, 3> source{-1, -1, -1};  // (class, CM type, polarization) indices
  bool reduced = false;
};

struct SymplecticTransform {
  Mat4z m = Mat4z::Identity();
};

inline bool is_symplectic(const Mat4z& g) {
  Mat4z j = symplectic_j();
  return Mat4z(g.transpose() * j * g) == j;
}

// i-th Z-basis vector of the lattice rep, in power coordinates
inline Vec4q lattice_column(const CMField& k, const IdealRep& rep, int i) {
  Vec4q c;
  for (int r = 0; r < 4; ++r) c(r) = Rat(rep.basis(r, i)) / Rat(rep.den);
  return k.basis_q * c;
}

// dual of the maximal order under Tr(x·y); the inverse different
inline IdealRep codifferent(const CMField& k) {
  Mat4q g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      g(i, j) = power_trace(k.a, power_mul(k.a, k.b, Vec4q(k.basis_q.col(i)),
                                           Vec4q(k.basis_q.col(j))));
  Mat4q ginv = g.inverse();
  std::vector<Vec4q> gens;
  for (int j = 0; j < 4; ++j) gens.push_back(Vec4q(ginv.col(j)));
  return ideal_from_gens(k, gens);
}

namespace detail {

// does some unit u of K satisfy u·ū = ε? (decides the ξ ~ u·ū·ξ step size)
inline int polarization_equiv_modulus(const CMField& k, const QuadUnit& eu) {
  if (eu.norm_sign != 1) return 2;  // u·ū is totally positive, ε is not
  Rat tr = qtrace(k.k0, eu.eps);
  Vec4q eps_power = embed_k0(k, eu.eps);
  MatXq gram = trace_gram(k);
  for (const VecXz& v : fincke_pohst(gram, tr)) {
    Vec4q x;
    for (int i = 0; i < 4; ++i) x(i) = Rat(v(i));
    Vec4q xp = from_basis(k, x);
    Vec4q nrm = power_mul(k.a, k.b, xp, power_conj(xp));
    bool hit = true;
    for (int i = 0; i < 4; ++i)
      if (nrm(i) != eps_power(i)) hit = false;
    if (hit) return 1;
  }
  return 2;
}

}  // namespace detail

// All ξ with (ξ) = (𝔞 𝔞̄ δ)⁻¹, conj(ξ) = −ξ, Im φ(ξ) > 0 for both φ of the
// type, up to ξ ~ u·ū·ξ. Generators are swept as μ·ε^k·ξ0 over the torsion
// units μ and a window of fundamental-unit powers.
inline std::vector<Polarization> polarizations(const CMField& k, const IdealClass& cls,
                                               const CMType& type, int window = 8) {
  IdealRep prod = ideal_mul(k, cls.rep, ideal_conj(k, cls.rep));
  IdealRep target = ideal_mul(k, ideal_inverse(k, prod), codifferent(k));
  std::optional<Vec4z> gen = is_principal(k, IdealRep{target.basis, Int(1)});
  if (!gen) throw NoPrincipalPolarization();
  Vec4q gq;
  for (int i = 0; i < 4; ++i) gq(i) = Rat((*gen)(i), target.den);
  Vec4q xi0 = from_basis(k, gq);
  if (abs_rat(power_norm(k.a, k.b, xi0)) != ideal_norm(target))
    throw std::logic_error("polarizations: generator norm mismatch");

  QuadUnit eu = fundamental_unit(k.k0);
  int modulus = detail::polarization_equiv_modulus(k, eu);

  std::vector<Vec4q> mus;
  for (const Vec4z& t : torsion_units(k)) {
    Vec4q tq;
    for (int i = 0; i < 4; ++i) tq(i) = Rat(t(i));
    mus.push_back(from_basis(k, tq));
  }

  PrecisionContext ctx(192);
  auto roots = embeddings(k, ctx);
  const Complex& r1 = roots[type.roots[0]];
  const Complex& r2 = roots[type.roots[1]];

  // ε^k for k in [−window, window], exact
  QuadElem einv = qdiv(k.k0, qelem(1), eu.eps);
  std::vector<QuadElem> epow(2 * window + 1, qelem(1));
  for (int i = 1; i <= window; ++i) {
    epow[window + i] = qmul(k.k0, epow[window + i - 1], eu.eps);
    epow[window - i] = qmul(k.k0, epow[window - i + 1], einv);
  }

  // visit k by increasing |k| so every class is first seen away from the edge
  std::vector<int> order{0};
  for (int i = 1; i <= window; ++i) {
    order.push_back(i);
    order.push_back(-i);
  }

  std::vector<std::pair<size_t, int>> seen;  // (μ index, k mod modulus)
  std::vector<Polarization> out;
  bool boundary_hit = false;
  for (int kp : order) {
    Vec4q ek = embed_k0(k, epow[window + kp]);
    for (size_t mi = 0; mi < mus.size(); ++mi) {
      Vec4q xi = power_mul(k.a, k.b, mus[mi], power_mul(k.a, k.b, ek, xi0));
      Vec4q xc = power_conj(xi);
      bool anti = true;
      for (int i = 0; i < 4; ++i)
        if (xc(i) != -xi(i)) anti = false;
      if (!anti) continue;
      if (!(embed_power(k, xi, r1).im.sign() > 0)) continue;
      if (!(embed_power(k, xi, r2).im.sign() > 0)) continue;
      std::pair<size_t, int> key{mi, ((kp % modulus) + modulus) % modulus};
      bool dup = false;
      for (const auto& s : seen)
        if (s == key) dup = true;
      if (dup) continue;
      seen.push_back(key);
      if (kp == -window || kp == window) boundary_hit = true;

      Mat4z e;
      for (int i = 0; i < 4; ++i) {
        Vec4q vi = lattice_column(k, cls.rep, i);
        Vec4q xvi = power_mul(k.a, k.b, xi, vi);
        for (int j = 0; j < 4; ++j) {
          Vec4q vj = lattice_column(k, cls.rep, j);
          Rat t = power_trace(k.a, power_mul(k.a, k.b, xvi, power_conj(vj)));
          if (!is_integer(t)) throw std::logic_error("polarizations: pairing not integral");
          e(i, j) = num(t);
        }
      }
      if (Mat4z(e.transpose()) != Mat4z(-e))
        throw std::logic_error("polarizations: pairing not skew");
      if (e.determinant() != 1)
        throw std::logic_error("polarizations: pairing determinant is not 1");
      out.push_back(Polarization{xi, e});
    }
  }
  if (boundary_hit) throw WindowExhausted();
  if (out.empty()) throw NoPrincipalPolarization();
  return out;
}

inline PeriodMatrix period_matrix(const CMField& k, const IdealClass& cls, const CMType& type,
                                  const Polarization& pol, const PrecisionContext& ctx,
                                  std::array<int, 3> source = {-1, -1, -1}) {
  Mat4z u = symplectic_basis(pol.pairing);
  auto roots = embeddings(k, ctx);
  const Complex& r1 = roots[type.roots[0]];
  const Complex& r2 = roots[type.roots[1]];

  std::array<Complex, 4> row1, row2;
  for (int t = 0; t < 4; ++t) {
    Vec4q w = Vec4q::Zero();
    for (int i = 0; i < 4; ++i) {
      Vec4q vi = lattice_column(k, cls.rep, i);
      for (int c = 0; c < 4; ++c) w(c) += Rat(u(i, t)) * vi(c);
    }
    row1[t] = embed_power(k, w, r1);
    row2[t] = embed_power(k, w, r2);
  }

  long prec = ctx.working();
  Real floor = pow2(-static_cast<long>(ctx.bits) / 2, 64);
  Real margin = pow2(-static_cast<long>(ctx.tail_bits), 64);
  auto build = [&](int c0, int c1, int c2, int c3) -> std::optional<Mat2c> {
    Mat2c p1, p2;
    p1(0, 0) = row1[c0]; p1(0, 1) = row1[c1]; p1(1, 0) = row2[c0]; p1(1, 1) = row2[c1];
    p2(0, 0) = row1[c2]; p2(0, 1) = row1[c3]; p2(1, 0) = row2[c2]; p2(1, 1) = row2[c3];
    if (!(abs(det2(p2)) > floor)) throw DegenerateLattice("period matrix: |det P2| at error floor");
    Mat2c om = inverse2(p2) * p1;
    Real y00 = om(0, 0).im, y11 = om(1, 1).im;
    Real y01 = (om(0, 1).im + om(1, 0).im) / Real::from_long(2, prec);
    if (!(y00 > margin) || !(y00 * y11 - y01 * y01 > margin)) return std::nullopt;
    return om;
  };
  std::optional<Mat2c> om = build(0, 1, 2, 3);
  if (!om) om = build(2, 3, 0, 1);
  if (!om) throw DegenerateLattice("period matrix: no orientation with Im Ω > 0");
  if (!(abs((*om)(0, 1) - (*om)(1, 0)) < pow2(-static_cast<long>(ctx.tail_bits), 64)))
    throw std::logic_error("period matrix: symmetry beyond tolerance");
  Complex avg = ((*om)(0, 1) + (*om)(1, 0)) / Real::from_long(2, prec);
  (*om)(0, 1) = avg;
  (*om)(1, 0) = avg;
  return PeriodMatrix{*om, source, false};
}

// ---------------------------------------------------------------------------
// Siegel reduction

inline long mat2c_prec(const Mat2c& om) {
  long p = 64;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) p = std::max(p, om(i, j).prec());
  return p;
}

// action Ω ↦ (AΩ + B)(CΩ + D)⁻¹ of γ = [[A,B],[C,D]]
inline Mat2c symplectic_apply(const Mat4z& g, const Mat2c& om) {
  long prec = mat2c_prec(om);
  Mat2c n, d;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Complex nv = Complex(to_real(g(i, 2 + j), prec));
      Complex dv = Complex(to_real(g(2 + i, 2 + j), prec));
      for (int t = 0; t < 2; ++t) {
        nv += to_real(g(i, t), prec) * om(t, j);
        dv += to_real(g(2 + i, t), prec) * om(t, j);
      }
      n(i, j) = nv;
      d(i, j) = dv;
    }
  return n * inverse2(d);
}

struct SiegelReduction {
  Mat2c omega;
  SymplecticTransform gamma;
  bool stalled = false;
};

inline Real im_min_eigenvalue(const Mat2c& om) {
  long prec = mat2c_prec(om);
  Real y00 = om(0, 0).im, y11 = om(1, 1).im;
  Real y01 = (om(0, 1).im + om(1, 0).im) / Real::from_long(2, prec);
  Real tr = y00 + y11;
  Real disc = tr * tr - Real::from_long(4, prec) * (y00 * y11 - y01 * y01);
  return (tr - sqrt(disc)) / Real::from_long(2, prec);
}

namespace detail {

inline Mat4z gl2_block(long a00, long a01, long a10, long a11) {
  // [[A, 0], [0, A⁻ᵀ]] for A = [[a00,a01],[a10,a11]] with det ±1
  Mat4z g = Mat4z::Zero();
  Int det = Int(a00) * a11 - Int(a01) * a10;
  g(0, 0) = a00; g(0, 1) = a01; g(1, 0) = a10; g(1, 1) = a11;
  // A⁻¹ = det·[[a11,−a01],[−a10,a00]] since det² = 1; transpose it
  g(2, 2) = det * a11; g(2, 3) = det * -a10;
  g(3, 2) = det * -a01; g(3, 3) = det * a00;
  return g;
}

inline Mat4z translation_block(const Int& b00, const Int& b01, const Int& b11) {
  Mat4z g = Mat4z::Identity();
  g(0, 2) = b00; g(0, 3) = b01; g(1, 2) = b01; g(1, 3) = b11;
  return g;
}

}  // namespace detail

inline SiegelReduction siegel_reduce(const Mat2c& om_in, const PrecisionContext& /*ctx*/) {
  long prec = mat2c_prec(om_in);
  Mat2c om = om_in;
  Mat4z gamma = Mat4z::Identity();
  Real one = Real::from_long(1, prec);
  Real inv_margin = one - pow2(-16, prec);

  auto apply = [&](const Mat4z& g) {
    om = symplectic_apply(g, om);
    Complex avg = (om(0, 1) + om(1, 0)) / Real::from_long(2, prec);
    om(0, 1) = avg;
    om(1, 0) = avg;
    gamma = Mat4z(g * gamma);
  };

  // the genus-2 inversion and its two embedded genus-1 variants
  Mat4z full_inv = Mat4z::Zero();
  full_inv(0, 2) = -1; full_inv(1, 3) = -1; full_inv(2, 0) = 1; full_inv(3, 1) = 1;
  Mat4z part0 = Mat4z::Zero();
  part0(1, 1) = 1; part0(3, 3) = 1; part0(0, 2) = -1; part0(2, 0) = 1;
  Mat4z part1 = Mat4z::Zero();
  part1(0, 0) = 1; part1(2, 2) = 1; part1(1, 3) = -1; part1(3, 1) = 1;

  bool stalled = true;
  for (int iter = 0; iter < 64; ++iter) {
    bool changed = false;
    // (1) Minkowski-reduce Im Ω by a unimodular congruence
    for (int pass = 0; pass < 32; ++pass) {
      Real y00 = om(0, 0).im, y11 = om(1, 1).im, y01 = om(0, 1).im;
      Int q = round_to_int(y01 / y00);
      if (q != 0) {
        apply(detail::gl2_block(1, 0, -q.convert_to<long>(), 1));
        changed = true;
        continue;
      }
      if (y00 > y11) {
        apply(detail::gl2_block(0, 1, 1, 0));
        changed = true;
        continue;
      }
      break;
    }
    // (2) translate Re Ω into [−1/2, 1/2]
    Int b00 = round_to_int(om(0, 0).re), b01 = round_to_int(om(0, 1).re),
        b11 = round_to_int(om(1, 1).re);
    if (b00 != 0 || b01 != 0 || b11 != 0) {
      apply(detail::translation_block(-b00, -b01, -b11));
      changed = true;
    }
    // (3) inversion step with the smallest |det(CΩ + D)|, if it contracts
    const Mat4z* best = nullptr;
    Real best_v;
    for (const Mat4z* g : {&full_inv, &part0, &part1}) {
      Mat2c d;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          Complex v = Complex(to_real((*g)(2 + i, 2 + j), prec));
          for (int t = 0; t < 2; ++t) v += to_real((*g)(2 + i, t), prec) * om(t, j);
          d(i, j) = v;
        }
      Real val = abs(det2(d));
      if (val < inv_margin && (!best || val < best_v)) {
        best = g;
        best_v = val;
      }
    }
    if (best) {
      apply(*best);
      changed = true;
    }
    if (!changed) {
      stalled = false;
      break;
    }
  }
  return SiegelReduction{om, SymplecticTransform{gamma}, stalled};
}

}  // namespace igusa
