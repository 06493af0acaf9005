#pragma once
// Quartic CM fields K = Q[x]/(x⁴ + a·x² + b) with real quadratic subfield
// K0 = Q(√D), D = a² − 4b: construction, Galois classification, maximal
// order and discriminants, complex embeddings, and CM types.

#include <array>
#include <stdexcept>
#include <vector>

#include "igusa/bigcomplex.hpp"
#include "igusa/eigen_support.hpp"
#include "igusa/lattice.hpp"
#include "igusa/numeric.hpp"
#include "igusa/quadratic.hpp"
#include "igusa/rational.hpp"
#include "igusa/real.hpp"

namespace igusa {

struct NotCM : std::runtime_error {
  explicit NotCM(const std::string& w) : std::runtime_error(w) {}
};
struct BiquadraticRejected : std::runtime_error {
  explicit BiquadraticRejected(const std::string& w) : std::runtime_error(w) {}
};
struct MaximalOrderFailure : std::runtime_error {
  explicit MaximalOrderFailure(const std::string& w) : std::runtime_error(w) {}
};

enum class GaloisType { Biquadratic, Cyclic, NonGalois };

// ---- arithmetic over the power basis {1, α, α², α³}, α⁴ = −aα² − b ----

inline Vec4q power_mul(const Int& a, const Int& b, const Vec4q& x, const Vec4q& y) {
  std::array<Rat, 7> c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) c[i + j] += x(i) * y(j);
  for (int k = 6; k >= 4; --k) {
    c[k - 2] -= Rat(a) * c[k];
    c[k - 4] -= Rat(b) * c[k];
    c[k] = 0;
  }
  Vec4q out;
  for (int i = 0; i < 4; ++i) out(i) = c[i];
  return out;
}

inline Vec4q power_conj(const Vec4q& x) {  // α ↦ −α
  Vec4q out = x;
  out(1) = -out(1);
  out(3) = -out(3);
  return out;
}

inline Rat power_trace(const Int& a, const Vec4q& x) {
  // Tr(1, α, α², α³) = (4, 0, −2a, 0)
  return 4 * x(0) - 2 * Rat(a) * x(2);
}

inline Rat power_norm(const Int& a, const Int& b, const Vec4q& x) {
  Mat4q m;
  Vec4q e = Vec4q::Zero();
  for (int j = 0; j < 4; ++j) {
    e(j) = 1;
    m.col(j) = power_mul(a, b, x, e);
    e(j) = 0;
  }
  return m.determinant();
}

namespace detail {

// order (1/den)·span(basis columns) over the power basis
struct OrderRep {
  Mat4z basis;
  Int den;
};

inline void order_content_reduce(OrderRep& o) {
  Int g = o.den;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g = gcd(g, o.basis(i, j));
  if (g > 1) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) o.basis(i, j) /= g;
    o.den /= g;
  }
}

// multiplication table in the order's own basis; integrality certifies the
// lattice is a ring
inline std::array<Mat4z, 4> order_mult_table(const Int& a, const Int& b, const OrderRep& o) {
  Mat4q bq;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) bq(i, j) = Rat(o.basis(i, j)) / Rat(o.den);
  Mat4q inv = bq.inverse();
  std::array<Mat4z, 4> t;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Vec4q prod = inv * power_mul(a, b, bq.col(i), bq.col(j));
      for (int k = 0; k < 4; ++k) {
        if (!is_integer(prod(k))) throw MaximalOrderFailure("order not multiplicatively closed");
        t[i](k, j) = num(prod(k));
      }
    }
  }
  return t;
}

inline std::array<Int, 4> table_mul_mod(const std::array<Mat4z, 4>& t, const std::array<Int, 4>& x,
                                        const std::array<Int, 4>& y, const Int& p) {
  std::array<Int, 4> out{Int(0), Int(0), Int(0), Int(0)};
  for (int i = 0; i < 4; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < 4; ++j) {
      if (y[j] == 0) continue;
      Int c = mod_floor(x[i] * y[j], p);
      for (int k = 0; k < 4; ++k) out[k] += c * t[i](k, j);
    }
  }
  for (int k = 0; k < 4; ++k) out[k] = mod_floor(out[k], p);
  return out;
}

// x ↦ x^(p^m) with p^m ≥ 4: kernel = nilradical of O/pO
inline MatXz frobenius_matrix(const std::array<Mat4z, 4>& t, const Int& p) {
  Int q = p;
  while (q < 4) q *= p;
  MatXz f(4, 4);
  for (int i = 0; i < 4; ++i) {
    std::array<Int, 4> base{Int(0), Int(0), Int(0), Int(0)}, acc{Int(1), Int(0), Int(0), Int(0)};
    base[i] = 1;
    Int e = q;
    while (e > 0) {
      if (mod_floor(e, Int(2)) == 1) acc = table_mul_mod(t, acc, base, p);
      base = table_mul_mod(t, base, base, p);
      e /= 2;
    }
    for (int k = 0; k < 4; ++k) f(k, i) = acc[k];
  }
  return f;
}

// solve upper-triangular L·c = v exactly; throws if not solvable over Z
inline Vec4z solve_upper_int(const Mat4z& l, const Vec4z& v) {
  Vec4z c;
  for (int i = 3; i >= 0; --i) {
    Int s = v(i);
    for (int j = i + 1; j < 4; ++j) s -= l(i, j) * c(j);
    if (mod_floor(s, l(i, i)) != 0) throw MaximalOrderFailure("radical is not a sublattice");
    c(i) = s / l(i, i);
  }
  return c;
}

// one round of p-enlargement: O ← multiplier ring of the p-radical of O.
// Returns false when O was already p-maximal.
inline bool enlarge_at(const Int& a, const Int& b, OrderRep& o, const Int& p) {
  std::array<Mat4z, 4> t = order_mult_table(a, b, o);

  auto rad = kernel_mod_p(frobenius_matrix(t, p), p.convert_to<long>());
  MatXz radgen(4, 4 + static_cast<long>(rad.size()));
  radgen.setZero();
  for (size_t c = 0; c < rad.size(); ++c)
    for (int k = 0; k < 4; ++k) radgen(k, static_cast<long>(c)) = Int(rad[c][k]);
  for (int k = 0; k < 4; ++k) radgen(k, static_cast<long>(rad.size()) + k) = p;
  Mat4z lr = hnf_basis(radgen);

  // J = {y ∈ O : y·rad ⊆ p·rad}, assembled as a stacked linear system mod p
  MatXz m(16, 4);
  for (int i = 0; i < 4; ++i) {
    Vec4z ei = Vec4z::Zero();
    ei(i) = 1;
    for (int j = 0; j < 4; ++j) {
      Vec4z prod = Vec4z::Zero();
      for (int k = 0; k < 4; ++k) prod += t[i].col(k) * lr(k, j);  // e_i · r_j
      Vec4z c = solve_upper_int(lr, prod);                        // in radical coords
      for (int k = 0; k < 4; ++k) m(4 * j + k, i) = mod_floor(c(k), p);
    }
  }
  auto j = kernel_mod_p(m, p.convert_to<long>());
  if (j.empty()) return false;

  MatXz enlarged(4, 4 + static_cast<long>(j.size()));
  enlarged.setZero();
  for (size_t c = 0; c < j.size(); ++c)
    for (int k = 0; k < 4; ++k) enlarged(k, static_cast<long>(c)) = Int(j[c][k]);
  for (int k = 0; k < 4; ++k) enlarged(k, static_cast<long>(j.size()) + k) = p;
  Mat4z bnew = hnf_basis(enlarged);
  if (det_int(MatXz(bnew)) == pow_int(p, 4)) return false;

  o.basis = hnf_basis(MatXz(o.basis * bnew));
  o.den *= p;
  order_content_reduce(o);
  return true;
}

inline OrderRep maximal_order(const Int& a, const Int& b, const Int& disc_power, Int* d_out) {
  OrderRep o{Mat4z::Identity(), Int(1)};
  Factorization fac = factor(disc_power);
  for (const auto& fe : fac.factors) {
    if (fe.exponent < 2) continue;
    int rounds = 0;
    while (enlarge_at(a, b, o, fe.prime))
      if (++rounds > 64) throw MaximalOrderFailure("p-maximality loop did not stabilize");
  }
  Int det = det_int(MatXz(o.basis));
  Int den4 = pow_int(o.den, 4);
  if (det <= 0 || mod_floor(den4, det) != 0)
    throw MaximalOrderFailure("order index is not integral");
  Int idx = den4 / det;
  if (mod_floor(disc_power, idx * idx) != 0)
    throw MaximalOrderFailure("index squared does not divide the discriminant");
  *d_out = disc_power / (idx * idx);
  return o;
}

}  // namespace detail

struct CMField {
  Int a, b;
  Int D;                        // a² − 4b, positive nonsquare
  GaloisType galois_type;      // Cyclic or NonGalois
  Int sqrt_bd;                 // √(b·D) when cyclic, else 0
  QuadField k0;                // Q(√D0), D0 the squarefree part of D
  Int sqrt_d_scale;            // f with D = f²·D0
  Mat4z basis;                 // integral basis columns over {1, α, α², α³}
  Int bden;                    //   scaled by 1/bden
  Mat4q basis_q;               // basis/bden
  Mat4q basis_inv;             // (basis/bden)⁻¹
  std::array<Mat4z, 4> mult;   // multiplication table in the integral basis
  Mat4z conj_mat;              // complex conjugation α ↦ −α in the integral basis
  Vec4q omega_power;           // ω of K0 inside K, power coordinates
  Int d, d_k0, d0;
};

inline Vec4q to_basis(const CMField& k, const Vec4q& power) { return k.basis_inv * power; }
inline Vec4q from_basis(const CMField& k, const Vec4q& coords) { return k.basis_q * coords; }

inline GaloisType classify_galois(const Int& a, const Int& b) {
  Int D = a * a - 4 * b;
  if (a <= 0 || b <= 0 || D <= 0) throw NotCM("need a, b > 0 and a² − 4b > 0");
  if (is_square(D)) throw NotCM("a² − 4b is a perfect square: polynomial is reducible");
  if (is_square(b)) return GaloisType::Biquadratic;
  return is_square(b * D) ? GaloisType::Cyclic : GaloisType::NonGalois;
}

inline CMField cmfield_from_quartic(const Int& a, const Int& b) {
  CMField k;
  k.a = a;
  k.b = b;
  k.galois_type = classify_galois(a, b);
  if (k.galois_type == GaloisType::Biquadratic)
    throw BiquadraticRejected("b is a perfect square: Galois group would be Klein four");
  k.D = a * a - 4 * b;
  k.sqrt_bd = k.galois_type == GaloisType::Cyclic ? isqrt(b * k.D) : Int(0);

  SquarefreeParts sp = squarefree_decompose(k.D);
  k.k0 = make_quad_field(sp.core);
  k.sqrt_d_scale = sp.square_root;
  k.d_k0 = k.k0.disc;

  detail::OrderRep o = detail::maximal_order(a, b, 16 * b * k.D * k.D, &k.d);
  k.basis = o.basis;
  k.bden = o.den;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) k.basis_q(i, j) = Rat(k.basis(i, j)) / Rat(k.bden);
  k.basis_inv = k.basis_q.inverse();
  k.mult = detail::order_mult_table(a, b, o);

  Mat4q cj;
  for (int j = 0; j < 4; ++j) cj.col(j) = k.basis_inv * power_conj(k.basis_q.col(j));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (!is_integer(cj(i, j))) throw MaximalOrderFailure("conjugation does not fix the order");
      k.conj_mat(i, j) = num(cj(i, j));
    }
  if (abs_int(det_int(MatXz(k.conj_mat))) != 1)
    throw MaximalOrderFailure("conjugation matrix is not unimodular");

  // ω = (t0 + c·√D0)/2, c = 1 for D0 ≡ 1 (mod 4) else 2, √D0 = (a + 2α²)/f
  Int f = k.sqrt_d_scale;
  Int c = k.k0.t == 1 ? Int(1) : Int(2);
  k.omega_power = Vec4q::Zero();
  k.omega_power(0) = Rat(k.k0.t) / Rat(2) + Rat(c * a) / Rat(2 * f);
  k.omega_power(2) = Rat(c) / Rat(f);
  Vec4q oc = to_basis(k, k.omega_power);
  for (int i = 0; i < 4; ++i)
    if (!is_integer(oc(i))) throw MaximalOrderFailure("ω is not in the maximal order");

  if (mod_floor(k.d, k.d_k0 * k.d_k0) != 0)
    throw MaximalOrderFailure("discriminant tower d = d_K0²·d0 violated");
  k.d0 = k.d / (k.d_k0 * k.d_k0);
  return k;
}

// K0 element u + v·ω as an element of K over the power basis.
inline Vec4q embed_k0(const CMField& k, const QuadElem& x) {
  Vec4q out = k.omega_power * x.v;
  out(0) += x.u;
  return out;
}

// ---- embeddings and CM types ----

// Roots ordered [i·s, i·t, −i·s, −i·t] with 0 < s < t; indices j and j+2 mod 4
// are complex-conjugate pairs.
inline std::array<Complex, 4> embeddings(const CMField& k, const PrecisionContext& ctx) {
  mpfr_prec_t prec = ctx.working();
  Real sd = sqrt(to_real(k.D, prec));
  Real a = to_real(k.a, prec);
  Real s = sqrt((a - sd) / 2);
  Real t = sqrt((a + sd) / 2);
  Real zero = Real::with_prec(prec);
  std::array<Complex, 4> r{Complex{zero, s}, Complex{zero, t}, Complex{zero, -s},
                           Complex{zero, -t}};
  Real tol = pow2(-static_cast<long>(ctx.bits) + static_cast<long>(ctx.guard_bits), 64);
  for (const auto& root : r) {
    Complex r2 = root * root;
    Complex res = r2 * r2 + r2 * a + to_real(k.b, prec);
    if (!(abs(res) < tol)) throw std::logic_error("embedding residual too large");
  }
  return r;
}

inline Complex embed_power(const CMField& k, const Vec4q& x, const Complex& alpha) {
  mpfr_prec_t prec = alpha.re.prec();
  Complex acc{to_real(x(3), prec), Real::with_prec(prec)};
  for (int i = 2; i >= 0; --i) {
    acc = acc * alpha;
    acc.re = acc.re + to_real(x(i), prec);
  }
  return acc;
}

struct CMType {
  std::array<int, 2> roots;  // indices into embeddings(), one per conjugate pair
};

enum class CMTypeScope { AllInequivalent, Single, AllRaw };

namespace detail {

// permutation of the 4 roots induced by α ↦ g(α), matched numerically
inline std::array<int, 4> root_permutation(const CMField& k, const Vec4q& g) {
  PrecisionContext ctx(256);
  auto roots = embeddings(k, ctx);
  std::array<int, 4> perm{};
  Real close = pow2(-64, 64), apart = pow2(-16, 64);
  for (int i = 0; i < 4; ++i) {
    Complex val = embed_power(k, g, roots[i]);
    int best = -1;
    for (int j = 0; j < 4; ++j) {
      Real dist = abs(val - roots[j]);
      if (dist < close) {
        if (best >= 0) throw std::logic_error("ambiguous root match");
        best = j;
      } else if (!(dist > apart)) {
        throw std::logic_error("root match not separated");
      }
    }
    if (best < 0) throw std::logic_error("automorphism image is not a root");
    perm[i] = best;
  }
  std::array<bool, 4> hit{};
  for (int i : perm) hit[i] = true;
  for (bool h : hit)
    if (!h) throw std::logic_error("automorphism image is not a permutation");
  return perm;
}

}  // namespace detail

// Permutations of the 4 embeddings induced by Aut(K) together with complex
// conjugation; for cyclic fields σ(α) = (a·α³ + (a²−2b)·α)/√(bD).
inline std::vector<std::array<int, 4>> automorphism_permutations(const CMField& k) {
  std::vector<std::array<int, 4>> gens;
  gens.push_back({2, 3, 0, 1});  // complex conjugation
  if (k.galois_type == GaloisType::Cyclic) {
    Vec4q g = Vec4q::Zero();
    g(1) = Rat(k.a * k.a - 2 * k.b) / Rat(k.sqrt_bd);
    g(3) = Rat(k.a) / Rat(k.sqrt_bd);
    auto sigma = detail::root_permutation(k, g);
    std::array<int, 4> probe = sigma;
    int order = 1;
    while (probe != std::array<int, 4>{0, 1, 2, 3}) {
      std::array<int, 4> next;
      for (int i = 0; i < 4; ++i) next[i] = sigma[probe[i]];
      probe = next;
      if (++order > 4) break;
    }
    if (order != 4) throw std::logic_error("cyclic generator does not have order 4");
    gens.push_back(sigma);
  }
  // close under composition
  std::vector<std::array<int, 4>> group{{0, 1, 2, 3}};
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t i = 0; i < group.size(); ++i)
      for (const auto& g : gens) {
        std::array<int, 4> comp;
        for (int t = 0; t < 4; ++t) comp[t] = g[group[i][t]];
        bool fresh = true;
        for (const auto& h : group)
          if (h == comp) fresh = false;
        if (fresh) {
          group.push_back(comp);
          grew = true;
        }
      }
  }
  return group;
}

// Inequivalent CM types (equivalence: automorphisms of K and conjugation).
inline std::vector<CMType> cm_types(const CMField& k,
                                    CMTypeScope scope = CMTypeScope::AllInequivalent) {
  const std::array<std::array<int, 2>, 4> raw{{{0, 1}, {0, 3}, {1, 2}, {2, 3}}};
  if (scope == CMTypeScope::AllRaw) {
    std::vector<CMType> all;
    for (const auto& r : raw) all.push_back(CMType{r});
    return all;
  }
  auto group = automorphism_permutations(k);
  std::array<int, 4> orbit_of{-1, -1, -1, -1};
  int norbits = 0;
  for (int i = 0; i < 4; ++i) {
    if (orbit_of[i] >= 0) continue;
    int label = norbits++;
    std::vector<int> queue{i};
    orbit_of[i] = label;
    while (!queue.empty()) {
      int cur = queue.back();
      queue.pop_back();
      for (const auto& g : group) {
        std::array<int, 2> img{g[raw[cur][0]], g[raw[cur][1]]};
        if (img[0] > img[1]) std::swap(img[0], img[1]);
        int found = -1;
        for (int t = 0; t < 4; ++t)
          if (raw[t] == img) found = t;
        if (found < 0) throw std::logic_error("automorphism broke the conjugate-pair structure");
        if (orbit_of[found] < 0) {
          orbit_of[found] = label;
          queue.push_back(found);
        }
      }
    }
  }
  std::vector<CMType> reps;
  for (int label = 0; label < norbits; ++label)
    for (int i = 0; i < 4; ++i)
      if (orbit_of[i] == label) {
        reps.push_back(CMType{raw[i]});
        break;
      }
  if (scope == CMTypeScope::Single) reps.resize(1);
  return reps;
}

}  // namespace igusa
