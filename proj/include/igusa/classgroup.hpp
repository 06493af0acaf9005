#pragma once
// Ideal arithmetic in the maximal order of a quartic CM field: prime
// splitting through the finite algebra O/pO, principality testing by exact
// short-vector search in the trace form, class-group enumeration below the
// Minkowski bound, and rank-2 relative bases {1, τ} over the real quadratic
// subfield.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "igusa/cmfield.hpp"
#include "igusa/lattice.hpp"
#include "igusa/quadratic.hpp"

namespace igusa {

struct PrincipalityTimeout : std::runtime_error {
  PrincipalityTimeout() : std::runtime_error("principality test undetermined: enumeration cap hit") {}
};
struct ClassGroupTooLarge : std::runtime_error {
  explicit ClassGroupTooLarge(size_t n)
      : std::runtime_error("class group larger than cap: " + std::to_string(n) + " classes found") {}
};
struct K0ClassNumberNotOne : std::runtime_error {
  K0ClassNumberNotOne() : std::runtime_error("real quadratic subfield has class number > 1") {}
};

// ---------------------------------------------------------------------------
// ideals: (1/den) * column lattice over the integral basis of K

struct IdealRep {
  Mat4z basis;  // canonical HNF columns, coordinates in the integral basis
  Int den;
};

inline Mat4z mul_matrix(const CMField& k, const Vec4z& x) {
  Mat4z m = Mat4z::Zero();
  for (int i = 0; i < 4; ++i)
    if (x(i) != 0) m += k.mult[i] * x(i);
  return m;
}

inline void ideal_canonicalize(IdealRep& I) {
  Int g = I.den;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g = gcd(g, I.basis(i, j));
  if (g > 1) {
    I.den /= g;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) I.basis(i, j) /= g;
  }
}

inline bool ideal_eq(const IdealRep& a, const IdealRep& b) {
  return a.den == b.den && a.basis == b.basis;
}

inline Rat ideal_norm(const IdealRep& I) {
  Rat d(abs_int(I.basis.determinant()));
  return d / Rat(pow_int(I.den, 4));
}

inline IdealRep unit_ideal() { return {Mat4z::Identity(), Int(1)}; }

// lattice generated by the columns of a wide integer matrix, as an ideal
inline IdealRep ideal_from_columns(const MatXz& cols, const Int& den) {
  IdealRep I{Mat4z::Zero(), den};
  MatXz h = hnf_basis(cols);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) I.basis(i, j) = h(i, j);
  ideal_canonicalize(I);
  return I;
}

// O-module generated by field elements (integral-basis coordinates)
inline IdealRep ideal_from_gens(const CMField& k, const std::vector<Vec4q>& gens) {
  Int scale(1);
  for (const Vec4q& g : gens)
    for (int i = 0; i < 4; ++i) scale = lcm(scale, den(g(i)));
  MatXz cols(4, 4 * static_cast<long>(gens.size()));
  long c = 0;
  for (const Vec4q& g : gens) {
    Vec4z gz;
    for (int i = 0; i < 4; ++i) gz(i) = num(g(i) * Rat(scale));
    Mat4z m = mul_matrix(k, gz);
    for (int j = 0; j < 4; ++j, ++c)
      for (int i = 0; i < 4; ++i) cols(i, c) = m(i, j);
  }
  return ideal_from_columns(cols, scale);
}

inline IdealRep principal_ideal(const CMField& k, const Vec4q& g) {
  return ideal_from_gens(k, {g});
}

inline IdealRep ideal_mul(const CMField& k, const IdealRep& a, const IdealRep& b) {
  MatXz cols(4, 16);
  for (int j = 0; j < 4; ++j) {
    Mat4z m = mul_matrix(k, Vec4z(a.basis.col(j)));
    Mat4z prod = m * b.basis;
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 4; ++i) cols(i, 4 * j + l) = prod(i, l);
  }
  return ideal_from_columns(cols, a.den * b.den);
}

inline IdealRep ideal_conj(const CMField& k, const IdealRep& a) {
  MatXz cols = k.conj_mat * a.basis;
  return ideal_from_columns(cols, a.den);
}

// x (integral-basis coordinates) ∈ I ?  basis is upper triangular.
inline bool ideal_contains(const IdealRep& I, const Vec4q& x) {
  Vec4q r = x * Rat(I.den);
  for (int i = 3; i >= 0; --i) {
    Rat c = r(i) / Rat(I.basis(i, i));
    if (!is_integer(c)) return false;
    for (int j = 0; j < 4; ++j) r(j) -= c * Rat(I.basis(j, i));
  }
  return true;
}

// { y : y*I ⊆ O }, via the kernel of the stacked multiplication maps mod N
inline IdealRep ideal_inverse(const CMField& k, const IdealRep& I) {
  Int n = abs_int(I.basis.determinant());
  if (n == 0) throw std::invalid_argument("ideal_inverse: zero ideal");
  MatXz sys(16, 20);
  sys.setZero();
  for (int j = 0; j < 4; ++j) {
    Mat4z m = mul_matrix(k, Vec4z(I.basis.col(j)));
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) sys(4 * j + r, c) = m(r, c);
      sys(4 * j + r, 4 + 4 * j + r) = n;
    }
  }
  MatXz kern = integer_kernel(sys);
  // lattice L = N * (numerator of I)^{-1}; the full inverse is (den/N) * L
  MatXz cols(4, kern.cols() + 4);
  cols.setZero();
  for (long c = 0; c < kern.cols(); ++c)
    for (int i = 0; i < 4; ++i) cols(i, c) = kern(i, c) * I.den;
  for (int i = 0; i < 4; ++i) cols(i, kern.cols() + i) = n * I.den;  // N*O always works
  IdealRep inv = ideal_from_columns(cols, n);
  // loud self-check: I * I^{-1} must be the unit ideal
  IdealRep prod = ideal_mul(k, I, inv);
  if (!ideal_eq(prod, unit_ideal()))
    throw std::logic_error("ideal_inverse: product with inverse is not the unit ideal");
  return inv;
}

// integral ideal in the same class (numerator of a fractional ideal)
inline IdealRep ideal_numerator(const IdealRep& I) {
  IdealRep J{I.basis, Int(1)};
  ideal_canonicalize(J);
  return J;
}

// ---------------------------------------------------------------------------
// prime splitting: maximal ideals of O/pO via radical + Berlekamp fixed space

namespace detail {

using FpVec = std::vector<long>;
using FpMat = std::vector<FpVec>;  // rows

inline long fp_inv(long a, long p) {
  long r = 1;
  a %= p;
  if (a < 0) a += p;
  for (long e = p - 2; e > 0; e >>= 1, a = a * a % p)
    if (e & 1) r = r * a % p;
  return r;
}

// in-place row echelon (reduced); returns pivot columns
inline std::vector<int> fp_rref(FpMat& m, long p) {
  std::vector<int> pivots;
  size_t rows = m.size();
  if (rows == 0) return pivots;
  size_t ncols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < ncols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && m[sel][c] % p == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[r], m[sel]);
    long inv = fp_inv(m[r][c], p);
    for (size_t j = c; j < ncols; ++j) m[r][j] = m[r][j] % p * inv % p;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      long f = m[i][c] % p;
      if (f == 0) continue;
      for (size_t j = c; j < ncols; ++j)
        m[i][j] = ((m[i][j] - f * m[r][j]) % p + p) % p;
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

// null space of the linear map given by rows
inline std::vector<FpVec> fp_kernel(FpMat m, long p) {
  for (auto& row : m)
    for (auto& v : row) v = ((v % p) + p) % p;
  size_t ncols = m.empty() ? 0 : m[0].size();
  std::vector<int> pivots = fp_rref(m, p);
  std::vector<bool> is_pivot(ncols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<FpVec> out;
  for (size_t fc = 0; fc < ncols; ++fc) {
    if (is_pivot[fc]) continue;
    FpVec v(ncols, 0);
    v[fc] = 1;
    for (size_t pi = 0; pi < pivots.size(); ++pi)
      v[pivots[pi]] = (p - m[pi][fc] % p) % p;
    out.push_back(v);
  }
  return out;
}

// solve A x = b (A given as rows); requires consistency, returns x
inline FpVec fp_solve(FpMat a, const FpVec& b, long p) {
  size_t rows = a.size(), ncols = a[0].size();
  for (size_t i = 0; i < rows; ++i) a[i].push_back(((b[i] % p) + p) % p);
  for (auto& row : a)
    for (auto& v : row) v = ((v % p) + p) % p;
  std::vector<int> pivots = fp_rref(a, p);
  FpVec x(ncols, 0);
  for (size_t pi = 0; pi < pivots.size(); ++pi) {
    if (pivots[pi] == static_cast<int>(ncols))
      throw std::logic_error("fp_solve: inconsistent system");
    x[pivots[pi]] = a[pi][ncols];
  }
  return x;
}

// finite commutative F_p-algebra with a lift of each basis vector to O-coords
struct FpAlgebra {
  long p = 0;
  int dim = 0;
  std::vector<FpMat> mul;  // mul[i]: matrix of multiplication by e_i
  FpMat lift;              // 4 x dim, integer representatives in O
  FpVec one;
};

inline FpVec fp_alg_mul(const FpAlgebra& a, const FpVec& x, const FpVec& y) {
  FpVec out(a.dim, 0);
  for (int i = 0; i < a.dim; ++i) {
    if (x[i] == 0) continue;
    for (int r = 0; r < a.dim; ++r) {
      long acc = 0;
      for (int j = 0; j < a.dim; ++j) acc = (acc + a.mul[i][r][j] * y[j]) % a.p;
      out[r] = (out[r] + x[i] * acc) % a.p;
    }
  }
  return out;
}

inline FpVec fp_alg_pow(const FpAlgebra& a, FpVec x, Int e) {
  FpVec r = a.one;
  while (e > 0) {
    if (mod_floor(e, Int(2)) == 1) r = fp_alg_mul(a, r, x);
    x = fp_alg_mul(a, x, x);
    e /= 2;
  }
  return r;
}

inline FpAlgebra algebra_mod_p(const CMField& k, long p) {
  FpAlgebra a;
  a.p = p;
  a.dim = 4;
  a.mul.assign(4, FpMat(4, FpVec(4, 0)));
  for (int i = 0; i < 4; ++i)
    for (int r = 0; r < 4; ++r)
      for (int j = 0; j < 4; ++j)
        a.mul[i][r][j] = static_cast<long>(mod_floor(k.mult[i](r, j), Int(p)));
  a.lift.assign(4, FpVec(4, 0));
  for (int i = 0; i < 4; ++i) a.lift[i][i] = 1;
  Vec4q one = to_basis(k, Vec4q(Rat(1), Rat(0), Rat(0), Rat(0)));
  a.one.assign(4, 0);
  for (int i = 0; i < 4; ++i) a.one[i] = static_cast<long>(mod_floor(num(one(i)), Int(p)));
  return a;
}

// columns = e_i^e, as a linear map (x -> x^e is F_p-linear for e a p-power)
inline FpMat fp_power_map(const FpAlgebra& a, const Int& e) {
  FpMat m(a.dim, FpVec(a.dim, 0));
  for (int i = 0; i < a.dim; ++i) {
    FpVec ei(a.dim, 0);
    ei[i] = 1;
    FpVec pw = fp_alg_pow(a, ei, e);
    for (int r = 0; r < a.dim; ++r) m[r][i] = pw[r];
  }
  return m;
}

inline std::vector<FpVec> fp_radical(const FpAlgebra& a) {
  Int q(a.p);
  while (q < a.dim) q *= a.p;
  return fp_kernel(fp_power_map(a, q), a.p);
}

// completes the (independent) columns in `vecs` to a basis with unit vectors
inline FpMat fp_complete_basis(const std::vector<FpVec>& vecs, int dim, long p) {
  FpMat cols;
  for (const FpVec& v : vecs) cols.push_back(v);
  for (int i = 0; i < dim && static_cast<int>(cols.size()) < dim; ++i) {
    FpVec e(dim, 0);
    e[i] = 1;
    FpMat test(dim, FpVec(cols.size() + 1, 0));
    for (size_t c = 0; c < cols.size(); ++c)
      for (int r = 0; r < dim; ++r) test[r][c] = cols[c][r];
    for (int r = 0; r < dim; ++r) test[r][cols.size()] = e[r];
    FpMat probe = test;
    if (fp_rref(probe, p).size() == cols.size() + 1) cols.push_back(e);
  }
  if (static_cast<int>(cols.size()) != dim) throw std::logic_error("fp_complete_basis: rank deficit");
  return cols;  // list of column vectors
}

// coordinates of y in the column basis `cols`
inline FpVec fp_coords_in(const FpMat& cols, const FpVec& y, long p) {
  int dim = static_cast<int>(y.size());
  FpMat a(dim, FpVec(cols.size(), 0));
  for (size_t c = 0; c < cols.size(); ++c)
    for (int r = 0; r < dim; ++r) a[r][c] = cols[c][r];
  return fp_solve(a, y, p);
}

// quotient algebra A / span(ideal_basis); lifts pass through representatives
inline FpAlgebra fp_quotient(const FpAlgebra& a, const std::vector<FpVec>& ideal_basis) {
  int nv = static_cast<int>(ideal_basis.size());
  int qdim = a.dim - nv;
  FpMat full = fp_complete_basis(ideal_basis, a.dim, a.p);
  FpMat comp(full.begin() + nv, full.end());
  FpAlgebra q;
  q.p = a.p;
  q.dim = qdim;
  q.mul.assign(qdim, FpMat(qdim, FpVec(qdim, 0)));
  for (int i = 0; i < qdim; ++i)
    for (int j = 0; j < qdim; ++j) {
      FpVec pr = fp_alg_mul(a, comp[i], comp[j]);
      FpVec co = fp_coords_in(full, pr, a.p);
      for (int r = 0; r < qdim; ++r) q.mul[i][r][j] = co[nv + r];
    }
  q.lift.assign(4, FpVec(qdim, 0));
  for (int c = 0; c < qdim; ++c) {
    // lift through A's representatives
    FpVec lifted(4, 0);
    for (int r = 0; r < 4; ++r) {
      long acc = 0;
      for (int i = 0; i < a.dim; ++i) acc = (acc + a.lift[r][i] * comp[c][i]) % a.p;
      lifted[r] = acc;
    }
    for (int r = 0; r < 4; ++r) q.lift[r][c] = lifted[r];
  }
  FpVec oc = fp_coords_in(full, a.one, a.p);
  q.one.assign(qdim, 0);
  for (int r = 0; r < qdim; ++r) q.one[r] = oc[nv + r];
  return q;
}

// unital subalgebra on the span of `basis` (closed under multiplication)
inline FpAlgebra fp_subalgebra(const FpAlgebra& a, const std::vector<FpVec>& basis) {
  int sdim = static_cast<int>(basis.size());
  FpMat full = fp_complete_basis(basis, a.dim, a.p);
  FpAlgebra s;
  s.p = a.p;
  s.dim = sdim;
  s.mul.assign(sdim, FpMat(sdim, FpVec(sdim, 0)));
  for (int i = 0; i < sdim; ++i)
    for (int j = 0; j < sdim; ++j) {
      FpVec pr = fp_alg_mul(a, basis[i], basis[j]);
      FpVec co = fp_coords_in(full, pr, a.p);
      for (int r = sdim; r < a.dim; ++r)
        if (co[r] != 0) throw std::logic_error("fp_subalgebra: span not closed");
      for (int r = 0; r < sdim; ++r) s.mul[i][r][j] = co[r];
    }
  s.lift.assign(4, FpVec(sdim, 0));
  for (int c = 0; c < sdim; ++c)
    for (int r = 0; r < 4; ++r) {
      long acc = 0;
      for (int i = 0; i < a.dim; ++i) acc = (acc + a.lift[r][i] * basis[c][i]) % a.p;
      s.lift[r][c] = acc;
    }
  // identity: e with e*w_i = w_i for all i (solve in subalgebra coordinates)
  FpMat sys(sdim * sdim, FpVec(sdim, 0));
  FpVec rhs(sdim * sdim, 0);
  for (int i = 0; i < sdim; ++i)
    for (int r = 0; r < sdim; ++r) {
      for (int j = 0; j < sdim; ++j) sys[i * sdim + r][j] = s.mul[j][r][i];
      rhs[i * sdim + r] = (r == i) ? 1 : 0;
    }
  s.one = fp_solve(sys, rhs, a.p);
  return s;
}

// splits a (semisimple) commutative algebra into field factors
inline void fp_split_fields(const FpAlgebra& s, std::vector<FpAlgebra>& out) {
  // Berlekamp fixed space of x -> x^p; its dimension = number of factors
  FpMat frob = fp_power_map(s, Int(s.p));
  for (int i = 0; i < s.dim; ++i) frob[i][i] = (frob[i][i] - 1 + s.p) % s.p;
  std::vector<FpVec> fixed = fp_kernel(frob, s.p);
  if (fixed.size() <= 1) {
    out.push_back(s);
    return;
  }
  // pick a fixed vector not proportional to 1
  FpVec z;
  for (const FpVec& v : fixed) {
    FpMat test(s.dim, FpVec(2, 0));
    for (int r = 0; r < s.dim; ++r) {
      test[r][0] = s.one[r];
      test[r][1] = v[r];
    }
    if (fp_rref(test, s.p).size() == 2) {
      z = v;
      break;
    }
  }
  if (z.empty()) throw std::logic_error("fp_split_fields: no separating element");
  // z generates a split étale subalgebra; its minimal polynomial has distinct
  // roots in F_p — split into eigenspaces of multiplication by z
  FpMat mz(s.dim, FpVec(s.dim, 0));
  for (int j = 0; j < s.dim; ++j) {
    FpVec ej(s.dim, 0);
    ej[j] = 1;
    FpVec c = fp_alg_mul(s, z, ej);
    for (int r = 0; r < s.dim; ++r) mz[r][j] = c[r];
  }
  int covered = 0;
  for (long lam = 0; lam < s.p && covered < s.dim; ++lam) {
    FpMat shifted = mz;
    for (int i = 0; i < s.dim; ++i)
      shifted[i][i] = ((shifted[i][i] - lam) % s.p + s.p) % s.p;
    std::vector<FpVec> eig = fp_kernel(shifted, s.p);
    if (eig.empty()) continue;
    covered += static_cast<int>(eig.size());
    fp_split_fields(fp_subalgebra(s, eig), out);
  }
  if (covered != s.dim) throw std::logic_error("fp_split_fields: eigenspaces do not fill the algebra");
}

}  // namespace detail

// all prime ideals above p, sorted by (norm, lexicographic HNF)
inline std::vector<IdealRep> prime_ideals_above(const CMField& k, long p) {
  using namespace detail;
  FpAlgebra a = algebra_mod_p(k, p);
  std::vector<FpVec> rad = fp_radical(a);
  FpAlgebra semi = rad.empty() ? a : fp_quotient(a, rad);
  std::vector<FpAlgebra> fields;
  fp_split_fields(semi, fields);

  std::vector<IdealRep> out;
  for (size_t ci = 0; ci < fields.size(); ++ci) {
    // maximal ideal = radical + the other field components, pulled back to O
    std::vector<FpVec> gens_o;
    for (const FpVec& v : rad) {
      FpVec w(4, 0);
      for (int r = 0; r < 4; ++r) {
        long acc = 0;
        for (int i = 0; i < 4; ++i) acc = (acc + a.lift[r][i] * v[i]) % p;
        w[r] = acc;
      }
      gens_o.push_back(w);
    }
    for (size_t cj = 0; cj < fields.size(); ++cj) {
      if (cj == ci) continue;
      for (int c = 0; c < fields[cj].dim; ++c) {
        FpVec w(4, 0);
        for (int r = 0; r < 4; ++r) w[r] = fields[cj].lift[r][c];
        gens_o.push_back(w);
      }
    }
    MatXz cols(4, 4 + static_cast<long>(gens_o.size()));
    cols.setZero();
    for (int i = 0; i < 4; ++i) cols(i, i) = p;
    for (size_t c = 0; c < gens_o.size(); ++c)
      for (int i = 0; i < 4; ++i) cols(i, 4 + c) = gens_o[c][i];
    IdealRep prime = ideal_from_columns(cols, Int(1));
    Int want = pow_int(Int(p), fields[ci].dim);
    if (ideal_norm(prime) != Rat(want))
      throw std::logic_error("prime_ideals_above: residue degree mismatch");
    out.push_back(prime);
  }
  std::sort(out.begin(), out.end(), [](const IdealRep& x, const IdealRep& y) {
    Rat nx = ideal_norm(x), ny = ideal_norm(y);
    if (nx != ny) return nx < ny;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (x.basis(i, j) != y.basis(i, j)) return x.basis(i, j) < y.basis(i, j);
    return false;
  });
  return out;
}

// ---------------------------------------------------------------------------
// principality: short vectors of the trace form  T2(x) = Tr(x * conj(x))

inline Mat4q trace_gram(const CMField& k) {
  Mat4q g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      g(i, j) = power_trace(k.a, power_mul(k.a, k.b, Vec4q(k.basis_q.col(i)),
                                           power_conj(Vec4q(k.basis_q.col(j)))));
  return g;
}

inline Rat t2_norm(const CMField& k, const Vec4q& coords) {
  Vec4q p = from_basis(k, coords);
  return power_trace(k.a, power_mul(k.a, k.b, p, power_conj(p)));
}

// every unit with all absolute values 1, i.e. T2 exactly 4 (Kronecker)
inline std::vector<Vec4z> torsion_units(const CMField& k) {
  Mat4q g = trace_gram(k);
  MatXq gx = g;
  std::vector<Vec4z> out;
  for (const VecXz& v : fincke_pohst(gx, Rat(4))) {
    Vec4q c;
    for (int i = 0; i < 4; ++i) c(i) = Rat(v(i));
    if (t2_norm(k, c) == 4) {
      Vec4z z;
      for (int i = 0; i < 4; ++i) z(i) = v(i);
      out.push_back(z);
    }
  }
  std::sort(out.begin(), out.end(), [](const Vec4z& x, const Vec4z& y) {
    for (int i = 0; i < 4; ++i)
      if (x(i) != y(i)) return x(i) < y(i);
    return false;
  });
  return out;
}

// Generator search: any generator α of I satisfies |N(α)| = N(I); after
// balancing the two archimedean absolute values with powers of the
// fundamental unit ε of K0, AM–GM bounds T2(α) ≤ 4 √N(I) cosh(log ε).
// The radius multiplier (default 1.2, escalating ×1.5 per round) covers the
// float rounding of that bound; an enumeration that cannot complete raises
// PrincipalityTimeout.
inline std::optional<Vec4z> is_principal(const CMField& k, const IdealRep& I_in,
                                         double radius_mult = 1.2, int rounds = 3) {
  if (I_in.den != 1) throw std::invalid_argument("is_principal: integral ideal required");
  // strip rational content: I_in = content * I, generators transfer back
  Int content(0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) content = gcd(content, I_in.basis(i, j));
  if (content == 0) throw std::invalid_argument("is_principal: zero ideal");
  IdealRep I{I_in.basis, Int(1)};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) I.basis(i, j) /= content;
  Int n = abs_int(I.basis.determinant());

  Mat4q g0 = trace_gram(k);
  Mat4q bq;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) bq(i, j) = Rat(I.basis(i, j));
  MatXq gram = bq.transpose() * g0 * bq;

  const long prec = 128;
  QuadUnit eps0 = fundamental_unit(k.k0);
  Real ev = quad_to_real(k.k0, eps0.eps, prec);
  Real eabs = abs(ev);
  Real one = Real::from_long(1, prec);
  if (eabs < one) eabs = one / eabs;
  Real bound = Real::from_long(2, prec) * sqrt(to_real(n, prec)) * (eabs + one / eabs);

  double mult = radius_mult;
  for (int round = 0; round < rounds; ++round, mult *= 1.5) {
    Rat radius(floor_to_int(bound * Real(mult)) + 1);
    std::vector<VecXz> found;
    try {
      found = fincke_pohst(gram, radius);
    } catch (const std::runtime_error&) {
      throw PrincipalityTimeout();
    }
    std::optional<Vec4z> best;
    Rat best_t2;
    for (const VecXz& v : found) {
      Vec4z x = I.basis * Vec4z(v(0), v(1), v(2), v(3));
      Vec4q xq;
      for (int i = 0; i < 4; ++i) xq(i) = Rat(x(i));
      if (abs_rat(power_norm(k.a, k.b, from_basis(k, xq))) != Rat(n)) continue;
      Rat t2 = t2_norm(k, xq);
      bool better = !best.has_value() || t2 < best_t2;
      if (!better && t2 == best_t2) {
        for (int i = 0; i < 4; ++i) {
          if (x(i) != (*best)(i)) {
            better = x(i) < (*best)(i);
            break;
          }
        }
      }
      if (better) {
        best = x;
        best_t2 = t2;
      }
    }
    if (best) return Vec4z(*best * content);
  }
  return std::nullopt;
}

// [I] == [J] in the class group?
inline bool equivalent_ideals(const CMField& k, const IdealRep& i1, const IdealRep& i2) {
  if (ideal_eq(i1, i2)) return true;
  IdealRep q = ideal_numerator(ideal_mul(k, i1, ideal_inverse(k, i2)));
  return is_principal(k, q).has_value();
}

// ---------------------------------------------------------------------------
// relative basis {1, τ} over the ring of integers of K0

struct RelativeBasis {
  Vec4q tau;         // power-basis coordinates
  IdealRep scaled;   // fractional ideal in the class of the input, contains 1
  bool orientation_normalized;
};

struct IdealClass {
  IdealRep rep;  // integral representative of minimal norm
  Vec4q tau;
  IdealRep scaled;
  bool orientation_normalized;
};

namespace detail {

// splits x ∈ K into (u, v) with x = u + v α, u,v ∈ K0 (as QuadElems)
struct K0Splitter {
  Mat4q to_uv;  // power coords -> (u1, u2, v1, v2) with u = u1 + u2 ω

  explicit K0Splitter(const CMField& k) {
    Mat4q s;
    Vec4q one = Vec4q::Zero(), alpha = Vec4q::Zero();
    one(0) = 1;
    alpha(1) = 1;
    s.col(0) = one;
    s.col(1) = k.omega_power;
    s.col(2) = alpha;
    s.col(3) = power_mul(k.a, k.b, k.omega_power, alpha);
    to_uv = s.inverse();
  }

  std::pair<QuadElem, QuadElem> split(const Vec4q& power) const {
    Vec4q c = to_uv * power;
    return {QuadElem{c(0), c(1)}, QuadElem{c(2), c(3)}};
  }
};

// integer combination of {g_i, ω g_i} equal to target (all in K0)
inline std::vector<Int> bezout_in_k0(const QuadField& f, const std::vector<QuadElem>& gens,
                                     const QuadElem& target) {
  Int scale(1);
  for (const QuadElem& g : gens) {
    scale = lcm(scale, den(g.u));
    scale = lcm(scale, den(g.v));
  }
  scale = lcm(scale, lcm(den(target.u), den(target.v)));
  long n = static_cast<long>(gens.size());
  MatXz m(2, 2 * n);
  for (long i = 0; i < n; ++i) {
    QuadElem gi = gens[i];
    QuadElem wgi = qmul(f, QuadElem{Rat(0), Rat(1)}, gi);
    m(0, 2 * i) = num(gi.u * Rat(scale));
    m(1, 2 * i) = num(gi.v * Rat(scale));
    m(0, 2 * i + 1) = num(wgi.u * Rat(scale));
    m(1, 2 * i + 1) = num(wgi.v * Rat(scale));
  }
  HnfResult h = hnf_with_transform(m);
  if (h.pivot_cols.size() != 2) throw std::logic_error("bezout_in_k0: generators not rank 2");
  // pivots sit in the two trailing columns; back-substitute exactly
  long c1 = h.h.cols() - 2, c2 = h.h.cols() - 1;
  Int t0 = num(target.u * Rat(scale)), t1 = num(target.v * Rat(scale));
  // rows: pivot of column c2 is in row 1, that of c1 in row 0
  Int y2 = t1 / h.h(1, c2);
  if (y2 * h.h(1, c2) != t1) throw std::logic_error("bezout_in_k0: target outside lattice");
  t0 -= y2 * h.h(0, c2);
  Int y1 = t0 / h.h(0, c1);
  if (y1 * h.h(0, c1) != t0 || h.h(1, c1) != 0)
    throw std::logic_error("bezout_in_k0: target outside lattice");
  std::vector<Int> combo(2 * n, Int(0));
  for (long r = 0; r < 2 * n; ++r)
    combo[r] = h.transform(r, c1) * y1 + h.transform(r, c2) * y2;
  return combo;
}

}  // namespace detail

// smallest nonzero vector of I in the T2 form (ties: lexicographic coords)
inline Vec4q ideal_minimum(const CMField& k, const IdealRep& I) {
  Mat4q g0 = trace_gram(k);
  Mat4q bq;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) bq(i, j) = Rat(I.basis(i, j));
  MatXq gram = bq.transpose() * g0 * bq;
  const long prec = 128;
  // Minkowski: the minimum satisfies T2 ≤ (2√2/π) √(N √d) (ball volume bound)
  Real nd = sqrt(to_real(ideal_norm(ideal_numerator(I)), prec) * sqrt(to_real(k.d, prec)));
  Rat bound(floor_to_int(nd) + 1);
  for (int tries = 0; tries < 8; ++tries, bound *= 2) {
    std::vector<VecXz> found = fincke_pohst(gram, bound);
    std::optional<Vec4z> best;
    Rat best_t2;
    for (const VecXz& v : found) {
      Vec4z c(v(0), v(1), v(2), v(3));
      Vec4q cq;
      for (int i = 0; i < 4; ++i) cq(i) = Rat(c(i));
      Rat t2 = (cq.transpose() * gram * cq)(0, 0);
      bool better = !best.has_value() || t2 < best_t2;
      if (!better && t2 == best_t2) {
        Vec4z bx = I.basis * (*best);
        Vec4z cx = I.basis * c;
        for (int i = 0; i < 4; ++i) {
          if (cx(i) != bx(i)) {
            better = cx(i) < bx(i);
            break;
          }
        }
      }
      if (better) {
        best = c;
        best_t2 = t2;
      }
    }
    if (best) {
      Vec4z x = I.basis * (*best);
      Vec4q out;
      for (int i = 0; i < 4; ++i) out(i) = Rat(x(i)) / Rat(I.den);
      return out;  // integral-basis coordinates
    }
  }
  throw std::logic_error("ideal_minimum: no vector found (bound escalation exhausted)");
}

inline RelativeBasis relative_basis(const CMField& k, const IdealRep& I_in) {
  if (!class_number_one(k.k0)) throw K0ClassNumberNotOne();
  const QuadField& f = k.k0;

  // scale to a fractional ideal containing 1 in the same class
  Vec4q gamma = ideal_minimum(k, I_in);
  IdealRep scaled = ideal_mul(k, I_in, ideal_inverse(k, principal_ideal(k, gamma)));
  Vec4q one_coords = to_basis(k, Vec4q(Rat(1), Rat(0), Rat(0), Rat(0)));
  if (!ideal_contains(scaled, one_coords))
    throw std::logic_error("relative_basis: scaled ideal does not contain 1");

  detail::K0Splitter sp(k);
  std::array<Vec4q, 4> vecs;     // Z-basis of the scaled ideal, power coords
  std::vector<QuadElem> uparts, vparts;
  for (int j = 0; j < 4; ++j) {
    Vec4q coords;
    for (int i = 0; i < 4; ++i) coords(i) = Rat(scaled.basis(i, j)) / Rat(scaled.den);
    vecs[j] = from_basis(k, coords);
    auto [u, v] = sp.split(vecs[j]);
    uparts.push_back(u);
    vparts.push_back(v);
  }

  // the v-parts map the module onto a nonzero ideal c of K0; bring a basis
  // vector onto a principal generator g of c
  QuadIdeal c = quad_ideal(f, vparts);
  std::optional<QuadElem> g = principal_generator(f, c);
  if (!g) throw K0ClassNumberNotOne();
  std::vector<Int> combo = detail::bezout_in_k0(f, vparts, *g);
  Vec4q w = Vec4q::Zero();
  for (int i = 0; i < 4; ++i) {
    w += vecs[i] * combo[2 * i];
    w += power_mul(k.a, k.b, k.omega_power, vecs[i]) * combo[2 * i + 1];
  }

  // kernel of the v-part projection = scaled ∩ K0, an ideal a0 of K0
  Int vscale(1);
  for (const QuadElem& v : vparts) vscale = lcm(vscale, lcm(den(v.u), den(v.v)));
  MatXz vmat(2, 4);
  for (int j = 0; j < 4; ++j) {
    vmat(0, j) = num(vparts[j].u * Rat(vscale));
    vmat(1, j) = num(vparts[j].v * Rat(vscale));
  }
  MatXz kern = integer_kernel(vmat);
  if (kern.cols() != 2) throw std::logic_error("relative_basis: kernel rank != 2");
  std::vector<QuadElem> a0gens;
  for (int c2 = 0; c2 < 2; ++c2) {
    QuadElem u{Rat(0), Rat(0)};
    for (int j = 0; j < 4; ++j) u = qadd(u, qscale(uparts[j], Rat(kern(j, c2))));
    a0gens.push_back(u);
  }
  QuadIdeal a0 = quad_ideal(f, a0gens);
  std::optional<QuadElem> f0 = principal_generator(f, a0);
  if (!f0) throw K0ClassNumberNotOne();

  // final module: (1/f0)·scaled = R·1 ⊕ R·τ with τ = w / f0
  QuadElem f0inv = qdiv(f, qelem(1), *f0);
  Vec4q tau = power_mul(k.a, k.b, embed_k0(k, f0inv), w);
  IdealRep final_ideal = ideal_mul(
      k, scaled, ideal_inverse(k, principal_ideal(k, to_basis(k, embed_k0(k, *f0)))));

  // orientation: put the first embedding of τ in the upper half plane
  PrecisionContext ctx(128);
  std::array<Complex, 4> emb = embeddings(k, ctx);
  if (embed_power(k, tau, emb[0]).im.sign() < 0) tau = -tau;

  // unimodular change of basis between {1, τ, ω, ωτ} and the ideal lattice
  Mat4q cand;
  cand.col(0) = Vec4q(Rat(1), Rat(0), Rat(0), Rat(0));
  cand.col(1) = tau;
  cand.col(2) = k.omega_power;
  cand.col(3) = power_mul(k.a, k.b, k.omega_power, tau);
  Mat4q lat;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) lat(i, j) = Rat(final_ideal.basis(i, j)) / Rat(final_ideal.den);
  Mat4q lat_power = k.basis_q * lat;
  Mat4q change = lat_power.inverse() * cand;
  Rat det = change.determinant();
  if (abs_rat(det) != 1)
    throw std::logic_error("relative_basis: change of basis is not unimodular");
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!is_integer(change(i, j)))
        throw std::logic_error("relative_basis: change of basis is not integral");

  QuadElem tau_v = sp.split(tau).second;
  if (qis_zero(tau_v)) throw std::logic_error("relative_basis: tau lies in K0");

  return {tau, final_ideal, true};
}

// checks an (externally supplied or computed) class entry against the same
// invariants relative_basis guarantees
inline bool ideal_class_valid(const CMField& k, const IdealClass& cls) {
  try {
    Vec4q one_coords = to_basis(k, Vec4q(Rat(1), Rat(0), Rat(0), Rat(0)));
    if (!ideal_contains(cls.scaled, one_coords)) return false;
    detail::K0Splitter sp(k);
    if (qis_zero(sp.split(cls.tau).second)) return false;
    Mat4q cand;
    cand.col(0) = Vec4q(Rat(1), Rat(0), Rat(0), Rat(0));
    cand.col(1) = cls.tau;
    cand.col(2) = k.omega_power;
    cand.col(3) = power_mul(k.a, k.b, k.omega_power, cls.tau);
    Mat4q lat;
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) lat(i, j) = Rat(cls.scaled.basis(i, j)) / Rat(cls.scaled.den);
    Mat4q change = (k.basis_q * lat).inverse() * cand;
    if (abs_rat(change.determinant()) != 1) return false;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (!is_integer(change(i, j))) return false;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// class group enumeration below the Minkowski bound

inline std::vector<IdealClass> class_group(const CMField& k, double bound_multiplier = 1.0,
                                           size_t class_cap = 64) {
  const long prec = 128;
  Real pi_v = Real::pi(prec);
  Real mb = Real::from_long(3, prec) / (Real::from_long(2, prec) * pi_v * pi_v) *
            sqrt(to_real(k.d, prec)) * Real(bound_multiplier);
  Int bound = floor_to_int(mb);

  // prime ideals of norm within the bound
  std::vector<IdealRep> prims;
  for (long p = 2; Int(p) <= bound; ++p) {
    bool prime = p >= 2;
    for (long q = 2; q * q <= p; ++q)
      if (p % q == 0) {
        prime = false;
        break;
      }
    if (!prime) continue;
    for (const IdealRep& pr : prime_ideals_above(k, p))
      if (ideal_norm(pr) <= Rat(bound)) prims.push_back(pr);
  }

  // close under multiplication up to the bound
  auto key = [](const IdealRep& I) {
    std::string s;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += I.basis(i, j).str() + ",";
    return s;
  };
  std::map<std::string, IdealRep> pool;
  IdealRep one = unit_ideal();
  pool[key(one)] = one;
  std::vector<IdealRep> frontier{one};
  while (!frontier.empty()) {
    std::vector<IdealRep> next;
    for (const IdealRep& a : frontier)
      for (const IdealRep& p : prims) {
        if (ideal_norm(a) * ideal_norm(p) > Rat(bound)) continue;
        IdealRep prod = ideal_mul(k, a, p);
        std::string s = key(prod);
        if (!pool.count(s)) {
          pool[s] = prod;
          next.push_back(prod);
        }
      }
    frontier = std::move(next);
  }
  std::vector<IdealRep> ideals;
  for (auto& [s, I] : pool) ideals.push_back(I);
  std::sort(ideals.begin(), ideals.end(), [&](const IdealRep& x, const IdealRep& y) {
    Rat nx = ideal_norm(x), ny = ideal_norm(y);
    if (nx != ny) return nx < ny;
    return key(x) < key(y);
  });

  // partition into classes (representative = first seen = minimal norm)
  std::vector<IdealRep> reps;
  std::vector<IdealRep> rep_inverse_numerators;
  for (const IdealRep& I : ideals) {
    bool assigned = false;
    for (size_t r = 0; r < reps.size() && !assigned; ++r) {
      IdealRep q = ideal_numerator(ideal_mul(k, I, rep_inverse_numerators[r]));
      if (is_principal(k, q)) assigned = true;
    }
    if (!assigned) {
      reps.push_back(I);
      rep_inverse_numerators.push_back(ideal_numerator(ideal_inverse(k, I)));
      if (reps.size() > class_cap) throw ClassGroupTooLarge(reps.size());
    }
  }

  std::vector<IdealClass> out;
  for (const IdealRep& r : reps) {
    RelativeBasis rb = relative_basis(k, r);
    out.push_back({r, rb.tau, rb.scaled, rb.orientation_normalized});
  }
  return out;
}

}  // namespace igusa
