#pragma once

// Integer-lattice toolkit: column HNF with transform, kernels, exact
// determinants, Fincke-Pohst short vectors, symplectic normalization.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "igusa/eigen_support.hpp"
#include "igusa/numeric.hpp"

namespace igusa {

struct NotPrincipal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// extended gcd: g = s*a + t*b, g >= 0
inline Int ext_gcd(const Int& a, const Int& b, Int& s, Int& t) {
  Int g;
  mpz_gcdext(g.backend().data(), s.backend().data(), t.backend().data(),
             a.backend().data(), b.backend().data());
  return g;
}

struct HnfResult {
  MatXz h;          // m x n, pivots in the trailing columns, staircase shape
  MatXz transform;  // n x n unimodular U with input * U = h
  std::vector<long> pivot_cols;  // pivot column of each pivot row, top-down
};

// Column-style Hermite normal form: pivots accumulate right-to-left from the
// bottom row, diagonal positive, entries right of a pivot reduced into
// [0, pivot).
inline HnfResult hnf_with_transform(MatXz a) {
  const long m = a.rows(), n = a.cols();
  MatXz u = MatXz::Identity(n, n);
  long c = n - 1;
  std::vector<long> pivots_rev;
  for (long r = m - 1; r >= 0 && c >= 0; --r) {
    long j0 = -1;
    for (long j = c; j >= 0; --j)
      if (a(r, j) != 0) { j0 = j; break; }
    if (j0 < 0) continue;
    if (j0 != c) { a.col(j0).swap(a.col(c)); u.col(j0).swap(u.col(c)); }
    for (long j = 0; j < c; ++j) {
      if (a(r, j) == 0) continue;
      Int s, t;
      Int g = ext_gcd(a(r, c), a(r, j), s, t);
      Int x = a(r, c) / g, y = a(r, j) / g;
      // det-1 column mix: (col_c, col_j) <- (s*col_c + t*col_j, -y*col_c + x*col_j)
      for (long i = 0; i < m; ++i) {
        Int cc = a(i, c), cj = a(i, j);
        a(i, c) = s * cc + t * cj;
        a(i, j) = x * cj - y * cc;
      }
      for (long i = 0; i < n; ++i) {
        Int cc = u(i, c), cj = u(i, j);
        u(i, c) = s * cc + t * cj;
        u(i, j) = x * cj - y * cc;
      }
    }
    if (a(r, c) < 0) { a.col(c) *= Int(-1); u.col(c) *= Int(-1); }
    for (long j = c + 1; j < n; ++j) {
      Int q = floor_div(a(r, j), a(r, c));
      if (q != 0) { a.col(j) -= a.col(c) * q; u.col(j) -= u.col(c) * q; }
    }
    pivots_rev.push_back(r);
    --c;
  }
  HnfResult res;
  res.h = std::move(a);
  res.transform = std::move(u);
  for (auto it = pivots_rev.rbegin(); it != pivots_rev.rend(); ++it)
    res.pivot_cols.push_back(*it);
  return res;
}

// square HNF basis of a full-rank column lattice (drops zero columns)
inline MatXz hnf_basis(const MatXz& a) {
  HnfResult r = hnf_with_transform(a);
  long rank = static_cast<long>(r.pivot_cols.size());
  if (rank < a.rows()) throw std::runtime_error("hnf_basis: lattice not full rank");
  return r.h.rightCols(rank);
}

// Z-basis of { x : a x = 0 }
inline MatXz integer_kernel(const MatXz& a) {
  HnfResult r = hnf_with_transform(a);
  long rank = static_cast<long>(r.pivot_cols.size());
  long n = a.cols();
  return r.transform.leftCols(n - rank);
}

// Bareiss fraction-free determinant
inline Int det_int(MatXz a) {
  const long n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("det_int: square required");
  Int sign(1), prev(1);
  for (long k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      long p = -1;
      for (long i = k + 1; i < n; ++i)
        if (a(i, k) != 0) { p = i; break; }
      if (p < 0) return Int(0);
      a.row(k).swap(a.row(p));
      sign = -sign;
    }
    for (long i = k + 1; i < n; ++i)
      for (long j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// basis of { x in F_p^n : a x = 0 }, entries lifted to [0, p)
inline std::vector<std::vector<long>> kernel_mod_p(const MatXz& a_in, long p) {
  const long m = a_in.rows(), n = a_in.cols();
  std::vector<std::vector<long>> a(m, std::vector<long>(n));
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < n; ++j)
      a[i][j] = mod_floor(a_in(i, j), Int(p)).convert_to<long>();
  auto inv_mod = [p](long x) {
    Int s, t;
    ext_gcd(Int(x), Int(p), s, t);
    return mod_floor(s, Int(p)).convert_to<long>();
  };
  std::vector<long> pivot_of_col(n, -1);
  long rank = 0;
  for (long j = 0; j < n && rank < m; ++j) {
    long pr = -1;
    for (long i = rank; i < m; ++i)
      if (a[i][j] % p != 0) { pr = i; break; }
    if (pr < 0) continue;
    std::swap(a[pr], a[rank]);
    long inv = inv_mod(a[rank][j]);
    for (long k = 0; k < n; ++k) a[rank][k] = (a[rank][k] * inv) % p;
    for (long i = 0; i < m; ++i) {
      if (i == rank || a[i][j] == 0) continue;
      long f = a[i][j];
      for (long k = 0; k < n; ++k)
        a[i][k] = ((a[i][k] - f * a[rank][k]) % p + p) % p;
    }
    pivot_of_col[j] = rank;
    ++rank;
  }
  std::vector<std::vector<long>> basis;
  for (long j = 0; j < n; ++j) {
    if (pivot_of_col[j] >= 0) continue;
    std::vector<long> v(n, 0);
    v[j] = 1;
    for (long k = 0; k < n; ++k)
      if (pivot_of_col[k] >= 0)
        v[k] = ((-a[pivot_of_col[k]][j]) % p + p) % p;
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Fincke-Pohst enumeration: all x != 0 with x^T G x <= bound, G exact posdef.

inline std::vector<VecXz> fincke_pohst(const MatXq& g, const Rat& bound,
                                       size_t max_results = 2'000'000) {
  const long n = g.rows();
  // exact LDL^T
  MatXq l = MatXq::Identity(n, n);
  std::vector<Rat> d(n);
  MatXq w = g;
  for (long k = 0; k < n; ++k) {
    d[k] = w(k, k);
    if (d[k] <= 0) throw std::invalid_argument("fincke_pohst: not positive definite");
    for (long i = k + 1; i < n; ++i) l(i, k) = w(i, k) / d[k];
    for (long i = k + 1; i < n; ++i)
      for (long j = k + 1; j <= i; ++j) {
        w(i, j) -= l(i, k) * w(j, k);
        w(j, i) = w(i, j);
      }
  }
  // Q(x) = sum_i d_i (x_i + sum_{j>i} l(j,i) x_j)^2, enumerate x_{n-1}..x_0
  std::vector<VecXz> out;
  VecXz x = VecXz::Zero(n);
  std::vector<Rat> partial(n + 1, Rat(0));  // partial[i] = terms from levels > i-1
  const long fprec = 128;
  std::function<void(long)> rec = [&](long i) {
    if (i < 0) {
      bool nonzero = false;
      for (long j = 0; j < n; ++j)
        if (x(j) != 0) { nonzero = true; break; }
      if (nonzero) {
        if (out.size() >= max_results)
          throw std::runtime_error("fincke_pohst: result cap exceeded");
        out.push_back(x);
      }
      return;
    }
    Rat center(0);
    for (long j = i + 1; j < n; ++j) center += l(j, i) * Rat(x(j));
    Rat room = bound - partial[i + 1];
    if (room < 0) return;
    Real radius = sqrt(to_real(room / d[i], fprec));
    Real c = to_real(center, fprec);
    Int lo = floor_to_int(floor(-c - radius)) - 1;
    Int hi = floor_to_int(floor(-c + radius)) + 1;
    for (Int v = lo; v <= hi; ++v) {
      Rat term = Rat(v) + center;
      Rat q = partial[i + 1] + d[i] * term * term;
      if (q > bound) continue;  // exact rejection; the +-1 slack is float-safe
      x(i) = v;
      partial[i] = q;
      rec(i - 1);
    }
    x(i) = 0;
  };
  rec(n - 1);
  return out;
}

// ---------------------------------------------------------------------------
// symplectic normalization of an integral skew form with Pfaffian +-1

inline Int pfaffian4(const Mat4z& e) {
  return e(0, 1) * e(2, 3) - e(0, 2) * e(1, 3) + e(0, 3) * e(1, 2);
}

// elementary divisors (d1, d2) of a nonzero 4x4 skew form, d1 | d2
inline std::pair<Int, Int> skew_divisors(const Mat4z& e) {
  Int g(0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g = gcd(g, e(i, j));
  Int pf = abs_int(pfaffian4(e));
  if (g == 0 || pf == 0) throw std::invalid_argument("skew_divisors: degenerate form");
  return {g, pf / g};
}

// U unimodular with U^T E U = [[0,I],[-I,0]] (requires divisors (1,1)).
inline Mat4z symplectic_basis(const Mat4z& e) {
  if (abs_int(pfaffian4(e)) != 1)
    throw NotPrincipal("symplectic_basis: elementary divisors not (1,1)");
  Mat4z u = Mat4z::Identity();
  auto pair_of = [&](int i, int j) {
    Int v(0);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) v += u(r, i) * e(r, c) * u(c, j);
    return v;
  };
  std::vector<int> remaining{0, 1, 2, 3};
  int apair[2], bpair[2];
  for (int blk = 0; blk < 2; ++blk) {
    int bi = -1, bj = -1;
    Int bd(0);
    for (;;) {
      bi = -1;
      for (int i : remaining)
        for (int j : remaining) {
          if (i == j) continue;
          Int v = pair_of(i, j);
          if (v != 0 && (bi < 0 || abs_int(v) < abs_int(bd))) {
            bi = i; bj = j; bd = v;
          }
        }
      if (bi < 0) throw NotPrincipal("symplectic_basis: degenerate block");
      if (abs_int(bd) == 1) break;
      // reduce all pairings against the current minimum
      bool reduced = false;
      for (int k : remaining) {
        if (k == bi || k == bj) continue;
        Int vik = pair_of(bi, k);
        if (vik % bd != 0) {
          Int q = round_div(vik, bd);
          u.col(k) -= u.col(bj) * q;  // E(bi,k) -= q E(bi,bj)
          reduced = true;
        }
        Int vjk = pair_of(bj, k);
        if (vjk % bd != 0) {
          Int q = round_div(vjk, bd);
          u.col(k) += u.col(bi) * q;  // E(bj,k) += q E(bj,bi) = vjk - q*bd
          reduced = true;
        }
      }
      if (!reduced) {
        // gcd must hide in the complementary block: mix a row in
        bool done = false;
        for (int k : remaining) {
          if (k == bi || k == bj || done) continue;
          for (int l : remaining) {
            if (l == bi || l == bj || l == k) continue;
            if (pair_of(k, l) % bd != 0) {
              u.col(bi) += u.col(k);
              done = true;
              break;
            }
          }
        }
        if (!done) throw NotPrincipal("symplectic_basis: divisor > 1");
      }
    }
    if (bd < 0) std::swap(bi, bj);
    apair[blk] = bi;
    bpair[blk] = bj;
    for (int k : remaining) {
      if (k == bi || k == bj) continue;
      Int eb = pair_of(bj, k), ea = pair_of(bi, k);
      // u_k += E(b,k) a - E(a,k) b  kills both pairings
      u.col(k) += u.col(bi) * eb - u.col(bj) * ea;
    }
    std::vector<int> next;
    for (int k : remaining)
      if (k != bi && k != bj) next.push_back(k);
    remaining = next;
  }
  Mat4z out;
  out.col(0) = u.col(apair[0]);
  out.col(1) = u.col(apair[1]);
  out.col(2) = u.col(bpair[0]);
  out.col(3) = u.col(bpair[1]);
  return out;
}

inline Mat4z symplectic_j() {
  Mat4z j = Mat4z::Zero();
  j(0, 2) = 1; j(1, 3) = 1; j(2, 0) = -1; j(3, 1) = -1;
  return j;
}

}  // namespace igusa
