#pragma once

// Rational reconstruction, integer factorization, exact polynomial
// discriminants.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "igusa/rational.hpp"

namespace igusa {

// ---------------------------------------------------------------------------
// rational reconstruction via continued-fraction convergents

// First convergent p/q of x with q <= max_den and |x - p/q| <= tol.
inline std::optional<Rat> rational_reconstruct(const Real& x, const Int& max_den,
                                               const Real& tol) {
  long prec = x.prec();
  Real t = x;
  Int h2(0), h1(1), k2(1), k1(0);  // convergent recurrences
  for (int it = 0; it < 20000; ++it) {
    Int a = floor_to_int(floor(t));
    Int h = a * h1 + h2, k = a * k1 + k2;
    if (k > max_den) return std::nullopt;
    Rat cand(h, k);
    if (abs(x - to_real(cand, prec)) <= tol) return cand;
    Real frac = t - to_real(a, prec);
    if (frac.is_zero()) return std::nullopt;  // expansion exhausted
    t = 1L / frac;
    h2 = h1; h1 = h;
    k2 = k1; k1 = k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// primality and factorization

inline const std::vector<uint32_t>& small_primes() {
  static const std::vector<uint32_t> primes = [] {
    constexpr uint32_t N = 1'000'000;
    std::vector<bool> comp(N + 1, false);
    std::vector<uint32_t> out;
    for (uint32_t i = 2; i <= N; ++i) {
      if (!comp[i]) {
        out.push_back(i);
        for (uint64_t j = uint64_t(i) * i; j <= N; j += i) comp[j] = true;
      }
    }
    return out;
  }();
  return primes;
}

constexpr long kTrialBound = 1'000'000;

inline Int powmod(Int base, Int e, const Int& m) {
  Int r;
  mpz_powm(r.backend().data(), base.backend().data(), e.backend().data(),
           m.backend().data());
  return r;
}

// Miller-Rabin with `rounds` bases drawn from a fixed-seed generator
// (deterministic across runs).
inline bool is_probable_prime(const Int& n, int rounds = 40) {
  if (n < 2) return false;
  for (uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  Int d = n - 1;
  unsigned long s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  std::mt19937_64 rng(0x5eed1234abcdefULL);
  std::uniform_int_distribution<uint64_t> dist(2, UINT64_MAX);
  for (int i = 0; i < rounds; ++i) {
    Int a = Int(dist(rng)) % (n - 3) + 2;
    Int x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned long r = 1; r < s; ++r) {
      x = (x * x) % n;
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

struct FactorEntry {
  Int prime;
  unsigned exponent;
  bool certified;  // deterministic (below trial-division reach) vs probable
};

struct Factorization {
  std::vector<FactorEntry> factors;  // ascending primes
  int sign = 1;

  Int recombine() const {
    Int r(sign);
    for (const auto& f : factors) r *= pow_int(f.prime, f.exponent);
    return r;
  }
};

struct FactorTimeout : std::runtime_error {
  Int cofactor;
  explicit FactorTimeout(Int c)
      : std::runtime_error("rho iteration cap hit on cofactor " + c.str()),
        cofactor(std::move(c)) {}
};

namespace detail {

// Brent-cycle Pollard rho; returns a nontrivial factor of composite odd n.
inline Int pollard_brent(const Int& n, uint64_t iter_cap) {
  std::mt19937_64 rng(0xb5e97c0ffeeULL + static_cast<uint64_t>(n % 1000003));
  for (int attempt = 0; attempt < 64; ++attempt) {
    Int c = Int(rng() % 1000000) + 1;
    Int y = Int(rng() % 1000000) + 2, m = 128, g = 1, r = 1, q = 1, x, ys;
    uint64_t used = 0;
    while (g == 1) {
      x = y;
      for (Int i = 0; i < r; ++i) y = (y * y + c) % n;
      Int k = 0;
      while (k < r && g == 1) {
        ys = y;
        Int lim = (r - k < m) ? Int(r - k) : m;
        for (Int i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          q = q * abs_int(x - y) % n;
        }
        g = gcd(q, n);
        k += m;
        used += lim.convert_to<uint64_t>();
        if (used > iter_cap) throw FactorTimeout(n);
      }
      r *= 2;
    }
    if (g == n) {  // backtrack
      g = 1;
      while (g == 1) {
        ys = (ys * ys + c) % n;
        g = gcd(abs_int(x - ys), n);
        if (++used > iter_cap) throw FactorTimeout(n);
      }
    }
    if (g != n) return g;
  }
  throw FactorTimeout(n);
}

inline void factor_rec(const Int& n, std::vector<std::pair<Int, bool>>& out,
                       uint64_t iter_cap) {
  if (n == 1) return;
  // after trial division to kTrialBound, cofactors < kTrialBound^2 are prime
  if (n < Int(kTrialBound) * kTrialBound) {
    out.emplace_back(n, true);
    return;
  }
  if (is_probable_prime(n)) {
    out.emplace_back(n, false);
    return;
  }
  Int f = pollard_brent(n, iter_cap);
  factor_rec(f, out, iter_cap);
  factor_rec(n / f, out, iter_cap);
}

}  // namespace detail

inline Factorization factor(const Int& n_in, uint64_t rho_iter_cap = 50'000'000) {
  if (n_in == 0) throw std::invalid_argument("factor(0)");
  Factorization out;
  out.sign = n_in < 0 ? -1 : 1;
  Int n = abs_int(n_in);
  std::vector<std::pair<Int, bool>> primes;  // (prime, certified)
  for (uint32_t p : small_primes()) {
    if (Int(p) * p > n) break;
    while (n % p == 0) {
      primes.emplace_back(Int(p), true);
      n /= p;
    }
  }
  if (n > 1) {
    if (n < Int(kTrialBound) * kTrialBound) {
      primes.emplace_back(n, true);
    } else {
      detail::factor_rec(n, primes, rho_iter_cap);
    }
  }
  std::sort(primes.begin(), primes.end());
  for (size_t i = 0; i < primes.size();) {
    size_t j = i;
    bool cert = true;
    while (j < primes.size() && primes[j].first == primes[i].first) {
      cert = cert && primes[j].second;
      ++j;
    }
    out.factors.push_back({primes[i].first, static_cast<unsigned>(j - i), cert});
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// exact polynomial discriminant (subresultant PRS)

namespace detail {

using ZPoly = std::vector<Int>;  // coeffs[i] = coefficient of x^i

inline void ztrim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}
inline long zdeg(const ZPoly& p) { return static_cast<long>(p.size()) - 1; }
inline Int zcontent(const ZPoly& p) {
  Int g(0);
  for (const auto& c : p) g = gcd(g, c);
  return g == 0 ? Int(1) : g;
}
inline ZPoly zdiv_scalar(const ZPoly& p, const Int& d) {
  ZPoly r(p.size());
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] % d != 0) throw std::logic_error("subresultant: inexact division");
    r[i] = p[i] / d;
  }
  return r;
}

// lc(B)^(deg A - deg B + 1) * A  mod  B
inline ZPoly pseudo_rem(ZPoly A, const ZPoly& B) {
  long db = zdeg(B);
  const Int& lb = B.back();
  long scale_left = zdeg(A) - db + 1;  // total lb-multiplications owed
  while (!A.empty() && zdeg(A) >= db) {
    long da = zdeg(A);
    Int head = A.back();
    for (long i = 0; i <= da; ++i) A[i] *= lb;
    --scale_left;
    for (long i = 0; i <= db; ++i) A[da - db + i] -= head * B[i];
    ztrim(A);
  }
  if (scale_left > 0 && !A.empty()) {
    Int f = pow_int(lb, scale_left);
    for (auto& c : A) c *= f;
  }
  return A;
}

// resultant of primitive-part-reduced integer polynomials, Cohen Alg. 3.3.7
inline Int zresultant(ZPoly A, ZPoly B) {
  ztrim(A);
  ztrim(B);
  if (A.empty() || B.empty()) return Int(0);
  if (zdeg(A) < zdeg(B)) {
    Int s = ((zdeg(A) * zdeg(B)) % 2 == 1) ? Int(-1) : Int(1);
    return s * zresultant(B, A);
  }
  Int a_cont = zcontent(A), b_cont = zcontent(B);
  A = zdiv_scalar(A, a_cont);
  B = zdiv_scalar(B, b_cont);
  Int scale = pow_int(a_cont, zdeg(B)) * pow_int(b_cont, zdeg(A));
  Int g(1), h(1), s(1);
  while (zdeg(B) > 0) {
    long delta = zdeg(A) - zdeg(B);
    if ((zdeg(A) % 2 == 1) && (zdeg(B) % 2 == 1)) s = -s;
    ZPoly R = pseudo_rem(A, B);
    A = B;
    Int divisor = g * pow_int(h, delta);
    if (R.empty()) {
      B.clear();
    } else {
      B = zdiv_scalar(R, divisor);
    }
    g = A.back();
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = g;
    } else {
      h = pow_int(g, delta) / pow_int(h, delta - 1);
    }
  }
  if (B.empty()) return Int(0);  // common root
  long da = zdeg(A);  // >= 1: the loop kept deg A > deg B
  Int hp = pow_int(B[0], da) / pow_int(h, da - 1);
  return scale * s * hp;
}

}  // namespace detail

// disc(h) = (-1)^(n(n-1)/2) Res(h, h') / lc(h), coeffs[i] on x^i.
inline Rat poly_discriminant(const std::vector<Rat>& coeffs) {
  std::vector<Rat> c = coeffs;
  while (!c.empty() && c.back() == 0) c.pop_back();
  long n = static_cast<long>(c.size()) - 1;
  if (n < 1) throw std::invalid_argument("poly_discriminant: degree < 1");
  if (n == 1) return Rat(1);
  Int L(1);
  for (const auto& q : c) L = lcm(L, den(q));
  detail::ZPoly A(c.size());
  for (size_t i = 0; i < c.size(); ++i) A[i] = num(c[i]) * (L / den(c[i]));
  detail::ZPoly Ap(A.size() - 1);
  for (size_t i = 1; i < A.size(); ++i) Ap[i - 1] = A[i] * Int(static_cast<long>(i));
  Int res = detail::zresultant(A, Ap);
  Int sign = ((n * (n - 1) / 2) % 2 == 1) ? Int(-1) : Int(1);
  Rat disc_scaled(sign * res, A.back());  // disc of the integer poly L*h
  return disc_scaled / Rat(pow_int(L, 2 * static_cast<unsigned long>(n) - 2));
}

}  // namespace igusa
