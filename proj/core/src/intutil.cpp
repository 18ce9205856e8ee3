// Copyright (c) 2026 hmf project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hmf/intutil.hpp"

#include <algorithm>
#include <stdexcept>

namespace hmf {

std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::swap(t -= q * new_t, new_t);
    std::swap(r -= q * new_r, new_r);
  }
  if (r != 1) throw std::invalid_argument("invmod_u64: arguments not coprime");
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t);
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  // Deterministic Miller–Rabin for 64-bit inputs with the standard base set.
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::uint64_t sqrtmod_prime_u64(std::uint64_t a, std::uint64_t q) {
  a %= q;
  if (a == 0) return 0;
  if (q == 2) return a;
  if (powmod_u64(a, (q - 1) / 2, q) != 1)
    throw std::invalid_argument("sqrtmod_prime_u64: not a quadratic residue");
  if (q % 4 == 3) return powmod_u64(a, (q + 1) / 4, q);
  // Tonelli–Shanks.
  std::uint64_t s = q - 1;
  int e = 0;
  while ((s & 1) == 0) {
    s >>= 1;
    ++e;
  }
  std::uint64_t n = 2;
  while (powmod_u64(n, (q - 1) / 2, q) != q - 1) ++n;
  std::uint64_t x = powmod_u64(a, (s + 1) / 2, q);
  std::uint64_t b = powmod_u64(a, s, q);
  std::uint64_t g = powmod_u64(n, s, q);
  int r = e;
  while (b != 1) {
    std::uint64_t t = b;
    int m = 0;
    while (t != 1 && m < r) {
      t = mulmod_u64(t, t, q);
      ++m;
    }
    if (m == r) throw std::logic_error("sqrtmod_prime_u64: internal failure");
    std::uint64_t gs = g;
    for (int i = 0; i < r - m - 1; ++i) gs = mulmod_u64(gs, gs, q);
    x = mulmod_u64(x, gs, q);
    g = mulmod_u64(gs, gs, q);
    b = mulmod_u64(b, g, q);
    r = m;
  }
  return x;
}

int jacobi_symbol(long a, unsigned long n) {
  if (n == 0 || n % 2 == 0) throw std::invalid_argument("jacobi_symbol: modulus must be odd positive");
  mpz_class az(a), nz(static_cast<unsigned long>(n));
  return mpz_jacobi(az.get_mpz_t(), nz.get_mpz_t());
}

namespace {

// Pollard rho (Floyd cycle detection, deterministic parameters) for odd
// composite n with no factor below 10^4.  Runs in ~sqrt(p) steps for the
// smallest prime factor p, so it is effective for p up to ~10^12.
mpz_class pollard_rho(const mpz_class& n) {
  for (long c = 1;; ++c) {
    mpz_class x = 2, y = 2, d = 1;
    long steps = 0;
    while (d == 1) {
      x = (x * x + c) % n;
      y = (y * y + c) % n;
      y = (y * y + c) % n;
      mpz_class diff = x - y;
      if (diff == 0) break;  // cycle without factor; retry with the next c
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      if (++steps > (1L << 26))
        throw std::runtime_error("pollard_rho: no factor found (factor too large)");
    }
    if (d != 1 && d != n) return d;
  }
}

void factor_rec(const mpz_class& n, std::map<mpz_class, int>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
    out[n] += 1;
    return;
  }
  mpz_class d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::map<mpz_class, int> factor_mpz(const mpz_class& n) {
  if (n == 0) throw std::invalid_argument("factor_mpz: zero has no factorization");
  mpz_class m = abs(n);
  std::map<mpz_class, int> out;
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      out[mpz_class(p)] += 1;
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    }
  }
  // Trial division to 10^4 covers every factor that routinely appears;
  // Pollard rho handles the occasional larger cofactor.
  for (unsigned long p = 17; p < 10000 && m > 1; p += 2) {
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      out[mpz_class(p)] += 1;
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    }
  }
  if (m > 1) factor_rec(m, out);
  return out;
}

std::vector<mpz_class> divisors_mpz(const mpz_class& n) {
  auto f = factor_mpz(n);
  std::vector<mpz_class> divs{1};
  for (const auto& [p, e] : f) {
    std::size_t base = divs.size();
    mpz_class pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

mpz_class sigma_k(const mpz_class& n, unsigned k) {
  mpz_class s = 0, dk;
  for (const auto& d : divisors_mpz(n)) {
    mpz_pow_ui(dk.get_mpz_t(), d.get_mpz_t(), k);
    s += dk;
  }
  return s;
}

int moebius(unsigned long n) {
  if (n == 0) throw std::invalid_argument("moebius: n must be positive");
  if (n == 1) return 1;
  auto f = factor_mpz(mpz_class(n));
  for (const auto& [p, e] : f)
    if (e > 1) return 0;
  return (f.size() % 2 == 0) ? 1 : -1;
}

unsigned long euler_phi(unsigned long n) {
  if (n == 0) throw std::invalid_argument("euler_phi: n must be positive");
  unsigned long result = n;
  unsigned long m = n;
  for (unsigned long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      result -= result / p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

mpq_class bernoulli(unsigned k) {
  // Exact recurrence sum_{j=0}^{k} C(k+1, j) B_j = 0, cached across calls.
  static std::vector<mpq_class> cache{mpq_class(1), mpq_class(-1, 2)};
  while (cache.size() <= k) {
    unsigned n = static_cast<unsigned>(cache.size());
    mpq_class acc = 0;
    mpz_class binom;
    for (unsigned j = 0; j < n; ++j) {
      mpz_bin_uiui(binom.get_mpz_t(), n + 1, j);
      acc += mpq_class(binom) * cache[j];
    }
    cache.push_back(-acc / mpq_class(n + 1));
  }
  return cache[k];
}

mpq_class bernoulli_poly(unsigned k, const mpq_class& x) {
  // B_k(x) = sum_{j=0}^{k} C(k, j) B_j x^{k-j}
  mpq_class acc = 0, xp = 1;
  std::vector<mpq_class> xpow(k + 1);
  for (unsigned i = 0; i <= k; ++i) {
    xpow[i] = xp;
    xp *= x;
  }
  mpz_class binom;
  for (unsigned j = 0; j <= k; ++j) {
    mpz_bin_uiui(binom.get_mpz_t(), k, j);
    acc += mpq_class(binom) * bernoulli(j) * xpow[k - j];
  }
  return acc;
}

}  // namespace hmf
