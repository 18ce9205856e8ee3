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

#include "hmf/expsums.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hmf/intutil.hpp"

namespace hmf {

int epsilon_p(long x, unsigned long p) { return jacobi_symbol(x, p); }

int epsilon_p(const mpz_class& x, unsigned long p) {
  mpz_class r = x % static_cast<long>(p);
  return jacobi_symbol(r.get_si(), p);
}

// ---------------------------------------------------------------------------
// polynomial helpers over Z (coefficient vectors, constant term first)
// ---------------------------------------------------------------------------
namespace {

void poly_trim(std::vector<mpz_class>& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of f modulo the monic polynomial g.
std::vector<mpz_class> poly_rem(std::vector<mpz_class> f,
                                const std::vector<mpz_class>& g) {
  poly_trim(f);
  while (f.size() >= g.size()) {
    const mpz_class c = f.back();
    const std::size_t k = f.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) f[k + i] -= c * g[i];
    poly_trim(f);
  }
  return f;
}

}  // namespace

const std::vector<mpz_class>& cyclotomic_poly(unsigned long n) {
  static std::map<unsigned long, std::vector<mpz_class>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);

  // Iterative fill so the recursion below always finds its divisors.
  for (unsigned long k = 1; k <= n; ++k) {
    if (n % k != 0 || cache.count(k)) continue;
    // (X^k - 1) / prod_{d | k, d < k} Phi_d, by exact long division.
    std::vector<mpz_class> f(k + 1, 0);
    f[0] = -1;
    f[k] = 1;
    for (unsigned long d = 1; d < k; ++d) {
      if (k % d != 0) continue;
      const auto& phi_d = cache.at(d);
      // Divide f by monic phi_d exactly.
      std::vector<mpz_class> q(f.size() - phi_d.size() + 1, 0);
      std::vector<mpz_class> r = f;
      while (r.size() >= phi_d.size()) {
        const mpz_class c = r.back();
        const std::size_t sh = r.size() - phi_d.size();
        q[sh] = c;
        for (std::size_t i = 0; i < phi_d.size(); ++i) r[sh + i] -= c * phi_d[i];
        poly_trim(r);
        if (r.empty()) break;
      }
      f = q;
      poly_trim(f);
    }
    cache.emplace(k, std::move(f));
  }
  return cache.at(n);
}

// ---------------------------------------------------------------------------
// CycloInt
// ---------------------------------------------------------------------------

CycloInt::CycloInt(unsigned long c) : c_(c), v_(c, mpz_class(0)) {
  if (c == 0) throw std::invalid_argument("CycloInt: level must be positive");
}

void CycloInt::add(long j, long w) {
  const long c = static_cast<long>(c_);
  long r = j % c;
  if (r < 0) r += c;
  v_[static_cast<std::size_t>(r)] += w;
}

std::vector<mpz_class> CycloInt::reduced() const {
  return poly_rem(v_, cyclotomic_poly(c_));
}

bool CycloInt::is_zero() const { return reduced().empty(); }

bool CycloInt::is_rational() const { return reduced().size() <= 1; }

mpz_class CycloInt::rational() const {
  auto r = reduced();
  if (r.size() > 1)
    throw std::domain_error("CycloInt::rational: value is irrational");
  return r.empty() ? mpz_class(0) : r[0];
}

bool CycloInt::is_real() const {
  CycloInt conj(c_);
  for (unsigned long j = 0; j < c_; ++j) {
    const unsigned long jr = (c_ - j) % c_;
    conj.v_[jr] = v_[j];
  }
  return *this == conj;
}

CReal CycloInt::value(Prec prec) const {
  Real re = Real::zero(prec), im = Real::zero(prec);
  const Real two_pi = 2L * Real::pi(prec);
  for (unsigned long j = 0; j < c_; ++j) {
    if (v_[j] == 0) continue;
    const Real w = Real::of(v_[j], prec);
    Real s(prec.bits), c(prec.bits);
    sin_cos(s, c, two_pi * Real::of(static_cast<long>(j), prec) /
                      static_cast<long>(c_));
    re = re + w * c;
    im = im + w * s;
  }
  return CReal{re, im};
}

Real CycloInt::real_value(Prec prec) const {
  if (!is_real())
    throw std::domain_error("CycloInt::real_value: element is not real");
  return value(prec).re;
}

CycloInt operator-(const CycloInt& x, const CycloInt& y) {
  if (x.c_ != y.c_)
    throw std::invalid_argument("CycloInt: mismatched levels");
  CycloInt r(x.c_);
  for (unsigned long j = 0; j < x.c_; ++j) r.v_[j] = x.v_[j] - y.v_[j];
  return r;
}

bool operator==(const CycloInt& x, const CycloInt& y) {
  return (x - y).is_zero();
}

// ---------------------------------------------------------------------------
// Kloosterman sums
// ---------------------------------------------------------------------------

CycloInt kloosterman_sum(long m, long n, unsigned long c) {
  if (c == 0) throw std::invalid_argument("kloosterman_sum: c must be >= 1");
  const long cl = static_cast<long>(c);
  CycloInt z(c);
  const long mr = ((m % cl) + cl) % cl;
  const long nr = ((n % cl) + cl) % cl;
  for (long d = 1; d <= cl; ++d) {
    if (std::gcd(d, cl) != 1) continue;
    const long dbar =
        static_cast<long>(invmod_u64(static_cast<std::uint64_t>(d), c));
    z.add((nr * d - mr * dbar) % cl, 1);
  }
  return z;
}

mpq_class kloosterman(long m, long n, unsigned long c) {
  const mpz_class num = kloosterman_sum(m, n, c).rational();
  mpq_class q(num, mpz_class(static_cast<unsigned long>(c)));
  q.canonicalize();
  return q;
}

Real kloosterman_value(long m, long n, unsigned long c, Prec prec) {
  return kloosterman_sum(m, n, c).real_value(prec) / static_cast<long>(c);
}

mpz_class ramanujan_sum(long m, unsigned long c) {
  const unsigned long g =
      std::gcd(static_cast<unsigned long>(m < 0 ? -m : m), c);
  mpz_class total = 0;
  for (unsigned long d = 1; d <= g; ++d) {
    if (g % d != 0) continue;
    total += static_cast<long>(d) * moebius(c / d);
  }
  return total;
}

mpq_class divisor_sigma_exact(const mpz_class& m, long s) {
  if (m <= 0) throw std::invalid_argument("divisor_sigma_exact: m must be >= 1");
  if (s < 1 || s % 2 == 0)
    throw std::invalid_argument("divisor_sigma_exact: s must be odd and >= 1");
  mpz_class sum = sigma_k(m, static_cast<unsigned>(s));
  // m^{(1-s)/2} = m^{-(s-1)/2}
  mpz_class den;
  mpz_pow_ui(den.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>((s - 1) / 2));
  mpq_class q(sum, den);
  q.canonicalize();
  return q;
}

Real divisor_sigma(const mpz_class& m, const Real& s, Prec prec) {
  if (m <= 0) throw std::invalid_argument("divisor_sigma: m must be >= 1");
  Real sum = Real::zero(prec);
  for (const auto& d : divisors_mpz(m))
    sum = sum + pow(Real::of(d, prec), s);
  const Real half = Real::of(mpq_class(1, 2), prec);
  return pow(Real::of(m, prec), (Real::one(prec) - s) * half) * sum;
}

// ---------------------------------------------------------------------------
// Lattice vectors and genus characters
// ---------------------------------------------------------------------------

mpq_class LatticeVector::det() const {
  const long pl = static_cast<long>(p);
  // a b - pnorm/p
  mpq_class q(static_cast<long>(a) * b * pl - lam.pnorm(static_cast<int>(pl)), pl);
  q.canonicalize();
  return q;
}

bool LatticeVector::det_divisible_by_p() const {
  const mpq_class d = det();
  return d.get_den() == 1 && d.get_num() % static_cast<long>(p) == 0;
}

int genus_psi(const LatticeVector& M) {
  if (!M.det_divisible_by_p())
    throw std::domain_error("genus_psi: det(M) must be divisible by p");
  if (M.a % static_cast<long>(M.p) != 0) return epsilon_p(M.a, M.p);
  if (M.b % static_cast<long>(M.p) != 0) return epsilon_p(M.b, M.p);
  return 0;
}

BinaryForm to_binary_form(const LatticeVector& M) {
  if (M.lam.u % static_cast<long>(M.p) != 0)
    throw std::invalid_argument("to_binary_form: lambda is not integral");
  return BinaryForm{M.a, M.lam.v, M.b};
}

int chi_p(const BinaryForm& Q, unsigned long p, long search_bound) {
  const long pl = static_cast<long>(p);
  if (Q.a % pl == 0 && Q.c % pl == 0 && Q.b % pl == 0) return 0;
  for (long radius = 1; radius <= search_bound; ++radius) {
    for (long x = -radius; x <= radius; ++x) {
      for (long y = -radius; y <= radius; ++y) {
        if (std::max(std::abs(x), std::abs(y)) != radius) continue;
        const long n = Q.a * x * x + Q.c * x * y + Q.b * y * y;
        if (n != 0 && n % pl != 0) return epsilon_p(n, p);
      }
    }
  }
  throw std::runtime_error("chi_p: no represented value coprime to p found");
}

bool psi_equals_chi_check(const LatticeVector& M) {
  return genus_psi(M) == chi_p(to_binary_form(M), M.p);
}

LatticeVector translate_action(const LatticeVector& M, long x, long y) {
  // mu = x + y omega; M -> [[a, lambda + a mu'], [., b + a N(mu) + tr(lambda mu)]]
  const long p = static_cast<long>(M.p);
  const long nmu = x * x + x * y + y * y * (1 - p) / 4;
  const long tr_lam_mu = M.lam.v * x + (M.lam.u + M.lam.v) / 2 * y;
  LatticeVector r = M;
  r.lam.u = M.lam.u - M.a * p * y;
  r.lam.v = M.lam.v + M.a * (2 * x + y);
  r.b = M.b + M.a * nmu + tr_lam_mu;
  return r;
}

LatticeVector inversion_action(const LatticeVector& M) {
  // S = [[0,-1],[1,0]]: a <-> b, lambda -> -lambda'.
  LatticeVector r = M;
  r.a = M.b;
  r.b = M.a;
  r.lam = HilbertIndex{M.lam.u, -M.lam.v};
  return r;
}

// ---------------------------------------------------------------------------
// Twisted sums
// ---------------------------------------------------------------------------

CycloInt g_tilde_sum(unsigned long a, long m, const HilbertIndex& nu,
                     unsigned long p) {
  if (a == 0) throw std::invalid_argument("g_tilde_sum: a must be >= 1");
  if ((nu.u - nu.v) % 2 != 0)
    throw std::invalid_argument("g_tilde_sum: nu not in the inverse different");
  const long al = static_cast<long>(a);
  const long pl = static_cast<long>(p);
  const long k = (1 - pl) / 4;  // N(x + y omega) = x^2 + x y + k y^2
  const bool p_divides_a = (a % p == 0);
  const int eps_a = p_divides_a ? 0 : epsilon_p(al, p);
  CycloInt z(a);
  for (long x = 0; x < al; ++x) {
    for (long y = 0; y < al; ++y) {
      const long nrm = x * x + x * y + k * y * y;
      long res = (nrm + m * pl) % al;
      if (res < 0) res += al;
      if (res != 0) continue;
      const long tr = nu.v * x + (nu.u + nu.v) / 2 * y;
      const int w =
          p_divides_a ? epsilon_p((nrm + m * pl) / al, p) : eps_a;
      if (w != 0) z.add(tr, w);
    }
  }
  return z;
}

Real g_tilde(unsigned long a, long m, const HilbertIndex& nu, unsigned long p,
             Prec prec) {
  return g_tilde_sum(a, m, nu, p).real_value(prec);
}

std::vector<long> index_divisors(const HilbertIndex& nu, unsigned long a) {
  std::vector<long> out;
  const long al = static_cast<long>(a);
  if (nu.u == 0 && nu.v == 0) {
    for (long r = 1; r <= al; ++r)
      if (al % r == 0) out.push_back(r);
    return out;
  }
  const long g = std::gcd(std::gcd(std::abs(nu.u), std::abs(nu.v)), al);
  for (long r = 1; r <= g; ++r) {
    if (g % r != 0) continue;
    if ((nu.u / r - nu.v / r) % 2 != 0) continue;  // nu/r must stay in d_F^{-1}
    out.push_back(r);
  }
  return out;
}

bool verify_key_identity(unsigned long a, long m, const HilbertIndex& nu,
                         unsigned long p) {
  const CycloInt lhs = g_tilde_sum(a, m, nu, p);
  const long al = static_cast<long>(a);
  const long pnn = nu.pnorm(static_cast<int>(p));
  CycloInt rhs(a);
  for (long r : index_divisors(nu, a)) {
    const int e = epsilon_p(r, p);
    if (e == 0) continue;
    const long c = al / r;
    const long marg = (pnn / (r * r)) % c;  // first H argument, reduced mod c
    const long narg = m % c;
    for (long d = 1; d <= c; ++d) {
      if (std::gcd(d, c) != 1) continue;
      const long dbar = static_cast<long>(
          invmod_u64(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(c)));
      // e(j/c) = e(r j / a); the identity is Gtilde = sum_r eps(r) r (c H_c).
      const long j = ((narg * d - marg * dbar) % c + c) % c;
      rhs.add(r * j, e * r);
    }
  }
  return lhs == rhs;
}

}  // namespace hmf
