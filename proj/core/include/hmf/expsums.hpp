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

#pragma once

#include <gmpxx.h>

#include <vector>

#include "hmf/quadfield.hpp"
#include "hmf/real.hpp"

namespace hmf {

// Legendre symbol (x/p) for an odd prime p.
int epsilon_p(long x, unsigned long p);
int epsilon_p(const mpz_class& x, unsigned long p);

// ---------------------------------------------------------------------------
// Exact arithmetic in Z[e(1/c)]: an integer coefficient vector of the powers
// e(j/c), canonicalized by reduction modulo the cyclotomic polynomial Phi_c.
// This keeps every finite exponential sum exact; rationality is detected
// (reduced degree 0), never assumed.
// ---------------------------------------------------------------------------
class CycloInt {
 public:
  explicit CycloInt(unsigned long c);

  unsigned long level() const { return c_; }

  // += w * e(j/c); j may be any integer (reduced mod c).
  void add(long j, long w);

  // Canonical representative modulo Phi_c (degree < phi(c)); empty means 0.
  std::vector<mpz_class> reduced() const;

  bool is_zero() const;
  bool is_rational() const;
  // Exact integer value; throws std::domain_error when the element is
  // irrational.
  mpz_class rational() const;
  // True when the element is fixed by complex conjugation e(j/c) -> e(-j/c).
  bool is_real() const;

  // Numeric value at the given precision (real and imaginary part).
  CReal value(Prec prec) const;
  // Numeric value of a provably real element; throws std::domain_error if the
  // element is not real.
  Real real_value(Prec prec) const;

  friend CycloInt operator-(const CycloInt& x, const CycloInt& y);
  friend bool operator==(const CycloInt& x, const CycloInt& y);

 private:
  unsigned long c_;
  std::vector<mpz_class> v_;  // coefficient of e(j/c), size c
};

// Phi_n as an integer coefficient vector (constant term first); cached.
const std::vector<mpz_class>& cyclotomic_poly(unsigned long n);

// ---------------------------------------------------------------------------
// Kloosterman sums  H_c(m,n) = (1/c) sum_{d mod c, (d,c)=1} e((n d - m dbar)/c)
// ---------------------------------------------------------------------------

// c * H_c(m,n) as an exact cyclotomic integer.
CycloInt kloosterman_sum(long m, long n, unsigned long c);

// Exact rational value of H_c(m,n); throws std::domain_error when the sum is
// irrational (it then lives in a real cyclotomic field of larger degree).
mpq_class kloosterman(long m, long n, unsigned long c);

// Numeric value of H_c(m,n) at the given precision (always defined).
Real kloosterman_value(long m, long n, unsigned long c, Prec prec);

// Moebius formula for the Ramanujan sum c * H_c(m,0):
//   sum_{d | gcd(c,m)} mu(c/d) d    (gcd(c,0) = c).
mpz_class ramanujan_sum(long m, unsigned long c);

// sigma_m(s) = m^{(1-s)/2} sum_{d|m} d^s; exact for odd integer s >= 1.
mpq_class divisor_sigma_exact(const mpz_class& m, long s);
Real divisor_sigma(const mpz_class& m, const Real& s, Prec prec);

// ---------------------------------------------------------------------------
// Lattice vectors M = [[a, lambda], [lambda', b]] with a, b integers and
// lambda in the inverse different, and the genus character psi.
// ---------------------------------------------------------------------------
struct LatticeVector {
  long a = 0;
  long b = 0;
  HilbertIndex lam{0, 0};  // lambda = (u + v sqrt(p)) / (2 sqrt(p))
  unsigned long p = 5;

  // det M = a b - lambda lambda', an element of (1/p) Z.
  mpq_class det() const;
  bool det_divisible_by_p() const;
};

// psi(M): (a/p) if p !| a, else (b/p) if p !| b, else 0.
// Requires det(M) divisible by p; throws std::domain_error otherwise.
int genus_psi(const LatticeVector& M);

// Binary quadratic form Q = [a, c, b] <-> a x^2 + c x y + b y^2.
struct BinaryForm {
  long a = 0;
  long c = 0;
  long b = 0;
  long disc() const { return c * c - 4 * a * b; }
};

// The form associated to M (lambda = (c + d sqrt(p))/2 integral, Q=[a,tr,b]);
// throws std::invalid_argument when lambda is not integral.
BinaryForm to_binary_form(const LatticeVector& M);

// Genus character chi_p(Q): (n/p) for the first represented n coprime to p
// (searched over |x|,|y| <= bound); 0 when p divides all coefficients.
// Throws std::runtime_error when no coprime value is found within the bound.
int chi_p(const BinaryForm& Q, unsigned long p, long search_bound = 60);

// genus_psi(M) == chi_p(Q_M) for the associated form.
bool psi_equals_chi_check(const LatticeVector& M);

// Group action M -> g^t M g' used by the orbit tests:
//   translation by mu = x + y omega in O_F, and the inversion [[0,-1],[1,0]].
LatticeVector translate_action(const LatticeVector& M, long x, long y);
LatticeVector inversion_action(const LatticeVector& M);

// ---------------------------------------------------------------------------
// Twisted sums  Gtilde_a(m p^2, nu)  over R = {lam in O_F/a O_F :
// N(lam) == -m p (mod a)}:
//   p !| a :  eps_p(a) sum_{lam in R} e(tr(nu lam)/a)
//   p  | a :  sum_{lam in R} eps_p((lam lam' + m p)/a) e(tr(nu lam)/a)
// ---------------------------------------------------------------------------
CycloInt g_tilde_sum(unsigned long a, long m, const HilbertIndex& nu,
                     unsigned long p);
Real g_tilde(unsigned long a, long m, const HilbertIndex& nu, unsigned long p,
             Prec prec);

// The r >= 1 with r | a and nu/r still in the inverse different
// (r | u, r | v, and u/r == v/r mod 2); for nu = 0 all divisors of a.
std::vector<long> index_divisors(const HilbertIndex& nu, unsigned long a);

// Exact check of
//   (1/a) Gtilde_a(m p^2, nu) = sum_{r|nu, r|a} eps_p(r) H_{a/r}(p nu nu'/r^2, m)
// carried out in Z[e(1/a)] modulo Phi_a (no floating point, no rounding).
bool verify_key_identity(unsigned long a, long m, const HilbertIndex& nu,
                         unsigned long p);

}  // namespace hmf
