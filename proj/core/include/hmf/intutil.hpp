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

#include <cstdint>
#include <map>
#include <vector>

namespace hmf {

// ---- machine-word modular arithmetic (moduli < 2^62) ------------------

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    e >>= 1;
  }
  return r;
}

// Inverse of a mod m for gcd(a, m) = 1 (extended Euclid).
std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t m);

bool is_prime_u64(std::uint64_t n);

// Square root of a mod odd prime q (Tonelli–Shanks); requires (a|q) = 1.
std::uint64_t sqrtmod_prime_u64(std::uint64_t a, std::uint64_t q);

// Legendre/Jacobi symbol (a|n) for odd n > 0.
int jacobi_symbol(long a, unsigned long n);

// ---- arbitrary-precision factorization --------------------------------

// Prime factorization of |n| (n != 0) by trial division plus Pollard rho.
// Keys are primes in increasing order, values are exponents.
std::map<mpz_class, int> factor_mpz(const mpz_class& n);

// Divisors of |n| in increasing order.
std::vector<mpz_class> divisors_mpz(const mpz_class& n);

// sum over d | n of d^k (positive divisors of |n|, n != 0).
mpz_class sigma_k(const mpz_class& n, unsigned k);

// Moebius function of n >= 1.
int moebius(unsigned long n);

// Euler phi of n >= 1.
unsigned long euler_phi(unsigned long n);

// ---- exact Bernoulli machinery ----------------------------------------

// Bernoulli number B_k (B_1 = -1/2 convention) as an exact rational.
mpq_class bernoulli(unsigned k);

// Bernoulli polynomial B_k(x) evaluated exactly at rational x.
mpq_class bernoulli_poly(unsigned k, const mpq_class& x);

}  // namespace hmf
