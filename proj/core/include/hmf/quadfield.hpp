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

#include <string>
#include <utility>
#include <vector>

#include "hmf/real.hpp"

namespace hmf {

// Exact element x + y*sqrt(p) of the real quadratic field F = Q(sqrt(p)),
// p in {5, 13, 17} (prime, p = 1 mod 4).  The ring of integers is
// Z[omega] with omega = (1 + sqrt(p))/2, and the different is (sqrt(p)).
class QuadElem {
 public:
  QuadElem() : x_(0), y_(0), p_(5) {}
  QuadElem(mpq_class x, mpq_class y, int p);

  // a + b*omega with a, b integers (or rationals).
  static QuadElem from_ab(const mpq_class& a, const mpq_class& b, int p);
  static QuadElem integer(long n, int p) { return QuadElem(mpq_class(n), 0, p); }
  static QuadElem omega(int p) { return QuadElem(mpq_class(1, 2), mpq_class(1, 2), p); }
  static QuadElem sqrt_p(int p) { return QuadElem(0, 1, p); }
  // Fundamental unit (norm -1 for p = 5, 13, 17): omega, (3+sqrt13)/2, 4+sqrt17.
  static QuadElem fundamental_unit(int p);

  const mpq_class& x() const { return x_; }
  const mpq_class& y() const { return y_; }
  int p() const { return p_; }

  // Coordinates (a, b) with *this = a + b*omega; a = x - y, b = 2y.
  std::pair<mpq_class, mpq_class> ab() const { return {x_ - y_, 2 * y_}; }

  QuadElem conj() const { return QuadElem(x_, -y_, p_); }  // sqrt(p) -> -sqrt(p)
  mpq_class norm() const { return x_ * x_ - p_ * y_ * y_; }
  mpq_class trace() const { return 2 * x_; }
  QuadElem inverse() const;

  bool is_zero() const { return x_ == 0 && y_ == 0; }
  bool is_rational() const { return y_ == 0; }
  // Membership in O_F = Z[omega]: both a and b integral.
  bool is_integral() const;
  // Membership in the inverse different (sqrt(p))^{-1} = O_F / sqrt(p).
  bool is_in_inv_different() const;
  bool is_unit() const;
  int sign_first() const;   // sign under sqrt(p) -> +sqrt(p)
  int sign_second() const;  // sign under sqrt(p) -> -sqrt(p)
  bool is_totally_positive() const { return sign_first() > 0 && sign_second() > 0; }

  // Real embeddings: first sends sqrt(p) to +sqrt(p), second to -sqrt(p).
  Real embed_first(Prec prec) const;
  Real embed_second(Prec prec) const;

  friend QuadElem operator+(const QuadElem& a, const QuadElem& b);
  friend QuadElem operator-(const QuadElem& a, const QuadElem& b);
  friend QuadElem operator-(const QuadElem& a) { return QuadElem(-a.x_, -a.y_, a.p_); }
  friend QuadElem operator*(const QuadElem& a, const QuadElem& b);
  friend QuadElem operator/(const QuadElem& a, const QuadElem& b);
  friend QuadElem operator*(const mpq_class& c, const QuadElem& a) {
    return QuadElem(c * a.x_, c * a.y_, a.p_);
  }
  friend bool operator==(const QuadElem& a, const QuadElem& b) {
    return a.p_ == b.p_ && a.x_ == b.x_ && a.y_ == b.y_;
  }
  friend bool operator!=(const QuadElem& a, const QuadElem& b) { return !(a == b); }

  QuadElem pow(long e) const;

  std::string str() const;

 private:
  mpq_class x_, y_;
  int p_;
  static void check_same_field(const QuadElem& a, const QuadElem& b);
};

// Greatest common divisor in O_F via the norm-Euclidean algorithm
// (p = 5, 13, 17 are all norm-Euclidean).  Result is defined up to units;
// it is returned in canonical associate form.
QuadElem quad_gcd(QuadElem a, QuadElem b);

// Canonical representative of the associate class of a nonzero integral
// element: scaled by units so that |first embedding / second embedding|
// lies in [1, u1^2) for the fundamental unit u1, with positive trace
// (y > 0 when the trace vanishes).
QuadElem canonical_associate(QuadElem a);

struct QuadPrimePower {
  QuadElem prime;  // canonical associate
  int exponent;
  mpz_class residue_norm;  // |N(prime)| = size of O_F / (prime)
};

struct QuadFactorization {
  QuadElem unit;  // the input equals unit * prod(prime^exponent)
  std::vector<QuadPrimePower> factors;
};

// Prime factorization of a nonzero integral element (O_F is a PID for
// p = 5, 13, 17).  Factors are sorted by residue norm, split conjugates
// ordered deterministically via the canonical associate form.
QuadFactorization factor_element(const QuadElem& a);

// sum over integral ideals b | (a) of N(b)^k, for nonzero integral a.
mpz_class ideal_sigma(const QuadElem& a, unsigned k);

// Index for Fourier expansions on the Hilbert modular surface: the element
// nu = (u + v*sqrt(p)) / (2*sqrt(p)) of the inverse different, stored by the
// integer pair (u, v) with u = v * p (mod 2).  trace(nu) = v and
// p * nu * nu' = (p*v^2 - u^2)/4.
struct HilbertIndex {
  long u = 0;
  long v = 0;

  long trace() const { return v; }
  // p * N(nu) = (p v^2 - u^2)/4, an integer.
  long pnorm(int p) const { return (p * v * v - u * u) / 4; }
  bool is_totally_positive(int p) const { return v >= 1 && u * u < p * v * v; }
  QuadElem as_quadelem(int p) const {
    // (u + v sqrt(p)) / (2 sqrt(p)) = v/2 + (u/(2p)) sqrt(p)
    return QuadElem(mpq_class(v, 2), mpq_class(u, 2 * p), p);
  }
  friend bool operator==(const HilbertIndex& a, const HilbertIndex& b) {
    return a.u == b.u && a.v == b.v;
  }
};

// All totally positive nu in the inverse different with trace(nu) <= tmax,
// ordered by (trace, u).
std::vector<HilbertIndex> totally_positive_indices(int p, long tmax);

}  // namespace hmf
