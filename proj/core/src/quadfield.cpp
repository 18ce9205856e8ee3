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

#include "hmf/quadfield.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "hmf/intutil.hpp"

namespace hmf {

QuadElem::QuadElem(mpq_class x, mpq_class y, int p) : x_(std::move(x)), y_(std::move(y)), p_(p) {
  if (p != 5 && p != 13 && p != 17)
    throw std::invalid_argument("QuadElem: p must be one of 5, 13, 17");
  x_.canonicalize();
  y_.canonicalize();
}

QuadElem QuadElem::from_ab(const mpq_class& a, const mpq_class& b, int p) {
  return QuadElem(a + b / 2, b / 2, p);
}

QuadElem QuadElem::fundamental_unit(int p) {
  switch (p) {
    case 5:
      return omega(5);
    case 13:
      return QuadElem(mpq_class(3, 2), mpq_class(1, 2), 13);
    case 17:
      return QuadElem(4, 1, 17);
    default:
      throw std::invalid_argument("fundamental_unit: unsupported p");
  }
}

void QuadElem::check_same_field(const QuadElem& a, const QuadElem& b) {
  if (a.p_ != b.p_) throw std::invalid_argument("QuadElem: mixed fields");
}

QuadElem QuadElem::inverse() const {
  mpq_class n = norm();
  if (n == 0) throw std::invalid_argument("QuadElem::inverse: element is zero or degenerate");
  return QuadElem(x_ / n, -y_ / n, p_);
}

bool QuadElem::is_integral() const {
  auto [a, b] = ab();
  return a.get_den() == 1 && b.get_den() == 1;
}

bool QuadElem::is_in_inv_different() const {
  // nu in (sqrt p)^{-1} O_F  <=>  nu * sqrt(p) integral.
  return (*this * sqrt_p(p_)).is_integral();
}

bool QuadElem::is_unit() const {
  if (!is_integral()) return false;
  mpq_class n = norm();
  return n == 1 || n == -1;
}

int QuadElem::sign_first() const {
  // sign of x + y*sqrt(p) without rounding: if x and y agree in sign the
  // answer is immediate, otherwise compare x^2 against p y^2.
  int sx = sgn(x_), sy = sgn(y_);
  if (sy == 0) return sx;
  if (sx == 0) return sy;
  if (sx == sy) return sx;
  int c = cmp(x_ * x_, p_ * y_ * y_);
  return c == 0 ? 0 : (c > 0 ? sx : sy);
}

int QuadElem::sign_second() const { return conj().sign_first(); }

Real QuadElem::embed_first(Prec prec) const {
  Real sp = sqrt(Real::of(mpz_class(p_), prec));
  return Real::of(x_, prec) + Real::of(y_, prec) * sp;
}

Real QuadElem::embed_second(Prec prec) const {
  Real sp = sqrt(Real::of(mpz_class(p_), prec));
  return Real::of(x_, prec) - Real::of(y_, prec) * sp;
}

QuadElem operator+(const QuadElem& a, const QuadElem& b) {
  QuadElem::check_same_field(a, b);
  return QuadElem(a.x_ + b.x_, a.y_ + b.y_, a.p_);
}

QuadElem operator-(const QuadElem& a, const QuadElem& b) {
  QuadElem::check_same_field(a, b);
  return QuadElem(a.x_ - b.x_, a.y_ - b.y_, a.p_);
}

QuadElem operator*(const QuadElem& a, const QuadElem& b) {
  QuadElem::check_same_field(a, b);
  return QuadElem(a.x_ * b.x_ + a.p_ * a.y_ * b.y_, a.x_ * b.y_ + a.y_ * b.x_, a.p_);
}

QuadElem operator/(const QuadElem& a, const QuadElem& b) {
  QuadElem::check_same_field(a, b);
  return a * b.inverse();
}

QuadElem QuadElem::pow(long e) const {
  QuadElem base = e < 0 ? inverse() : *this;
  unsigned long k = e < 0 ? -static_cast<unsigned long>(e) : static_cast<unsigned long>(e);
  QuadElem acc = integer(1, p_);
  while (k) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

std::string QuadElem::str() const {
  std::ostringstream os;
  os << x_.get_str();
  if (y_ != 0) {
    os << (y_ > 0 ? " + " : " - ");
    mpq_class ay = abs(y_);
    if (ay != 1) os << ay.get_str() << "*";
    os << "sqrt(" << p_ << ")";
  }
  return os.str();
}

namespace {

// Round a rational to the nearest integer (ties toward -infinity), exact.
mpz_class round_nearest(const mpq_class& q) {
  mpz_class fl, num = q.get_num(), den = q.get_den();
  mpz_fdiv_q(fl.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  mpq_class frac = q - mpq_class(fl);
  return frac * 2 >= 1 ? fl + 1 : fl;
}

}  // namespace

QuadElem canonical_associate(QuadElem a) {
  if (a.is_zero()) return a;
  if (!a.is_integral()) throw std::invalid_argument("canonical_associate: element not integral");
  const QuadElem u1 = QuadElem::fundamental_unit(a.p());
  const QuadElem u1_inv = u1.inverse();
  // |first/second embedding| >= 1  <=>  x*y >= 0 (compare the squares of the
  // embeddings: (x + y s)^2 - (x - y s)^2 = 4 x y s with s = sqrt(p) > 0).
  auto ratio_ge_one = [](const QuadElem& e) { return sgn(e.x()) * sgn(e.y()) >= 0; };
  while (!ratio_ge_one(a)) a = a * u1;
  for (;;) {
    QuadElem b = a * u1_inv;
    if (!ratio_ge_one(b)) break;
    a = b;
  }
  int s = sgn(a.trace());
  if (s < 0 || (s == 0 && a.y() < 0)) a = -a;
  return a;
}

QuadElem quad_gcd(QuadElem a, QuadElem b) {
  if (!a.is_integral() || !b.is_integral())
    throw std::invalid_argument("quad_gcd: arguments must be integral");
  // Norm-Euclidean division: round the quotient to the nearest lattice point
  // in the (1, omega) basis; the remainder norm strictly decreases.
  while (!b.is_zero()) {
    QuadElem q = a / b;
    auto [qa, qb] = q.ab();
    QuadElem qr = QuadElem::from_ab(mpq_class(round_nearest(qa)), mpq_class(round_nearest(qb)), a.p());
    QuadElem r = a - qr * b;
    if (abs(r.norm()) >= abs(b.norm()))
      throw std::logic_error("quad_gcd: Euclidean division failed to reduce");
    a = b;
    b = r;
  }
  return canonical_associate(a);
}

namespace {

// Exact exponent of the prime element pi in a (a integral, pi prime).
int valuation(QuadElem& a, const QuadElem& pi) {
  int v = 0;
  for (;;) {
    QuadElem q = a / pi;
    if (!q.is_integral()) return v;
    a = q;
    ++v;
  }
}

}  // namespace

QuadFactorization factor_element(const QuadElem& a) {
  if (!a.is_integral() || a.is_zero())
    throw std::invalid_argument("factor_element: need a nonzero integral element");
  const int p = a.p();
  mpz_class n(a.norm());
  QuadFactorization out;
  QuadElem rest = a;

  auto record = [&](const QuadElem& prime_raw) {
    QuadElem prime = canonical_associate(prime_raw);
    int e = valuation(rest, prime);
    if (e > 0) out.factors.push_back({prime, e, abs(mpz_class(prime.norm()))});
    return e;
  };

  for (const auto& [q, eN] : factor_mpz(n)) {
    (void)eN;
    unsigned long qu = q.get_ui();
    if (q == p) {
      record(QuadElem::sqrt_p(p));
      continue;
    }
    // 2 splits iff p = 1 (mod 8); odd q by the quadratic residue criterion.
    int chi = (qu == 2) ? ((p % 8 == 1) ? 1 : -1) : jacobi_symbol(static_cast<long>(p % qu), qu);
    if (chi == -1) {
      record(QuadElem::integer(static_cast<long>(qu), p));
      continue;
    }
    // q splits: find the prime above it as gcd(q, r - sqrt(p)) where
    // r^2 = p (mod q); its conjugate covers the other prime above q.
    QuadElem pi;
    if (qu == 2) {
      // p = 17 only: gcd(2, omega) with omega a root of x^2 - x - 4 mod 2.
      pi = quad_gcd(QuadElem::integer(2, p), QuadElem::omega(p));
    } else {
      std::uint64_t r = sqrtmod_prime_u64(static_cast<std::uint64_t>(p), qu);
      pi = quad_gcd(QuadElem::integer(static_cast<long>(qu), p),
                    QuadElem(mpq_class(static_cast<long>(r)), -1, p));
    }
    if (abs(mpq_class(pi.norm())) == 1 || pi.is_rational())
      throw std::logic_error("factor_element: split prime computation failed");
    record(pi);
    record(pi.conj());
  }

  if (!rest.is_unit()) throw std::logic_error("factor_element: nonunit cofactor left over");
  out.unit = rest;
  std::sort(out.factors.begin(), out.factors.end(), [](const QuadPrimePower& l, const QuadPrimePower& r) {
    if (l.residue_norm != r.residue_norm) return l.residue_norm < r.residue_norm;
    auto [la, lb] = l.prime.ab();
    auto [ra, rb] = r.prime.ab();
    return lb < rb || (lb == rb && la < ra);
  });
  return out;
}

mpz_class ideal_sigma(const QuadElem& a, unsigned k) {
  QuadFactorization f = factor_element(a);
  mpz_class acc = 1;
  for (const auto& pp : f.factors) {
    // sum_{j=0..e} N(prime)^{j k}
    mpz_class Nk, term = 1, sum = 1;
    mpz_pow_ui(Nk.get_mpz_t(), pp.residue_norm.get_mpz_t(), k);
    for (int j = 1; j <= pp.exponent; ++j) {
      term *= Nk;
      sum += term;
    }
    acc *= sum;
  }
  return acc;
}

std::vector<HilbertIndex> totally_positive_indices(int p, long tmax) {
  if (p != 5 && p != 13 && p != 17) throw std::invalid_argument("totally_positive_indices: bad p");
  std::vector<HilbertIndex> out;
  for (long v = 1; v <= tmax; ++v) {
    // u^2 < p v^2 and u = v (mod 2) (p odd), both signs of u.
    long umax = 0;
    while ((umax + 1) * (umax + 1) < p * v * v) ++umax;
    long ustart = -umax;
    if (((ustart - v) & 1) != 0) ++ustart;
    for (long u = ustart; u <= umax; u += 2) out.push_back({u, v});
  }
  return out;
}

}  // namespace hmf
