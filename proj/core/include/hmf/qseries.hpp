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

namespace hmf {

// Dense truncated Laurent series sum_{n=lo}^{hi} c[n-lo] q^n with exact
// rational coefficients.  All binary operations require matching truncation
// orders to keep error tracking trivial.
class QSeries {
 public:
  QSeries(long lo, long hi);
  static QSeries zero(long hi) { return QSeries(0, hi); }
  static QSeries one(long hi);
  static QSeries monomial(const mpq_class& c, long n, long hi);

  long lo() const { return lo_; }
  long hi() const { return hi_; }
  mpq_class coeff(long n) const;
  void set_coeff(long n, const mpq_class& v);

  QSeries truncated(long new_hi) const;

  friend QSeries operator+(const QSeries& a, const QSeries& b);
  friend QSeries operator-(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const mpq_class& c, const QSeries& a);
  QSeries inverse() const;  // lowest-order coefficient must be nonzero
  QSeries pow(long e) const;

 private:
  long lo_, hi_;
  std::vector<mpq_class> c_;
  void normalize();  // advance lo_ past leading zeros
};

// ---- classical level-one series (integer coefficients, through q^N) ----

// E_4 = 1 + 240 sum sigma_3(n) q^n
std::vector<mpz_class> eisenstein4_coeffs(long N);
// E_6 = 1 - 504 sum sigma_5(n) q^n
std::vector<mpz_class> eisenstein6_coeffs(long N);
// Delta = q prod (1-q^n)^24; entry [n] is the coefficient of q^{n+1}
std::vector<mpz_class> delta_coeffs(long N);
// j = E_4^3 / Delta; entry [n] is the coefficient of q^{n-1}
std::vector<mpz_class> j_coeffs(long N);

// Faber polynomial data: J_m = q^{-m} + O(q) is the unique monic degree-m
// integer polynomial in j with vanishing constant q-coefficient.
struct FaberData {
  long m = 1;
  std::vector<mpz_class> poly;       // J_m = sum poly[k] j^k, poly[m] = 1
  std::vector<mpz_class> expansion;  // entry [i] is the coefficient of q^{i-m}
  long hi = 0;                       // expansion runs through q^hi

  // Coefficient c_m(n) of q^n, for -m <= n <= hi.
  const mpz_class& coeff(long n) const;
};

FaberData faber(long m, long N);

}  // namespace hmf
