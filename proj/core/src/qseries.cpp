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

#include "hmf/qseries.hpp"

#include <stdexcept>

#include "hmf/intutil.hpp"

namespace hmf {

QSeries::QSeries(long lo, long hi) : lo_(lo), hi_(hi) {
  if (hi < lo) throw std::invalid_argument("QSeries: hi < lo");
  c_.assign(static_cast<std::size_t>(hi - lo + 1), mpq_class(0));
}

QSeries QSeries::one(long hi) { return monomial(1, 0, hi); }

QSeries QSeries::monomial(const mpq_class& c, long n, long hi) {
  QSeries s(n, hi);
  s.c_[0] = c;
  return s;
}

mpq_class QSeries::coeff(long n) const {
  if (n < lo_ || n > hi_) return 0;
  return c_[static_cast<std::size_t>(n - lo_)];
}

void QSeries::set_coeff(long n, const mpq_class& v) {
  if (n > hi_) throw std::out_of_range("QSeries::set_coeff: beyond truncation order");
  if (n < lo_) {
    c_.insert(c_.begin(), static_cast<std::size_t>(lo_ - n), mpq_class(0));
    lo_ = n;
  }
  c_[static_cast<std::size_t>(n - lo_)] = v;
}

QSeries QSeries::truncated(long new_hi) const {
  if (new_hi > hi_) throw std::invalid_argument("QSeries::truncated: cannot extend");
  QSeries out(lo_ <= new_hi ? lo_ : new_hi, new_hi);
  for (long n = out.lo_; n <= new_hi; ++n) out.set_coeff(n, coeff(n));
  out.normalize();
  return out;
}

void QSeries::normalize() {
  while (c_.size() > 1 && c_.front() == 0) {
    c_.erase(c_.begin());
    ++lo_;
  }
}

QSeries operator+(const QSeries& a, const QSeries& b) {
  if (a.hi_ != b.hi_) throw std::invalid_argument("QSeries: mismatched truncation orders");
  QSeries out(std::min(a.lo_, b.lo_), a.hi_);
  for (long n = out.lo_; n <= out.hi_; ++n) out.set_coeff(n, a.coeff(n) + b.coeff(n));
  out.normalize();
  return out;
}

QSeries operator-(const QSeries& a, const QSeries& b) {
  if (a.hi_ != b.hi_) throw std::invalid_argument("QSeries: mismatched truncation orders");
  QSeries out(std::min(a.lo_, b.lo_), a.hi_);
  for (long n = out.lo_; n <= out.hi_; ++n) out.set_coeff(n, a.coeff(n) - b.coeff(n));
  out.normalize();
  return out;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
  if (a.hi_ != b.hi_) throw std::invalid_argument("QSeries: mismatched truncation orders");
  QSeries out(a.lo_ + b.lo_, a.hi_);
  if (out.lo_ > out.hi_) throw std::invalid_argument("QSeries: product entirely beyond truncation");
  for (long i = a.lo_; i <= a.hi_ && i + b.lo_ <= a.hi_; ++i) {
    const mpq_class& ai = a.c_[static_cast<std::size_t>(i - a.lo_)];
    if (ai == 0) continue;
    for (long j = b.lo_; j <= b.hi_ && i + j <= a.hi_; ++j) {
      const mpq_class& bj = b.c_[static_cast<std::size_t>(j - b.lo_)];
      if (bj == 0) continue;
      out.c_[static_cast<std::size_t>(i + j - out.lo_)] += ai * bj;
    }
  }
  out.normalize();
  return out;
}

QSeries operator*(const mpq_class& c, const QSeries& a) {
  QSeries out = a;
  for (auto& v : out.c_) v *= c;
  out.normalize();
  return out;
}

QSeries QSeries::inverse() const {
  if (c_.empty() || c_[0] == 0)
    throw std::invalid_argument("QSeries::inverse: lowest coefficient is zero");
  // (q^lo * u)^{-1} = q^{-lo} u^{-1}; standard power-series inversion of u.
  long n_terms = hi_ - lo_ + 1;
  QSeries out(-lo_, hi_);
  std::vector<mpq_class> inv(static_cast<std::size_t>(n_terms));
  inv[0] = 1 / c_[0];
  for (long m = 1; m < n_terms; ++m) {
    mpq_class acc = 0;
    for (long k = 1; k <= m && static_cast<std::size_t>(k) < c_.size(); ++k)
      acc += c_[static_cast<std::size_t>(k)] * inv[static_cast<std::size_t>(m - k)];
    inv[static_cast<std::size_t>(m)] = -acc / c_[0];
  }
  long count = std::min<long>(n_terms, hi_ - out.lo_ + 1);
  for (long i = 0; i < count; ++i) out.c_[static_cast<std::size_t>(i)] = inv[static_cast<std::size_t>(i)];
  out.normalize();
  return out;
}

QSeries QSeries::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  QSeries acc = QSeries::one(hi_);
  QSeries base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    if (e >>= 1) base = base * base;
  }
  return acc;
}

// ---- classical series over mpz ------------------------------------------

std::vector<mpz_class> eisenstein4_coeffs(long N) {
  std::vector<mpz_class> e(static_cast<std::size_t>(N + 1));
  e[0] = 1;
  for (long n = 1; n <= N; ++n) e[static_cast<std::size_t>(n)] = 240 * sigma_k(n, 3);
  return e;
}

std::vector<mpz_class> eisenstein6_coeffs(long N) {
  std::vector<mpz_class> e(static_cast<std::size_t>(N + 1));
  e[0] = 1;
  for (long n = 1; n <= N; ++n) e[static_cast<std::size_t>(n)] = -504 * sigma_k(n, 5);
  return e;
}

namespace {

// prod_{n>=1} (1 - q^n)^24 through q^N, via 24 sparse pentagonal passes.
std::vector<mpz_class> eta24(long N) {
  std::vector<mpz_class> p(static_cast<std::size_t>(N + 1));
  p[0] = 1;
  for (long n = 1; n <= N; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (long i = N; i >= n; --i) p[static_cast<std::size_t>(i)] -= p[static_cast<std::size_t>(i - n)];
  return p;
}

std::vector<mpz_class> mul_trunc(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                 long N) {
  std::vector<mpz_class> out(static_cast<std::size_t>(N + 1));
  for (long i = 0; i <= N && i < static_cast<long>(a.size()); ++i) {
    if (a[static_cast<std::size_t>(i)] == 0) continue;
    long jmax = std::min<long>(N - i, static_cast<long>(b.size()) - 1);
    for (long j = 0; j <= jmax; ++j)
      out[static_cast<std::size_t>(i + j)] +=
          a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
  }
  return out;
}

std::vector<mpz_class> inv_unit(const std::vector<mpz_class>& a, long N) {
  // a[0] must be +-1 so the inverse stays integral.
  std::vector<mpz_class> out(static_cast<std::size_t>(N + 1));
  out[0] = a[0];
  for (long m = 1; m <= N; ++m) {
    mpz_class acc = 0;
    for (long k = 1; k <= m && k < static_cast<long>(a.size()); ++k)
      acc += a[static_cast<std::size_t>(k)] * out[static_cast<std::size_t>(m - k)];
    out[static_cast<std::size_t>(m)] = -a[0] * acc;
  }
  return out;
}

}  // namespace

std::vector<mpz_class> delta_coeffs(long N) { return eta24(N); }

std::vector<mpz_class> j_coeffs(long N) {
  // j*q = E4^3 / (Delta/q); entry [n] is the q^n coefficient of j*q.
  auto e4 = eisenstein4_coeffs(N + 1);
  auto e43 = mul_trunc(mul_trunc(e4, e4, N + 1), e4, N + 1);
  auto dinv = inv_unit(eta24(N + 1), N + 1);
  return mul_trunc(e43, dinv, N + 1);
}

const mpz_class& FaberData::coeff(long n) const {
  if (n < -m || n > hi) throw std::out_of_range("FaberData::coeff: index outside expansion");
  return expansion[static_cast<std::size_t>(n + m)];
}

FaberData faber(long m, long N) {
  if (m < 1) throw std::invalid_argument("faber: m must be positive");
  // Laurent coefficients of j^k from q^{-k}.  Since multiplying by j can move
  // weight down one exponent (j starts at q^{-1}), j^k must be kept through
  // q^{N+(m-k)} so that j^m comes out exact through q^N.
  auto j = j_coeffs(N + m);  // [i] = coeff of q^{i-1}, through q^{N+m}
  std::vector<std::vector<mpz_class>> jpow(static_cast<std::size_t>(m + 1));
  jpow[0] = {1};
  for (long k = 1; k <= m; ++k) {
    // indices 0..N+m of cur hold the exponents -k .. N+m-k
    const auto& prev = jpow[static_cast<std::size_t>(k - 1)];
    std::vector<mpz_class> cur(static_cast<std::size_t>(N + m + 1));
    for (long i = 0; i < static_cast<long>(prev.size()); ++i) {
      if (prev[static_cast<std::size_t>(i)] == 0) continue;
      long jmax = std::min<long>(N + m - i, static_cast<long>(j.size()) - 1);
      for (long t = 0; t <= jmax; ++t)
        cur[static_cast<std::size_t>(i + t)] +=
            prev[static_cast<std::size_t>(i)] * j[static_cast<std::size_t>(t)];
    }
    jpow[static_cast<std::size_t>(k)] = std::move(cur);
  }

  FaberData out;
  out.m = m;
  out.hi = N;
  out.poly.assign(static_cast<std::size_t>(m + 1), mpz_class(0));
  out.poly[static_cast<std::size_t>(m)] = 1;
  std::vector<mpz_class> cur = jpow[static_cast<std::size_t>(m)];  // from q^{-m}
  // Kill the coefficients of q^{-k} for k = m-1 .. 1, then the constant term.
  for (long k = m - 1; k >= 0; --k) {
    mpz_class a = -cur[static_cast<std::size_t>(m - k)];
    out.poly[static_cast<std::size_t>(k)] = a;
    if (a == 0) continue;
    const auto& pk = jpow[static_cast<std::size_t>(k)];  // from q^{-k}
    for (long i = 0; i < static_cast<long>(pk.size()); ++i) {
      long idx = (i - k) + m;  // exponent i-k relative to q^{-m}
      if (idx >= 0 && idx < static_cast<long>(cur.size()))
        cur[static_cast<std::size_t>(idx)] += a * pk[static_cast<std::size_t>(i)];
    }
  }
  out.expansion = std::move(cur);
  return out;
}

}  // namespace hmf
