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
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace hmf {

// Thrown when a computation cannot certify the accuracy it was asked for
// (e.g. a truncation bound stays above tolerance at the configured limit).
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Working precision for numeric routines.  `bits` is the mantissa size of
// every intermediate MPFR value; `digits` converts a decimal request.
struct Prec {
  mpfr_prec_t bits = 128;

  static Prec from_bits(mpfr_prec_t b) { return Prec{b < MPFR_PREC_MIN ? MPFR_PREC_MIN : b}; }
  // ceil(d * log2(10)) plus a small guard, so `d` decimal digits round-trip.
  static Prec from_digits(long d) {
    return from_bits(static_cast<mpfr_prec_t>(d * 3.3219280948873623 + 16));
  }
  Prec plus(mpfr_prec_t extra) const { return from_bits(bits + extra); }
};

// Thin RAII wrapper around mpfr_t with value semantics.
//
// Precision model: every Real carries its own precision; binary operations
// allocate their result at the larger of the two operand precisions and
// round to nearest.  Routines that need guard bits widen explicitly.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = 128) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    v_[0] = o.v_[0];
    mpfr_init2(o.v_, MPFR_PREC_MIN);  // leave the source valid for its dtor
    mpfr_set_zero(o.v_, 1);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  // ---- constructors from exact values -------------------------------------
  static Real of(long x, Prec p) {
    Real r(p.bits);
    mpfr_set_si(r.v_, x, MPFR_RNDN);
    return r;
  }
  static Real of(double x, Prec p) {
    Real r(p.bits);
    mpfr_set_d(r.v_, x, MPFR_RNDN);
    return r;
  }
  static Real of(const mpz_class& x, Prec p) {
    Real r(p.bits);
    mpfr_set_z(r.v_, x.get_mpz_t(), MPFR_RNDN);
    return r;
  }
  static Real of(const mpq_class& x, Prec p) {
    Real r(p.bits);
    mpfr_set_q(r.v_, x.get_mpq_t(), MPFR_RNDN);
    return r;
  }
  static Real parse(const std::string& s, Prec p) {
    Real r(p.bits);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
      throw std::invalid_argument("Real::parse: bad numeral '" + s + "'");
    return r;
  }

  // ---- constants -----------------------------------------------------------
  static Real pi(Prec p) {
    Real r(p.bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static Real euler_gamma(Prec p) {
    Real r(p.bits);
    mpfr_const_euler(r.v_, MPFR_RNDN);
    return r;
  }
  static Real zero(Prec p) { return Real(p.bits); }
  static Real one(Prec p) { return of(1L, p); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  Prec precision() const { return Prec{prec()}; }

  // ---- queries ---------------------------------------------------------
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  // Nearest integer as an exact mpz, plus the distance to it (used to certify
  // that a value known to be integral was computed accurately enough).
  mpz_class round_to_mpz() const {
    Real r(*this);
    mpfr_round(r.v_, v_);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), r.v_, MPFR_RNDN);
    return z;
  }

  std::string str(long digits = 0) const {
    if (digits <= 0) digits = static_cast<long>(prec() / 3.3219280948873623);
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  // ---- arithmetic ----------------------------------------------------------
  friend Real operator-(const Real& a) {
    Real r(a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
#define HMF_REAL_BINOP(op, fn)                                    \
  friend Real operator op(const Real& a, const Real& b) {        \
    Real r(std::max(a.prec(), b.prec()));                        \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                             \
    return r;                                                    \
  }                                                              \
  friend Real operator op(const Real& a, long b) {               \
    Real r(a.prec());                                            \
    fn##_si(r.v_, a.v_, b, MPFR_RNDN);                           \
    return r;                                                    \
  }                                                              \
  Real& operator op##=(const Real& b) {                          \
    if (b.prec() > prec()) mpfr_prec_round(v_, b.prec(), MPFR_RNDN); \
    fn(v_, v_, b.v_, MPFR_RNDN);                                 \
    return *this;                                                \
  }                                                              \
  Real& operator op##=(long b) {                                 \
    fn##_si(v_, v_, b, MPFR_RNDN);                               \
    return *this;                                                \
  }
  HMF_REAL_BINOP(+, mpfr_add)
  HMF_REAL_BINOP(-, mpfr_sub)
  HMF_REAL_BINOP(*, mpfr_mul)
  HMF_REAL_BINOP(/, mpfr_div)
#undef HMF_REAL_BINOP
  friend Real operator+(long a, const Real& b) { return b + a; }
  friend Real operator*(long a, const Real& b) { return b * a; }
  friend Real operator-(long a, const Real& b) {
    Real r(b.prec());
    mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(long a, const Real& b) {
    Real r(b.prec());
    mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }

  // ---- comparisons -----------------------------------------------------
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_); }
  friend bool operator!=(const Real& a, const Real& b) { return !mpfr_equal_p(a.v_, b.v_); }
  friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
  friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
  friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
  friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }

  // ---- elementary functions (free-function style wrappers) -------------
#define HMF_REAL_FUN1(name, fn)       \
  friend Real name(const Real& a) {   \
    Real r(a.prec());                 \
    fn(r.v_, a.v_, MPFR_RNDN);        \
    return r;                         \
  }
  HMF_REAL_FUN1(abs, mpfr_abs)
  HMF_REAL_FUN1(sqrt, mpfr_sqrt)
  HMF_REAL_FUN1(exp, mpfr_exp)
  HMF_REAL_FUN1(log, mpfr_log)
  HMF_REAL_FUN1(sin, mpfr_sin)
  HMF_REAL_FUN1(cos, mpfr_cos)
  HMF_REAL_FUN1(tan, mpfr_tan)
  HMF_REAL_FUN1(sinh, mpfr_sinh)
  HMF_REAL_FUN1(cosh, mpfr_cosh)
  HMF_REAL_FUN1(atan, mpfr_atan)
  HMF_REAL_FUN1(gamma_fn, mpfr_gamma)
  HMF_REAL_FUN1(log_gamma, mpfr_lngamma)
  HMF_REAL_FUN1(digamma_fn, mpfr_digamma)
  HMF_REAL_FUN1(expm1, mpfr_expm1)
  HMF_REAL_FUN1(log1p, mpfr_log1p)
#undef HMF_REAL_FUN1

  friend Real floor(const Real& a) {
    Real r(a.prec());
    mpfr_floor(r.v_, a.v_);
    return r;
  }
  friend Real ceil(const Real& a) {
    Real r(a.prec());
    mpfr_ceil(r.v_, a.v_);
    return r;
  }
  friend Real pow(const Real& a, const Real& b) {
    Real r(std::max(a.prec(), b.prec()));
    mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real pow(const Real& a, long b) {
    Real r(a.prec());
    mpfr_pow_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend Real atan2(const Real& y, const Real& x) {
    Real r(std::max(y.prec(), x.prec()));
    mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend Real hypot(const Real& x, const Real& y) {
    Real r(std::max(y.prec(), x.prec()));
    mpfr_hypot(r.v_, x.v_, y.v_, MPFR_RNDN);
    return r;
  }
  friend Real fmax(const Real& a, const Real& b) { return a >= b ? a : b; }
  friend Real fmin(const Real& a, const Real& b) { return a <= b ? a : b; }
  friend void sin_cos(Real& s, Real& c, const Real& a) {
    mpfr_prec_t p = a.prec();
    mpfr_set_prec(s.v_, p);
    mpfr_set_prec(c.v_, p);
    mpfr_sin_cos(s.v_, c.v_, a.v_, MPFR_RNDN);
  }

  // 2^e as a Real at precision p (used for explicit error bookkeeping).
  static Real pow2(long e, Prec p) {
    Real r(p.bits);
    mpfr_set_si_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t v_;
};

// Complex numbers over Real (MPC is not assumed to be available; only the
// handful of operations the library needs are implemented).
struct CReal {
  Real re, im;

  explicit CReal(Prec p = Prec{128}) : re(p.bits), im(p.bits) {}
  CReal(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Prec precision() const { return Prec{std::max(re.prec(), im.prec())}; }

  friend CReal operator+(const CReal& a, const CReal& b) { return {a.re + b.re, a.im + b.im}; }
  friend CReal operator-(const CReal& a, const CReal& b) { return {a.re - b.re, a.im - b.im}; }
  friend CReal operator-(const CReal& a) { return {-a.re, -a.im}; }
  friend CReal operator*(const CReal& a, const CReal& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend CReal operator*(const Real& a, const CReal& b) { return {a * b.re, a * b.im}; }
  friend CReal operator/(const CReal& a, const CReal& b) {
    Real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  CReal& operator+=(const CReal& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  CReal& operator*=(const CReal& b) { return *this = *this * b; }

  friend Real abs(const CReal& a) { return hypot(a.re, a.im); }
  friend Real norm(const CReal& a) { return a.re * a.re + a.im * a.im; }
  friend CReal conj(const CReal& a) { return {a.re, -a.im}; }

  friend CReal exp(const CReal& a) {
    Real m = exp(a.re), s(a.re.prec()), c(a.re.prec());
    sin_cos(s, c, a.im);
    return {m * c, m * s};
  }
  // Principal branch: log z = log|z| + i arg z with arg in (-pi, pi].
  friend CReal log(const CReal& a) { return {log(abs(a)), atan2(a.im, a.re)}; }
};

// e(x) = exp(2*pi*i*x), the standard additive character.
inline CReal unit_e(const Real& x) {
  Prec p = x.precision();
  Real t = 2L * Real::pi(p) * x;
  Real s(p.bits), c(p.bits);
  sin_cos(s, c, t);
  return {std::move(c), std::move(s)};
}

}  // namespace hmf
