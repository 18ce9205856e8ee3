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

#include "hmf/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "hmf/intutil.hpp"

namespace hmf {

namespace {

// Extra mantissa bits consumed by cancellation of size ~exp(x).
long cancellation_guard(const Real& x) {
  double xd = x.to_double();
  if (xd < 0) xd = -xd;
  return static_cast<long>(xd * 1.4426950408889634) + 48;
}

bool is_integer(const Real& v) {
  return mpfr_integer_p(v.raw()) != 0;
}

}  // namespace

Real bessel_i(const Real& nu, const Real& x, Prec prec) {
  if (x.sign() < 0) throw std::domain_error("bessel_i: x must be >= 0");
  Prec wp = prec.plus(32);
  if (x.is_zero()) {
    if (nu.is_zero()) return Real::one(prec);
    if (nu.sign() > 0) return Real::zero(prec);
    throw std::domain_error("bessel_i: x = 0 with negative order");
  }
  Real xh = Real(x);
  mpfr_prec_round(xh.raw(), wp.bits, MPFR_RNDN);
  Real half_x = xh / 2L;
  Real q = half_x * half_x;  // x^2/4
  // t_0 = (x/2)^nu / Gamma(nu+1); t_{k+1} = t_k * q / ((k+1)(nu+k+1)).
  // Gamma (not its log) so that negative non-integer orders work too.
  Real t = exp(Real::of(1L, wp) * nu * log(half_x)) / gamma_fn(nu + Real::one(wp));
  Real acc = t;
  Real thresh = Real::pow2(-(wp.bits + 8), wp);
  for (long k = 0;; ++k) {
    t = t * q / ((k + 1) * (nu + Real::of(k + 1, wp)));
    acc += t;
    if (abs(t) < thresh * abs(acc) && Real::of(2L * (k + 1), wp) > x &&
        Real::of(k, wp) + nu > 0)
      break;
    if (k > 10000000) throw PrecisionError("bessel_i: series failed to converge");
  }
  mpfr_prec_round(acc.raw(), prec.bits, MPFR_RNDN);
  return acc;
}

Real bessel_j(const Real& nu, const Real& x, Prec prec) {
  if (x.sign() < 0) throw std::domain_error("bessel_j: x must be >= 0");
  if (nu.sign() < 0) throw std::domain_error("bessel_j: order must be >= 0");
  Prec wp = prec.plus(cancellation_guard(x));
  if (x.is_zero()) return nu.is_zero() ? Real::one(prec) : Real::zero(prec);
  Real xh = Real(x);
  mpfr_prec_round(xh.raw(), wp.bits, MPFR_RNDN);
  Real half_x = xh / 2L;
  Real q = half_x * half_x;
  Real t = exp(Real::of(1L, wp) * nu * log(half_x) - log_gamma(nu + Real::one(wp)));
  Real acc = t;
  Real thresh = Real::pow2(-(wp.bits + 8), wp);
  Real max_term = abs(t);
  for (long k = 0;; ++k) {
    t = -t * q / ((k + 1) * (nu + Real::of(k + 1, wp)));
    acc += t;
    Real at = abs(t);
    if (at > max_term) max_term = at;
    // once terms decrease (2(k+1) > x), an alternating series tail is
    // bounded by the next term
    if (at < thresh * max_term && Real::of(2L * (k + 1), wp) > x) break;
    if (k > 10000000) throw PrecisionError("bessel_j: series failed to converge");
  }
  mpfr_prec_round(acc.raw(), prec.bits, MPFR_RNDN);
  return acc;
}

namespace {

// K_n(x) for exact integer n >= 0 via the logarithmic ascending series with
// harmonic numbers (digamma at integers): for n >= 0,
//   K_n(x) = (1/2)(x/2)^{-n} sum_{k=0}^{n-1} ((n-k-1)!/k!)(-x^2/4)^k
//          + (-1)^{n+1} log(x/2) I_n(x)
//          + (-1)^n (1/2)(x/2)^n sum_{k>=0} (psi(k+1)+psi(n+k+1))/(k!(n+k)!) (x^2/4)^k
Real bessel_k_int(long n, const Real& x, Prec prec) {
  Prec wp = prec.plus(cancellation_guard(x) + 32);
  Real xh = Real(x);
  mpfr_prec_round(xh.raw(), wp.bits, MPFR_RNDN);
  Real half_x = xh / 2L;
  Real q = half_x * half_x;
  Real lg = log(half_x);
  Real gamma_c = Real::euler_gamma(wp);

  // finite part
  Real finite = Real::zero(wp);
  if (n > 0) {
    mpq_class coef;  // (n-k-1)!/k!
    mpz_class num;
    Real qp = Real::one(wp);
    for (long k = 0; k < n; ++k) {
      mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(n - k - 1));
      mpz_class den;
      mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(k));
      coef = mpq_class(num) / mpq_class(den);
      Real term = Real::of(coef, wp) * qp;
      finite += (k % 2 == 0) ? term : -term;
      qp = qp * q;
    }
    finite = finite / (2L * exp(Real::of(n, wp) * lg));
  }

  // logarithmic part
  Real nu_r = Real::of(n, wp);
  Real log_part = lg * bessel_i(nu_r, xh, wp);
  if (n % 2 == 0) log_part = -log_part;

  // psi series: psi(k+1) = -gamma + H_k, psi(n+k+1) = -gamma + H_{n+k}
  mpq_class Hk = 0, Hnk = 0;
  for (long i = 1; i <= n; ++i) Hnk += mpq_class(1, i);
  mpz_class kfact = 1, nkfact;
  mpz_fac_ui(nkfact.get_mpz_t(), static_cast<unsigned long>(n));
  Real psi_sum = Real::zero(wp);
  Real qp = Real::one(wp);
  Real thresh = Real::pow2(-(wp.bits + 8), wp);
  for (long k = 0;; ++k) {
    Real digammas = Real::of(Hk + Hnk, wp) - 2L * gamma_c;
    Real denom = Real::of(mpq_class(kfact) * mpq_class(nkfact), wp);
    Real term = digammas * qp / denom;
    psi_sum += term;
    if (abs(term) < thresh * (abs(psi_sum) + Real::one(wp)) && Real::of(2 * (k + 1), wp) > x) break;
    if (k > 10000000) throw PrecisionError("bessel_k_int: series failed to converge");
    qp = qp * q;
    Hk += mpq_class(1, k + 1);
    Hnk += mpq_class(1, n + k + 1);
    kfact *= k + 1;
    nkfact *= n + k + 1;
  }
  Real psi_part = exp(Real::of(n, wp) * lg) * psi_sum / 2L;
  if (n % 2 != 0) psi_part = -psi_part;

  Real out = finite + log_part + psi_part;
  mpfr_prec_round(out.raw(), prec.bits, MPFR_RNDN);
  return out;
}

}  // namespace

Real bessel_k(const Real& nu, const Real& x, Prec prec) {
  if (x.sign() <= 0) throw std::domain_error("bessel_k: x must be > 0");
  Real anu = abs(nu);  // K_{-nu} = K_nu
  if (is_integer(anu)) return bessel_k_int(anu.to_long(), x, prec);

  // distance from the nearest integer costs log2(1/dist) bits in sin(pi nu)
  Real nearest = floor(anu + Real::of(0.5, anu.precision()));
  double dist = abs(anu - nearest).to_double();
  long dist_guard = dist < 1e-9 ? 64 : static_cast<long>(-std::log2(dist)) + 8;
  Prec wp = prec.plus(2 * cancellation_guard(x) + dist_guard + 32);

  Real nu_w = Real(anu);
  mpfr_prec_round(nu_w.raw(), wp.bits, MPFR_RNDN);
  Real ip = bessel_i(nu_w, x, wp);
  Real im = bessel_i(-nu_w, x, wp);
  Real pi_w = Real::pi(wp);
  Real out = pi_w * (im - ip) / (2L * sin(pi_w * nu_w));
  mpfr_prec_round(out.raw(), prec.bits, MPFR_RNDN);
  return out;
}

Real cal_I(const Real& s, const Real& y, Prec prec) {
  Real ay = abs(y);
  if (s == Real::of(1L, s.precision())) return sinh(ay);
  Prec wp = prec.plus(16);
  Real half = Real::of(0.5, wp);
  return sqrt(Real::pi(wp) * ay / 2L) * bessel_i(s - half, ay, wp);
}

Real cal_K(const Real& s, const Real& y, Prec prec) {
  Real ay = abs(y);
  if (s == Real::of(1L, s.precision())) return exp(-ay);
  Prec wp = prec.plus(16);
  Real half = Real::of(0.5, wp);
  return sqrt(2L * ay / Real::pi(wp)) * bessel_k(s - half, ay, wp);
}

namespace {

// Cached Gauss-Legendre nodes/weights on [-1, 1] (Newton iteration on P_n).
struct GLRule {
  std::vector<Real> nodes, weights;
};

const GLRule& gl_rule(long n, Prec prec) {
  static std::map<std::pair<long, mpfr_prec_t>, GLRule> cache;
  auto key = std::make_pair(n, prec.bits);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  GLRule rule;
  Prec wp = prec.plus(16);
  Real pi_w = Real::pi(wp);
  for (long i = 0; i < n; ++i) {
    // Chebyshev initial guess, then Newton on P_n
    Real x = cos(pi_w * Real::of(mpq_class(4 * i + 3, 4 * n + 2), wp));
    for (int iter = 0; iter < 200; ++iter) {
      // evaluate P_n and P_n' by upward recurrence
      Real p0 = Real::one(wp), p1 = x;
      for (long k = 2; k <= n; ++k)
        std::tie(p0, p1) = std::make_pair(p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k);
      Real dp = Real::of(n, wp) * (x * p1 - p0) / (x * x - Real::one(wp));
      Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) < Real::pow2(-(wp.bits - 8), wp)) break;
    }
    Real p0 = Real::one(wp), p1 = x;
    for (long k = 2; k <= n; ++k)
      std::tie(p0, p1) = std::make_pair(p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k);
    Real dp = Real::of(n, wp) * (x * p1 - p0) / (x * x - Real::one(wp));
    rule.nodes.push_back(x);
    rule.weights.push_back(2L / ((Real::one(wp) - x * x) * dp * dp));
  }
  return cache.emplace(key, std::move(rule)).first->second;
}

// Q_nu(t) by composite Gauss-Legendre quadrature of
// int_0^V (t + sqrt(t^2-1) cosh v)^{-(nu+1)} dv, used for t close to 1.
Real legendre_q_quad(const Real& nu, const Real& t, Prec prec) {
  Prec wp = prec.plus(24);
  Real s = nu + Real::one(wp);
  Real X = sqrt(t * t - Real::one(wp));
  // integrand <= (X e^v / 2)^{-s}; choose V so the tail is negligible
  // relative to the contribution of [0, 1].
  double sd = s.to_double(), Xd = X.to_double();
  double lower = std::pow(t.to_double() + Xd * std::cosh(1.0), -sd);  // first-panel scale
  double V = (0.6931 * (wp.bits + 8) - std::log(lower)) / sd - std::log(Xd / 2.0);
  if (V < 1) V = 1;
  long panels = static_cast<long>(V) + 1;
  Real h = Real::of(V / static_cast<double>(panels), wp);
  const GLRule& rule = gl_rule(std::max<long>(32, wp.bits / 3), wp);

  Real acc = Real::zero(wp);
  for (long pnl = 0; pnl < panels; ++pnl) {
    Real a = Real::of(pnl, wp) * h;
    Real mid = a + h / 2L;
    Real acc_p = Real::zero(wp);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      Real v = mid + rule.nodes[i] * h / 2L;
      Real integrand = exp(-s * log(t + X * cosh(v)));
      acc_p += rule.weights[i] * integrand;
    }
    acc += acc_p * h / 2L;
  }
  mpfr_prec_round(acc.raw(), prec.bits, MPFR_RNDN);
  return acc;
}

// Q_nu(t) by the descending series
//   Q_nu(t) = sqrt(pi) Gamma(nu+1) / (Gamma(nu+3/2) (2t)^{nu+1})
//             * 2F1((nu+2)/2, (nu+1)/2; nu+3/2; t^{-2})
// valid for t > 1; used for t >= 1.5 where it converges fast.
Real legendre_q_series(const Real& nu, const Real& t, Prec prec) {
  Prec wp = prec.plus(24);
  Real one = Real::one(wp);
  Real a = (nu + 2L * one) / 2L;
  Real b = (nu + one) / 2L;
  Real c = nu + Real::of(mpq_class(3, 2), wp);
  Real z = one / (t * t);
  Real term = one, acc = one;
  Real thresh = Real::pow2(-(wp.bits + 8), wp);
  for (long k = 0;; ++k) {
    Real kk = Real::of(k, wp);
    term = term * (a + kk) * (b + kk) * z / ((c + kk) * (kk + one));
    acc += term;
    if (term < thresh * acc) break;
    if (k > 4000000) throw PrecisionError("legendre_q_series: slow convergence");
  }
  Real pref = exp(log_gamma(nu + one) - log_gamma(c) - (nu + one) * log(2L * t));
  Real out = sqrt(Real::pi(wp)) * pref * acc;
  mpfr_prec_round(out.raw(), prec.bits, MPFR_RNDN);
  return out;
}

}  // namespace

Real legendre_q(const Real& nu, const Real& t, Prec prec) {
  if (t <= Real::one(t.precision())) throw std::domain_error("legendre_q: need t > 1");
  if (nu.is_zero()) {
    // Q_0(t) = (1/2) log((t+1)/(t-1)) exactly
    Prec wp = prec.plus(8);
    Real tw = Real(t);
    mpfr_prec_round(tw.raw(), wp.bits, MPFR_RNDN);
    Real one = Real::one(wp);
    Real out = log((tw + one) / (tw - one)) / 2L;
    mpfr_prec_round(out.raw(), prec.bits, MPFR_RNDN);
    return out;
  }
  if (t >= Real::of(1.5, t.precision())) return legendre_q_series(nu, t, prec);
  return legendre_q_quad(nu, t, prec);
}

Real hurwitz_zeta(const Real& s, const Real& a, Prec prec) {
  if (s <= Real::one(s.precision())) throw std::domain_error("hurwitz_zeta: need s > 1");
  if (a.sign() <= 0) throw std::domain_error("hurwitz_zeta: need a > 0");
  Prec wp = prec.plus(32);
  // Euler-Maclaurin: sum_{k<N} (k+a)^{-s} + (N+a)^{1-s}/(s-1) + (N+a)^{-s}/2
  //   + sum_{j=1..J} B_{2j}/(2j)! (s)_{2j-1} (N+a)^{-s-2j+1}
  // Parameters chosen so ((s+2J)/(2 pi N))^{2J} << 2^{-wp}.
  long J = wp.bits / 4 + 8;
  double sd = s.to_double();
  long N = static_cast<long>(0.75 * (2.0 * J + sd)) + 8;

  Real acc = Real::zero(wp);
  for (long k = 0; k < N; ++k) acc += exp(-s * log(a + Real::of(k, wp)));
  Real Na = a + Real::of(N, wp);
  Real lNa = log(Na);
  acc += exp((Real::one(wp) - s) * lNa) / (s - Real::one(wp));
  acc += exp(-s * lNa) / 2L;

  // Pochhammer (s)_{2j-1} built incrementally.
  Real poch = Real(s);
  mpfr_prec_round(poch.raw(), wp.bits, MPFR_RNDN);
  for (long j = 1; j <= J; ++j) {
    // term_j = B_2j/(2j)! * (s)_{2j-1} * (N+a)^{-s-2j+1}
    mpq_class b2j = bernoulli(static_cast<unsigned>(2 * j));
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(2 * j));
    Real coef = Real::of(b2j / mpq_class(fact), wp);
    Real power = exp((Real::of(1 - 2 * j, wp) - s) * lNa);
    acc += coef * poch * power;
    // advance (s)_{2j-1} -> (s)_{2j+1}
    poch = poch * (s + Real::of(2 * j - 1, wp)) * (s + Real::of(2 * j, wp));
  }
  mpfr_prec_round(acc.raw(), prec.bits, MPFR_RNDN);
  return acc;
}

Real riemann_zeta(const Real& s, Prec prec) {
  Real out(prec.bits);
  mpfr_zeta(out.raw(), s.raw(), MPFR_RNDN);
  return out;
}

Real dirichlet_L(const Real& s, int p, Prec prec) {
  if (p != 5 && p != 13 && p != 17) throw std::invalid_argument("dirichlet_L: p must be 5, 13, or 17");
  Prec wp = prec.plus(16);
  if (s == Real::of(1L, s.precision())) {
    // L(1, chi_p) = -(1/sqrt p) sum_a chi(a) log(2 sin(pi a / p))
    Real pi_w = Real::pi(wp);
    Real acc = Real::zero(wp);
    for (long a = 1; a < p; ++a) {
      int chi = jacobi_symbol(a, static_cast<unsigned long>(p));
      Real term = log(2L * sin(pi_w * Real::of(a, wp) / static_cast<long>(p)));
      acc += chi > 0 ? term : -term;
    }
    Real out = -acc / sqrt(Real::of(static_cast<long>(p), wp));
    mpfr_prec_round(out.raw(), prec.bits, MPFR_RNDN);
    return out;
  }
  if (s < Real::one(s.precision())) throw std::domain_error("dirichlet_L: need s >= 1");
  // p^{-s} sum_{a=1}^{p-1} chi(a) zeta(s, a/p)
  Real acc = Real::zero(wp);
  for (long a = 1; a < p; ++a) {
    int chi = jacobi_symbol(a, static_cast<unsigned long>(p));
    Real z = hurwitz_zeta(s, Real::of(mpq_class(a, p), wp), wp);
    acc += chi > 0 ? z : -z;
  }
  Real out = exp(-s * log(Real::of(static_cast<long>(p), wp))) * acc;
  mpfr_prec_round(out.raw(), prec.bits, MPFR_RNDN);
  return out;
}

}  // namespace hmf
