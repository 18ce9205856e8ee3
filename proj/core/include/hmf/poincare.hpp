#pragma once
// Fourier coefficients b_m(n, s) of the weight-0 Maass-Poincare series
// F_m(tau, s) on SL_2(Z), and evaluation of F_m itself.
//
// For m >= 1 and Re(tau) = x, Im(tau) = y:
//
//   F_m(tau, s) = (2 cal_I(s, 2 pi m y) + cal_K(s, 2 pi m y)) e(-m x)
//                 + b_m(0, s) y^{1-s}
//                 + sum_{n != 0} b_m(n, s) cal_K(s, 2 pi n y) e(n x)
//
// with the Kloosterman-Bessel coefficient series
//
//   n > 0:  b_m(n, s) = 2 pi (m/n)^{1/2} sum_c H_c(m, n) I_{2s-1}(4 pi sqrt(mn)/c)
//   n = 0:  b_m(0, s) = 4 pi^{1+s} sigma_m(2s-1) / ((2s-1) Gamma(s) zeta(2s))
//   n < 0:  b_m(n, s) = -delta_{m,-n}
//                       + 2 pi |m/n|^{1/2} sum_c H_c(m, n) J_{2s-1}(4 pi sqrt(m|n|)/c)
//
// where H_c(m, n) = (1/c) sum_{d (c)^*} e((n d - m d^{-1})/c).
//
// At s = 1 the series F_m(tau, 1) is the weakly holomorphic form
// q^{-m} + O(q) plus the constant 24 sigma_1(m); its coefficients are exact
// integers (Faber polynomials of j), exposed as b_exact_s1.
//
// The c-sums converge only polynomially.  b_coeff truncates adaptively and
// reports a *certified* bound on the truncation error, derived from the Weil
// bound |H_c(m, n)| <= 2 tau(c) sqrt(gcd(m, n)) / sqrt(c) together with
// sum_{c <= X} tau(c) <= X (log X + 1) and the small-argument Bessel bound
// |B_nu(x)| <= e^{1/16} (x/2)^nu / Gamma(nu + 1) for 0 < x <= 1/2 (valid for
// both I_nu and J_nu).  Abel summation then gives, for c0 >= 8 pi sqrt(m|n|)
// and alpha = 2s - 1/2:
//
//   sum_{c > c0} |H_c B_{2s-1}(4 pi sqrt(m|n|)/c)|
//     <= 2 sqrt(g) e^{1/16} (2 pi sqrt(m|n|))^{2s-1} / Gamma(2s)
//        * alpha/(alpha-1) * (log c0 + 1 + 1/(alpha-1)) * c0^{1-alpha}.
//
// For s > 1 the trivial bound |H_c| <= 1 gives the alternative tail
// e^{1/16} (2 pi sqrt(m|n|))^{2s-1} / Gamma(2s) * c0^{2-2s} / (2s-2); the
// smaller of the two is used.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "hmf/real.hpp"

namespace hmf {

struct BCoeffOptions {
  // The truncation error must be certified below abs_tol + rel_tol * |value|.
  double abs_tol = 1e-2;
  double rel_tol = 1e-3;
  // Initial truncation point; doubles until the tail certifies or c_max hits.
  unsigned long c_start = 4096;
  unsigned long c_max = 1000000;
  // Throw PrecisionError when the tail cannot be certified by c_max.  When
  // false, the result is returned with certified = false instead.
  bool throw_on_uncertified = true;
};

struct BCoeffResult {
  long m = 0;
  long n = 0;
  double s = 1.0;
  double value = 0.0;        // b_m(n, s), including prefactor and delta term
  unsigned long c_used = 0;  // the c-sum was taken over 1 <= c <= c_used
  double tail_bound = 0.0;   // certified bound on |value - b_m(n, s)|
  bool certified = true;     // tail_bound <= abs_tol + rel_tol * |value|
};

// One entry of a batched coefficient request (see b_coeff_grid).
struct BCoeffRequest {
  long m = 1;
  long n = 1;
  double abs_tol = 1e-2;
  double rel_tol = 1e-3;
};

// Kloosterman sum H_c(m, n) in double precision (exact cyclotomic evaluation
// lives in expsums.hpp; this engine trades exactness for speed).
double kloosterman_double(long m, long n, unsigned long c);

// Partial sum over c_lo <= c <= c_hi of H_c(m, n) B_{2s-1}(4 pi sqrt(m|n|)/c)
// where B = I for n > 0 and B = J for n < 0.  Requires m >= 1, n != 0, s >= 1.
double kloosterman_csum(long m, long n, double s, unsigned long c_lo,
                        unsigned long c_hi);

// Certified bound on sum_{c > c0} |H_c(m, n) B_{2s-1}(4 pi sqrt(m|n|)/c)|
// (the comment at the top of this file gives the derivation).  Returns +inf
// when c0 < 8 pi sqrt(m|n|), where the small-argument regime does not apply.
double csum_tail_bound(long m, long n, double s, unsigned long c0);

// b_m(n, s) with adaptive, certified truncation.  m >= 1, s >= 1.
// n = 0 delegates to the closed form (c_used = 0, tail_bound = 0).
// Throws PrecisionError if the certified tail still exceeds opt.abs_tol at
// opt.c_max and opt.throw_on_uncertified is set.
BCoeffResult b_coeff(long m, long n, double s, const BCoeffOptions& opt = {});

// Batched variant: all coefficients share one pass over c (and one cosine
// table per c), so a full grid costs barely more than its hardest entry.
std::vector<BCoeffResult> b_coeff_grid(const std::vector<BCoeffRequest>& reqs,
                                       double s, const BCoeffOptions& opt = {});

// Closed form b_m(0, s) = 4 pi^{1+s} sigma_m(2s-1) / ((2s-1) Gamma(s) zeta(2s)).
// At s = 1 this equals 24 sigma_1(m) exactly and is returned as such.
Real b0_closed(long m, const Real& s, Prec prec);

// Partial sum of the n = 0 Kloosterman series
//   4 pi^{1+s} m^s / ((2s-1) Gamma(s)) * sum_{c <= c0} c^{1-2s} H_c(m, 0)
// computed exactly (Ramanujan sums) at MPFR precision; converges to
// b0_closed(m, s) with |tail| <= 4 pi^{1+s} m^s sigma_1(m) c0^{1-2s} /
// ((2s-1)^2 Gamma(s)) for s > 1.  Used to cross-check the closed form.
Real b0_series(long m, const Real& s, unsigned long c0, Prec prec);

// Exact coefficient of q^n in F_m(tau, 1) = J_m(tau) + 24 sigma_1(m) for
// n >= 0 (Faber polynomial coefficient, plus the constant at n = 0); zero for
// n < 0.  (The principal term q^{-m} is carried by the cal_I kernel, so
// b_m(-m, 1) = 0: the -delta term cancels the J-Bessel series limit.)
mpz_class b_exact_s1(long m, long n);

// Evaluates F_m(tau, s) from its Fourier expansion with coefficients from the
// certified double engine (n != 0) and the closed form (n = 0).  Coefficients
// are computed once at construction for n_lo <= n <= n_hi and certified so
// that the total coefficient-truncation error of F is at most
// rel_tol * exp(2 pi m y_min) for every y >= y_min.  Kernel evaluation is at
// MPFR precision `prec`.
class FourierEvaluator {
 public:
  FourierEvaluator(long m, double s, long n_lo, long n_hi, double y_min,
                   double rel_tol, Prec prec, const BCoeffOptions& base = {});

  // tau = x + i y with y >= y_min.
  CReal eval(const Real& x, const Real& y) const;
  CReal operator()(const CReal& tau) const { return eval(tau.re, tau.im); }

  double coefficient(long n) const;  // b_m(n, s) as used (n != 0, in range)
  const Real& b0() const { return b0_; }

 private:
  long m_;
  double s_;
  long n_lo_, n_hi_;
  Prec prec_;
  Real s_real_, b0_;
  std::vector<double> bn_;  // [n - n_lo], entry for n = 0 unused
};

// Convenience wrapper: expansion range chosen from Im(tau) and rel_tol.
CReal eval_F(const CReal& tau, long m, double s, Prec prec,
             double rel_tol = 1e-9);

}  // namespace hmf
