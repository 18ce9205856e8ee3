#pragma once

#include <vector>

#include "hmf/quadfield.hpp"
#include "hmf/real.hpp"

namespace hmf {

// Automorphic Green functions on the product of two upper half planes,
// attached to the real quadratic field of discriminant p (p in {5, 13, 17})
// and twisted by the genus character psi.  Three evaluators are provided:
//
//   phi_direct       -- the defining lattice sum over integral matrices
//                       [[a, lambda], [lambda', b]] of determinant m p,
//                       summable for 1 < s <= 3, with a certified
//                       truncation bound;
//   phi_fourier      -- the Fourier expansion (constant term + hyperbolic
//                       strata + unit-orbit stratum), valid for s > 1 and
//                       y1 y2 > m p;
//   phi_regularized  -- the regularized value at s = 1 (the constant term
//                       of the Laurent expansion), computed in arbitrary
//                       precision from exact integer Fourier coefficients.
//
// Points on or too close to the divisor T_{mp} raise PrecisionError.

// A point z = (x1 + i y1, x2 + i y2) on H x H.  Coordinates are stored at
// high precision so invariance tests can compare far below double rounding;
// the double evaluators read them through to_double().
struct EvalPoint {
  Real x1, y1, x2, y2;

  static EvalPoint of(double x1, double y1, double x2, double y2,
                      Prec prec = Prec::from_digits(40));
  // z -> (z1 + mu, z2 + mu') for mu in O_F
  EvalPoint translated(const QuadElem& mu) const;
  // z -> (eps^2 z1, (eps')^2 z2), coordinatewise real scaling by a unit eps
  EvalPoint unit_scaled(const QuadElem& eps) const;
  // (z1, z2) -> (z2, z1)
  EvalPoint swapped() const;
  double y_product() const;
};

struct GreenOptions {
  double abs_tol = 1e-3;    // target absolute truncation error
  double delta_min = 1e-3;  // divisor guard: require Q-argument - 1 >= delta_min
                            // on every weighted term of the direct sum
  double max_radius = 5e7;  // cap on the |w|-enumeration radius per stratum
  long max_a = 100000;      // cap on the upper-left matrix entry a
  unsigned long max_terms = 400000000;  // cap on enumerated lattice terms
};

struct GreenEval {
  double value = 0.0;
  double err_bound = 0.0;   // bound on the truncation error (see note below)
  unsigned long terms = 0;  // number of weighted terms actually summed
};

// Direct lattice sum, truncated to the disk |w| <= W with a linear taper of
// the weights on 0.65 W <= |w| <= W (plus the a = 0 stratum, summed to
// near-exactness with character-Abel tail bounds).  The cutoff W is chosen
// from abs_tol by a
// measured convergence model: the truncation error decays through
// cancellation between strata of opposite character sign, roughly two
// orders of magnitude faster than the same-sign tail envelope.  value
// carries that calibrated accuracy (validated against the independent
// Fourier evaluator); err_bound is the proved same-sign envelope of the
// discarded terms and is typically a large overestimate of the true error.
GreenEval phi_direct(const EvalPoint& z, long m, int p, double s,
                     const GreenOptions& opt = GreenOptions{});

// Fourier expansion.  Requires y1 y2 > m p.  err_bound accounts for the
// stratum truncations, the certified tails of the series coefficients, and
// the omitted (nu nu' < 0) stratum.  One caveat: the remainder of the
// unit-orbit correction series is bounded by an empirical quadratic-decay
// envelope (validated with >= 2x margin by the oracle) rather than a
// theorem-grade inequality.
GreenEval phi_fourier(const EvalPoint& z, long m, int p, double s,
                      const GreenOptions& opt = GreenOptions{});

// Regularized value at s = 1, to absolute truncation error abs_tol, computed
// at precision prec.  Requires y1 y2 > m p.
Real phi_regularized(const EvalPoint& z, long m, int p, Prec prec,
                     double abs_tol = 1e-30);

// Constant Fourier term as a function of Y = y1 y2, for s >= 1:
//   (p/pi)^(s-1/2) Gamma(s-1/2) L(2s-1, eps_p) b_m(0, s) Y^(1-s).
// At s = 1 this reduces to sqrt(p) L(1, eps_p) (24 sigma_1(m)).
Real fourier_constant_term(long m, int p, const Real& s, const Real& y1y2,
                           Prec prec);
Real regularized_constant_term(long m, int p, Prec prec);

// Truncated direct sum over an explicit finite box, for cross-checking the
// enumeration against independent references.  Contract:
//   a in [-a_box, a_box]; lambda = (g + h sqrt(p))/2 over |g| <= g_box,
//   |h| <= h_box, g = h (mod 2); for a != 0 require a | (m p + N(lambda))
//   and set b = (m p + N)/a; for a = 0 require N(lambda) = -m p and let b
//   run over [-b_box, b_box].  Weight: eps_p(a) when p does not divide a,
//   else eps_p(b) when p does not divide b, else the term is skipped.
//   Term: Q_{s-1}(1 + |a z1 z2 + lambda z1 + lambda' z2 + b|^2/(2 y1 y2 m p)).
// Evaluated with arbitrary-precision Legendre Q for prec.bits > 64 and with
// the fast double-precision kernel otherwise.
Real direct_box_sum(const EvalPoint& z, long m, int p, const Real& s,
                    long a_box, long g_box, long h_box, long b_box, Prec prec,
                    unsigned long* terms_out = nullptr);

// Representatives of {mu in O_F : N(mu) = m} modulo multiplication by the
// norm-one units +-eps0^(2k); empty when m is not represented.  These index
// the a = 0 stratum of the direct sum (lambda = sqrt(p) mu) and the
// unit-orbit stratum of the Fourier expansion (lambda = mu / sqrt(p)).
std::vector<QuadElem> norm_orbit_reps(long m, int p);

}  // namespace hmf
