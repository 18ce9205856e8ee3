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

#include "hmf/real.hpp"

namespace hmf {

// Modified Bessel function of the first kind I_nu(x), real order, x >= 0.
// Ascending series; all terms are positive so no cancellation guard is
// needed beyond the requested precision.
Real bessel_i(const Real& nu, const Real& x, Prec prec);

// Bessel function of the first kind J_nu(x), real order nu >= 0, x >= 0.
// Alternating ascending series with an explicit exp(x)-sized guard against
// cancellation, so large x costs precision, not correctness.
Real bessel_j(const Real& nu, const Real& x, Prec prec);

// Modified Bessel function of the second kind K_nu(x), real order, x > 0.
// Non-integer order uses the reflection formula through I_{-nu} - I_nu;
// integer order uses the logarithmic series with exact harmonic numbers.
Real bessel_k(const Real& nu, const Real& x, Prec prec);

// Exponential kernels attached to the weight parameter s:
//   cal_I(s, y) = sqrt(pi |y| / 2) I_{s - 1/2}(|y|)
//   cal_K(s, y) = sqrt(2 |y| / pi) K_{s - 1/2}(|y|)
// At s = 1 these reduce exactly to sinh|y| and exp(-|y|), and
// 2 cal_I + cal_K = exp(|y|).
Real cal_I(const Real& s, const Real& y, Prec prec);
Real cal_K(const Real& s, const Real& y, Prec prec);

// Legendre function of the second kind Q_nu(t) on the real axis t > 1
// (the branch with Q_0(t) = (1/2) log((t+1)/(t-1))).  Descending
// hypergeometric series for t away from 1, Gauss-Legendre quadrature of
// the integral representation int_0^inf (t + sqrt(t^2-1) cosh v)^{-nu-1} dv
// near the singularity.
Real legendre_q(const Real& nu, const Real& t, Prec prec);

// Hurwitz zeta(s, a) for real s > 1, a > 0, by Euler-Maclaurin summation.
Real hurwitz_zeta(const Real& s, const Real& a, Prec prec);

// Riemann zeta (MPFR built-in).
Real riemann_zeta(const Real& s, Prec prec);

// Dirichlet L(s, chi_p) for the real even character chi_p(a) = (a|p),
// p in {5, 13, 17}.  s > 1 via Hurwitz zeta; s = 1 via the closed form
// -(1/sqrt p) sum chi(a) log(2 sin(pi a / p)).
Real dirichlet_L(const Real& s, int p, Prec prec);

}  // namespace hmf
