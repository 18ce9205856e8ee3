#include "hmf/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "hmf/expsums.hpp"
#include "hmf/intutil.hpp"
#include "hmf/qseries.hpp"
#include "hmf/specfun.hpp"

namespace hmf {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Units of Z/cZ with inverses, enumerated for d <= c/2 only: the involution
// d <-> c - d sends the exponent j = (n d - m d^{-1}) mod c to -j, so each
// cosine appears twice and half the units suffice (phi(c) is even for c >= 3).
// One modular inversion per modulus via batch (Montgomery) inversion.
// ---------------------------------------------------------------------------

// Smallest-prime-factor sieve, rebuilt (cheaply) whenever it must grow.
std::vector<std::uint32_t> g_spf;
std::mutex g_spf_mu;

// Distinct prime factors of c, via the shared sieve (thread-safe).
std::vector<std::uint32_t> distinct_primes(unsigned long c) {
  std::lock_guard<std::mutex> lk(g_spf_mu);
  if (g_spf.size() <= c) {
    std::size_t hi = std::max<std::size_t>(c + 1, 2 * g_spf.size());
    g_spf.resize(hi);
    for (std::size_t i = 0; i < hi; ++i) g_spf[i] = static_cast<std::uint32_t>(i);
    for (std::size_t p = 2; p * p < hi; ++p)
      if (g_spf[p] == p)
        for (std::size_t q = p * p; q < hi; q += p)
          if (g_spf[q] == q) g_spf[q] = static_cast<std::uint32_t>(p);
  }
  std::vector<std::uint32_t> ps;
  while (c > 1) {
    std::uint32_t p = g_spf[c];
    ps.push_back(p);
    while (c % p == 0) c /= p;
  }
  return ps;
}

struct UnitTable {
  std::vector<std::uint32_t> d, dinv;  // units 1 <= d <= c/2 and their inverses

  // Scratch buffers reused across moduli to avoid reallocation.
  std::vector<char> coprime;
  std::vector<std::uint64_t> pref;

  void build(unsigned long c) {
    d.clear();
    dinv.clear();
    if (c < 3) return;
    coprime.assign(c / 2 + 1, 1);
    for (std::uint32_t p : distinct_primes(c))
      for (unsigned long q = p; q <= c / 2; q += p) coprime[q] = 0;
    for (unsigned long u = 1; u <= c / 2; ++u)
      if (coprime[u]) d.push_back(static_cast<std::uint32_t>(u));
    // Batch inversion: one extended-gcd inversion for the whole modulus.
    std::size_t nu = d.size();
    pref.resize(nu + 1);
    pref[0] = 1;
    for (std::size_t i = 0; i < nu; ++i) pref[i + 1] = mulmod_u64(pref[i], d[i], c);
    std::uint64_t t = invmod_u64(pref[nu], c);
    dinv.resize(nu);
    for (std::size_t i = nu; i-- > 0;) {
      dinv[i] = static_cast<std::uint32_t>(mulmod_u64(pref[i], t, c));
      t = mulmod_u64(t, d[i], c);
    }
  }
};

// H_c(m, n) for c <= 2 (no unit pairs to fold).
double hc_small(long m, long n, unsigned long c) {
  if (c == 1) return 1.0;
  return ((m + n) % 2 == 0) ? 0.5 : -0.5;  // H_2 = (-1)^{m+n} / 2
}

// Bessel factor of the summand: I_{2s-1} for n > 0, J_{2s-1} for n < 0.
double bessel_factor(double nu, double x, bool ibranch) {
  return ibranch ? std::cyl_bessel_i(nu, x) : std::cyl_bessel_j(nu, x);
}

// One coefficient request inside the adaptive engine.
struct PairWork {
  long m = 1, n = 1;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  double delta = 0.0;     // -1 when n = -m, else 0
  double pref = 0.0;      // 2 pi |m/n|^{1/2}
  double x_num = 0.0;     // 4 pi sqrt(m |n|)
  double csum = 0.0;
  double tail = kInf;     // certified raw-scale tail at c_done
  unsigned long c_done = 0;
  bool active = true;
};

// Extends the partial sums of the active pairs over c in [c_lo, c_hi].  With
// several pairs a cosine table per modulus is shared; a single pair calls cos
// directly (cheaper than building the table).
void extend_sums(std::vector<PairWork>& work, double s, unsigned long c_lo,
                 unsigned long c_hi) {
  double nu = 2.0 * s - 1.0;
  std::size_t n_active = 0;
  for (const PairWork& w : work) n_active += w.active;
  if (n_active == 0) return;

  UnitTable units;
  std::vector<double> tbl;
  for (unsigned long c = c_lo; c <= c_hi; ++c) {
    if (c <= 2) {
      for (PairWork& w : work)
        if (w.active)
          w.csum += hc_small(w.m, w.n, c) * bessel_factor(nu, w.x_num / c, w.n > 0);
      continue;
    }
    units.build(c);
    bool use_table = n_active > 1;
    if (use_table) {
      tbl.resize(c);
      double step = kTwoPi / static_cast<double>(c);
      for (unsigned long j = 0; j < c; ++j) tbl[j] = std::cos(step * j);
    }
    for (PairWork& w : work) {
      if (!w.active) continue;
      std::int64_t cc = static_cast<std::int64_t>(c);
      std::int64_t mr = ((w.m % cc) + cc) % cc;
      std::int64_t nr = ((w.n % cc) + cc) % cc;
      double acc = 0.0;
      if (use_table) {
        for (std::size_t i = 0; i < units.d.size(); ++i) {
          std::int64_t j = (nr * units.d[i] - mr * units.dinv[i]) % cc;
          if (j < 0) j += cc;
          acc += tbl[static_cast<std::size_t>(j)];
        }
      } else {
        double step = kTwoPi / static_cast<double>(c);
        for (std::size_t i = 0; i < units.d.size(); ++i) {
          std::int64_t j = (nr * units.d[i] - mr * units.dinv[i]) % cc;
          if (j < 0) j += cc;
          acc += std::cos(step * static_cast<double>(j));
        }
      }
      double h = 2.0 * acc / static_cast<double>(c);
      w.csum += h * bessel_factor(nu, w.x_num / c, w.n > 0);
    }
  }
}

void run_engine(std::vector<PairWork>& work, double s, const BCoeffOptions& opt) {
  unsigned long c_cur = std::max<unsigned long>(opt.c_start, 16);
  for (const PairWork& w : work) {
    double mn = std::sqrt(static_cast<double>(w.m) * std::abs(w.n));
    c_cur = std::max(c_cur, static_cast<unsigned long>(8.0 * kPi * mn) + 1);
  }
  c_cur = std::min(c_cur, opt.c_max);

  unsigned long c_lo = 1;
  for (;;) {
    extend_sums(work, s, c_lo, c_cur);
    bool any_active = false;
    for (PairWork& w : work) {
      if (!w.active) continue;
      w.c_done = c_cur;
      w.tail = csum_tail_bound(w.m, w.n, s, c_cur);
      double value = w.pref * w.csum + w.delta;
      if (w.pref * w.tail <= w.abs_tol + w.rel_tol * std::abs(value))
        w.active = false;
      else
        any_active = true;
    }
    if (!any_active || c_cur >= opt.c_max) break;
    c_lo = c_cur + 1;
    c_cur = std::min(2 * c_cur, opt.c_max);
  }
}

BCoeffResult finish_pair(const PairWork& w, double s, bool throw_on_uncertified) {
  BCoeffResult r;
  r.m = w.m;
  r.n = w.n;
  r.s = s;
  r.value = w.pref * w.csum + w.delta;
  r.c_used = w.c_done;
  r.tail_bound = w.pref * w.tail;
  r.certified = r.tail_bound <= w.abs_tol + w.rel_tol * std::abs(r.value);
  if (!r.certified && throw_on_uncertified) {
    std::ostringstream os;
    os << "b_coeff(" << w.m << ", " << w.n << ", s=" << s
       << "): certified tail bound " << r.tail_bound
       << " still exceeds abs_tol + rel_tol |value| = "
       << w.abs_tol + w.rel_tol * std::abs(r.value) << " at c_max = " << w.c_done;
    throw PrecisionError(os.str());
  }
  return r;
}

void validate_mn(long m, long n, double s) {
  if (m < 1) throw std::invalid_argument("b_coeff: require m >= 1");
  if (n == 0) throw std::invalid_argument("kloosterman_csum: require n != 0");
  if (!(s >= 1.0)) throw std::invalid_argument("b_coeff: require s >= 1");
}

}  // namespace

double kloosterman_double(long m, long n, unsigned long c) {
  if (c == 0) throw std::invalid_argument("kloosterman_double: c >= 1");
  if (c <= 2) return hc_small(m, n, c);
  UnitTable units;
  units.build(c);
  std::int64_t cc = static_cast<std::int64_t>(c);
  std::int64_t mr = ((m % cc) + cc) % cc;
  std::int64_t nr = ((n % cc) + cc) % cc;
  double step = kTwoPi / static_cast<double>(c);
  double acc = 0.0;
  for (std::size_t i = 0; i < units.d.size(); ++i) {
    std::int64_t j = (nr * units.d[i] - mr * units.dinv[i]) % cc;
    if (j < 0) j += cc;
    acc += std::cos(step * static_cast<double>(j));
  }
  return 2.0 * acc / static_cast<double>(c);
}

double kloosterman_csum(long m, long n, double s, unsigned long c_lo,
                        unsigned long c_hi) {
  validate_mn(m, n, s);
  std::vector<PairWork> work(1);
  work[0].m = m;
  work[0].n = n;
  work[0].x_num = 4.0 * kPi * std::sqrt(static_cast<double>(m) * std::abs(n));
  extend_sums(work, s, std::max<unsigned long>(c_lo, 1), c_hi);
  return work[0].csum;
}

double csum_tail_bound(long m, long n, double s, unsigned long c0) {
  double g = static_cast<double>(std::gcd(std::abs(m), std::abs(n)));
  double q = std::sqrt(static_cast<double>(m) * std::abs(n));
  if (static_cast<double>(c0) < 8.0 * kPi * q || c0 == 0) return kInf;
  double nu = 2.0 * s - 1.0;
  double common = std::exp(1.0 / 16.0) * std::pow(2.0 * kPi * q, nu) /
                  std::tgamma(2.0 * s);
  double alpha = 2.0 * s - 0.5;
  double weil = 2.0 * std::sqrt(g) * common * alpha / (alpha - 1.0) *
                (std::log(static_cast<double>(c0)) + 1.0 + 1.0 / (alpha - 1.0)) *
                std::pow(static_cast<double>(c0), 1.0 - alpha);
  if (s > 1.0)
    weil = std::min(weil, common * std::pow(static_cast<double>(c0), 2.0 - 2.0 * s) /
                              (2.0 * s - 2.0));
  return weil;
}

BCoeffResult b_coeff(long m, long n, double s, const BCoeffOptions& opt) {
  if (m < 1) throw std::invalid_argument("b_coeff: require m >= 1");
  if (!(s >= 1.0)) throw std::invalid_argument("b_coeff: require s >= 1");
  if (n == 0) {
    BCoeffResult r;
    r.m = m;
    r.n = 0;
    r.s = s;
    r.value = b0_closed(m, Real::of(s, Prec{96}), Prec{96}).to_double();
    r.c_used = 0;
    r.tail_bound = 0.0;
    r.certified = true;
    return r;
  }
  std::vector<PairWork> work(1);
  work[0].m = m;
  work[0].n = n;
  work[0].abs_tol = opt.abs_tol;
  work[0].rel_tol = opt.rel_tol;
  work[0].delta = (n == -m) ? -1.0 : 0.0;
  work[0].pref = 2.0 * kPi * std::sqrt(static_cast<double>(m) / std::abs(n));
  work[0].x_num = 4.0 * kPi * std::sqrt(static_cast<double>(m) * std::abs(n));
  run_engine(work, s, opt);
  return finish_pair(work[0], s, opt.throw_on_uncertified);
}

std::vector<BCoeffResult> b_coeff_grid(const std::vector<BCoeffRequest>& reqs,
                                       double s, const BCoeffOptions& opt) {
  if (!(s >= 1.0)) throw std::invalid_argument("b_coeff_grid: require s >= 1");
  std::vector<PairWork> work(reqs.size());
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    if (reqs[i].m < 1) throw std::invalid_argument("b_coeff_grid: require m >= 1");
    if (reqs[i].n == 0)
      throw std::invalid_argument("b_coeff_grid: n = 0 entries use b0_closed");
    work[i].m = reqs[i].m;
    work[i].n = reqs[i].n;
    work[i].abs_tol = reqs[i].abs_tol;
    work[i].rel_tol = reqs[i].rel_tol;
    work[i].delta = (reqs[i].n == -reqs[i].m) ? -1.0 : 0.0;
    work[i].pref =
        2.0 * kPi * std::sqrt(static_cast<double>(reqs[i].m) / std::abs(reqs[i].n));
    work[i].x_num =
        4.0 * kPi * std::sqrt(static_cast<double>(reqs[i].m) * std::abs(reqs[i].n));
  }
  run_engine(work, s, opt);
  std::vector<BCoeffResult> out;
  out.reserve(work.size());
  for (const PairWork& w : work)
    out.push_back(finish_pair(w, s, opt.throw_on_uncertified));
  return out;
}

Real b0_closed(long m, const Real& s, Prec prec) {
  if (m < 1) throw std::invalid_argument("b0_closed: require m >= 1");
  Real one = Real::one(prec);
  if (s == one) {
    mpq_class sig = 24 * divisor_sigma_exact(m, 1);
    return Real::of(sig, prec);
  }
  Prec wp{prec.bits + 32};
  Real sw = Real::of(0L, wp) + s;
  Real pi = Real::pi(wp);
  Real two_s1 = 2L * sw - Real::one(wp);
  Real num = 4L * pow(pi, Real::one(wp) + sw) * divisor_sigma(m, two_s1, wp);
  Real den = two_s1 * gamma_fn(sw) * riemann_zeta(2L * sw, wp);
  Real r = num / den;
  return Real::of(0L, prec) + r;
}

Real b0_series(long m, const Real& s, unsigned long c0, Prec prec) {
  if (m < 1) throw std::invalid_argument("b0_series: require m >= 1");
  Prec wp{prec.bits + 32};
  Real sw = Real::of(0L, wp) + s;
  Real pi = Real::pi(wp);
  Real two_s = 2L * sw;
  Real sum = Real::zero(wp);
  for (unsigned long c = 1; c <= c0; ++c) {
    mpz_class rc = ramanujan_sum(m, c);
    if (rc == 0) continue;
    sum += Real::of(mpq_class(rc), wp) * pow(Real::of(static_cast<long>(c), wp), -two_s);
  }
  Real pref = 4L * pow(pi, Real::one(wp) + sw) * pow(Real::of(m, wp), sw) /
              ((two_s - Real::one(wp)) * gamma_fn(sw));
  Real r = pref * sum;
  return Real::of(0L, prec) + r;
}

mpz_class b_exact_s1(long m, long n) {
  if (m < 1) throw std::invalid_argument("b_exact_s1: require m >= 1");
  if (n < 0) return 0;
  if (n == 0) {
    mpq_class sig = 24 * divisor_sigma_exact(m, 1);
    return sig.get_num();  // sigma_m(1) = sigma_1(m) is an integer
  }
  return faber(m, n).coeff(n);
}

FourierEvaluator::FourierEvaluator(long m, double s, long n_lo, long n_hi,
                                   double y_min, double rel_tol, Prec prec,
                                   const BCoeffOptions& base)
    : m_(m),
      s_(s),
      n_lo_(n_lo),
      n_hi_(n_hi),
      prec_(prec),
      s_real_(Real::of(s, prec)),
      b0_(b0_closed(m, Real::of(s, prec), prec)) {
  if (m < 1) throw std::invalid_argument("FourierEvaluator: require m >= 1");
  if (!(s >= 1.0)) throw std::invalid_argument("FourierEvaluator: require s >= 1");
  if (n_lo > n_hi) throw std::invalid_argument("FourierEvaluator: empty n range");
  if (!(y_min > 0) || !(rel_tol > 0))
    throw std::invalid_argument("FourierEvaluator: require y_min, rel_tol > 0");

  bn_.assign(static_cast<std::size_t>(n_hi - n_lo + 1), 0.0);
  std::vector<BCoeffRequest> reqs;
  std::vector<std::size_t> slots;
  long n_count = (n_hi - n_lo + 1) - (n_lo <= 0 && 0 <= n_hi ? 1 : 0);
  // Budget: the total coefficient-truncation error of F for y >= y_min is
  //   sum_n tol_n * cal_K(s, 2 pi |n| y_min) <= rel_tol * exp(2 pi m y_min),
  // spread uniformly across the n_count coefficients.  Both the kernel and
  // the budget shrink as y grows, the kernel faster, so y_min is the worst y.
  double budget = rel_tol * std::exp(kTwoPi * m * y_min) / std::max<long>(n_count, 1);
  for (long n = n_lo; n <= n_hi; ++n) {
    if (n == 0) continue;
    Real arg = Real::of(kTwoPi * std::abs(n) * y_min, prec);
    double kernel = cal_K(s_real_, arg, prec).to_double();
    double tol = budget / std::max(kernel, 1e-300);
    BCoeffRequest rq;
    rq.m = m;
    rq.n = n;
    rq.abs_tol = std::min(tol, 1e290);
    rq.rel_tol = 0.0;
    reqs.push_back(rq);
    slots.push_back(static_cast<std::size_t>(n - n_lo));
  }
  std::vector<BCoeffResult> res = b_coeff_grid(reqs, s, base);
  for (std::size_t i = 0; i < res.size(); ++i) bn_[slots[i]] = res[i].value;
}

double FourierEvaluator::coefficient(long n) const {
  if (n == 0 || n < n_lo_ || n > n_hi_)
    throw std::out_of_range("FourierEvaluator::coefficient: n outside range");
  return bn_[static_cast<std::size_t>(n - n_lo_)];
}

CReal FourierEvaluator::eval(const Real& x, const Real& y) const {
  Prec p = prec_;
  Real two_pi = 2L * Real::pi(p);
  Real xw = Real::of(0L, p) + x;
  Real yw = Real::of(0L, p) + y;

  // Principal part (2 cal_I + cal_K)(2 pi m y) e(-m x).
  Real tm = two_pi * Real::of(m_, p) * yw;
  Real amp = 2L * cal_I(s_real_, tm, p) + cal_K(s_real_, tm, p);
  CReal out = amp * unit_e(Real::of(-m_, p) * xw);

  // Constant term b_m(0, s) y^{1-s}.
  out += CReal{b0_ * pow(yw, Real::one(p) - s_real_), Real::zero(p)};

  // Oscillating terms.
  for (long n = n_lo_; n <= n_hi_; ++n) {
    if (n == 0) continue;
    double bn = bn_[static_cast<std::size_t>(n - n_lo_)];
    if (bn == 0.0) continue;
    Real kern = cal_K(s_real_, two_pi * Real::of(n, p) * yw, p);
    out += (Real::of(bn, p) * kern) * unit_e(Real::of(n, p) * xw);
  }
  return out;
}

CReal eval_F(const CReal& tau, long m, double s, Prec prec, double rel_tol) {
  double y = tau.im.to_double();
  if (!(y >= 1.0)) throw std::invalid_argument("eval_F: require Im(tau) >= 1");
  long n_hi = 4 * m + 2 +
              static_cast<long>(std::ceil((-std::log(rel_tol) + 5.0) / (kTwoPi * y)));
  long n_lo = -(m + 2);
  // Cap the coefficient search: when rel_tol is too tight for this y (the
  // per-coefficient budget scales like e^{2 pi (m + |n|) y}), fail fast with
  // PrecisionError rather than grinding the c-sum towards c_max.  rel_tol of
  // 1e-9 is certifiable for y >= ~2.5; 1e-3 down to y = 1.
  BCoeffOptions base;
  base.c_max = 32768;
  FourierEvaluator ev(m, s, n_lo, n_hi, 0.999 * y, rel_tol, prec, base);
  return ev.eval(tau.re, tau.im);
}

}  // namespace hmf
