#include "lcross/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lcross {

namespace {

constexpr long kMaxTerms = 1'000'000;
constexpr double kTermRatio = 1e-16;
constexpr double kTailScale = 128.0;
constexpr int kTailDiffs = 10;

bool nonpositive_integer(double x) { return x <= 0 && x == std::floor(x); }

// Sum_{k>=K} c_k z^k from c_K..c_{K+m} by repeated summation by parts,
//   T(c) = (c_K z^K + z T(diff c)) / (1 - z).
cplx abel_tail(std::vector<double> c, cplx zk, cplx z) {
  const cplx w = 1.0 / (1.0 - z);
  cplx tail(0), scale = zk * w;
  double last = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < c.size(); ++j) {
    // asymptotic in 1 / (k |1 - z|): stop at the smallest contribution
    const cplx step = c[0] * scale;
    if (!(std::abs(step) < last)) break;
    last = std::abs(step);
    tail += step;
    for (std::size_t i = 0; i + 1 < c.size() - j; ++i) c[i] = c[i + 1] - c[i];
    scale *= z * w;
  }
  return tail;
}

double recip_gamma(double x) { return nonpositive_integer(x) ? 0.0 : 1.0 / std::tgamma(x); }

}  // namespace

cplx hyp2f1(const HypParams& hp) {
  const double p = hp.p, q = hp.q, r = hp.r;
  const cplx z = hp.z;
  if (nonpositive_integer(r)) throw std::invalid_argument("hyp2f1: r is a nonpositive integer");
  const double az = std::abs(z);
  const double excess = r - p - q;
  if (az > 1.0 + 1e-14) throw ConvergenceError("hyp2f1: |z| > 1 is outside the series domain");
  const bool on_circle = az > 1.0 - 1e-14;
  if (on_circle && !(excess > 0))
    throw ConvergenceError("hyp2f1: series diverges on |z| = 1 unless r - p - q > 0");
  if (z == cplx(1.0))  // Gauss summation theorem
    return std::tgamma(r) * std::tgamma(excess) * recip_gamma(r - p) * recip_gamma(r - q);

  // Once k |1 - z| is large the coefficients are smooth on the scale of the
  // oscillation and the remaining tail follows from a few differences.
  const double dist = std::abs(1.0 - z);
  const double tail_start = az > 0.5 ? std::min(kTailScale / dist, kMaxTerms - 1.0) : kMaxTerms;

  // Kahan-compensated sum of c_k z^k, c_k = (p)_k (q)_k / ((r)_k k!)
  cplx sum(1.0), comp(0.0), zk(1.0);
  double c = 1.0;
  int small_run = 0;
  for (long k = 0; k < kMaxTerms; ++k) {
    const double ratio = ((p + k) * (q + k)) / ((r + k) * (k + 1.0));
    c *= ratio;
    zk *= z;
    if (c == 0) return sum - comp;  // terminating series
    if (k + 1 >= tail_start) {
      std::vector<double> cs{c};
      for (int j = 1; j <= kTailDiffs; ++j) {
        const long kk = k + j;
        cs.push_back(cs.back() * ((p + kk) * (q + kk)) / ((r + kk) * (kk + 1.0)));
      }
      return sum + (abel_tail(std::move(cs), zk, z) - comp);
    }
    const cplx term = c * zk;
    const cplx y = term - comp;
    const cplx t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    // the geometric bound term / (1 - rho) stands in for the unsummed tail;
    // two consecutive hits guard against an accidental tiny term
    const double rho = std::abs(ratio) * az;
    small_run = rho < 1 && std::abs(term) < kTermRatio * (1 - rho) * std::abs(sum) ? small_run + 1 : 0;
    if (small_run >= 2) return sum;
  }
  throw ConvergenceError("hyp2f1: term cap reached");
}

double beta_function(double x, double y) {
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

double nu_constant(int n_power) {
  if (n_power < 1 || n_power % 2 == 0) throw std::invalid_argument("nu_constant: N must be odd and >= 1");
  const double s = 1.0 / (2.0 * n_power);
  return std::tgamma(s) * std::tgamma(1.5) / std::tgamma(s + 1.5) * s;
}

}  // namespace lcross
