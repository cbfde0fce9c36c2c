#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "lcross/errors.hpp"

namespace lcross {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Gauss hypergeometric function

/// Real parameters p, q, r and complex argument z of F(p, q; r; z).
struct HypParams {
  double p = 0;
  double q = 0;
  double r = 1;
  cplx z{};
};

/// Gauss series with compensated summation.  Valid for |z| < 1, and on |z| = 1
/// when r - p - q > 0.  Throws ConvergenceError for |z| > 1 and
/// std::invalid_argument when r is a nonpositive integer.
cplx hyp2f1(const HypParams& params);

inline cplx hyp2f1(double p, double q, double r, cplx z) { return hyp2f1(HypParams{p, q, r, z}); }

/// nu_N = int_0^1 sqrt(1 - x^(2N)) dx = B(1/(2N), 3/2) / (2N).
double nu_constant(int n_power);

/// Euler beta function via log-gamma.
double beta_function(double x, double y);

// ---------------------------------------------------------------------------
// Quadrature

template <typename T>
struct QuadratureResult {
  T value{};
  double abs_error_estimate = 0;
  int evaluations = 0;
};

/// Refinement budget exhausted; `best` holds the last estimate.
class QuadratureError : public ConvergenceError {
 public:
  QuadratureError(const std::string& what, QuadratureResult<cplx> best)
      : ConvergenceError(what), best(best) {}
  QuadratureResult<cplx> best;
};

enum class QuadratureRule { TanhSinh, GaussKronrod };

inline constexpr double kDefaultQuadTol = 1e-12;

namespace detail {

template <typename T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <typename T>
QuadratureResult<cplx> as_complex(const QuadratureResult<T>& r) {
  return {cplx(r.value), r.abs_error_estimate, r.evaluations};
}

/**
 * Double-exponential rule on [lo, hi].  Abscissae are generated as offsets
 * from the nearer endpoint so integrable endpoint singularities at `lo` are
 * resolved down to ~1e-300 from the endpoint.  Levels halve the step; the
 * difference between successive levels is the error estimate.
 */
template <typename F, typename T = std::invoke_result_t<F, double>>
QuadratureResult<T> tanh_sinh(F&& f, double lo, double hi, double tol, int max_level = 12) {
  constexpr double half_pi = 1.5707963267948966;
  constexpr double t_max = 6.5;
  const double c = 0.5 * (lo + hi);
  const double hw = 0.5 * (hi - lo);
  QuadratureResult<T> res;
  if (hw == 0) {
    res.evaluations = 1;
    return res;
  }

  double abs_sum = 0;
  // Sum over nodes t = k h (k odd beyond level 0), returns sum of w f.
  auto node_sum = [&](double h, bool odd_only) {
    T s{};
    const int kmax = static_cast<int>(t_max / h);
    for (int k = odd_only ? 1 : 0; k <= kmax; k += odd_only ? 2 : 1) {
      const double t = k * h;
      const double u = half_pi * std::sinh(t);
      const double ch = std::cosh(u);
      const double w = half_pi * std::cosh(t) / (ch * ch);
      // distance from the endpoint, as a fraction of the half width
      const double comp = 2.0 / (1.0 + std::exp(2.0 * u));
      if (!(w > 0) || comp == 0) break;
      const double d = hw * comp;
      const double xr = hi - d;
      const double xl = lo + d;
      if (k == 0) {
        const T fv = f(c);
        ++res.evaluations;
        s += w * fv;
        abs_sum += w * magnitude(fv);
        continue;
      }
      bool any = false;
      if (xr != hi && xr > c) {
        const T fv = f(xr);
        ++res.evaluations;
        s += w * fv;
        abs_sum += w * magnitude(fv);
        any = true;
      }
      if (xl != lo && xl < c) {
        const T fv = f(xl);
        ++res.evaluations;
        s += w * fv;
        abs_sum += w * magnitude(fv);
        any = true;
      }
      if (!any) break;
    }
    return s;
  };

  double h = 1.0;
  T sum = node_sum(h, false);
  T prev = hw * h * sum;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    sum += node_sum(h, true);
    const T cur = hw * h * sum;
    const double diff = magnitude(cur - prev);
    const double noise = 64 * std::numeric_limits<double>::epsilon() * std::abs(hw) * h * abs_sum;
    res.value = cur;
    res.abs_error_estimate = std::max(diff, noise);
    if (level >= 3 && diff <= std::max(tol, noise)) return res;
    prev = cur;
  }
  throw QuadratureError("tanh-sinh quadrature: maximum refinement level reached", as_complex(res));
}

// 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F, typename T>
void kronrod_panel(F& f, double a, double b, T& k15, double& err, double& abs_k, int& evals) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  const T fc = f(c);
  k15 = kKronrodWeights[7] * fc;
  T g7 = kGaussWeights[3] * fc;
  abs_k = kKronrodWeights[7] * magnitude(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = hw * kKronrodNodes[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    k15 += kKronrodWeights[j] * (f1 + f2);
    abs_k += kKronrodWeights[j] * (magnitude(f1) + magnitude(f2));
    if (j % 2 == 1) g7 += kGaussWeights[j / 2] * (f1 + f2);
  }
  evals += 15;
  k15 *= hw;
  g7 *= hw;
  abs_k *= std::abs(hw);
  err = magnitude(k15 - g7);
}

/// Adaptive Gauss-Kronrod (7/15) with global bisection of the worst panel.
template <typename F, typename T = std::invoke_result_t<F, double>>
QuadratureResult<T> gauss_kronrod(F&& f, double lo, double hi, double tol, int max_panels = 4000) {
  struct Panel {
    double a, b;
    T value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  QuadratureResult<T> res;
  std::priority_queue<Panel> heap;
  T total{};
  double total_err = 0;
  double abs_total = 0;
  {
    Panel p{lo, hi, T{}, 0};
    double ak;
    kronrod_panel(f, lo, hi, p.value, p.err, ak, res.evaluations);
    abs_total = ak;
    total = p.value;
    total_err = p.err;
    heap.push(p);
  }
  while (true) {
    const double noise = 64 * std::numeric_limits<double>::epsilon() * abs_total;
    if (total_err <= std::max(tol, noise)) break;
    if (static_cast<int>(heap.size()) >= max_panels) {
      res.value = total;
      res.abs_error_estimate = total_err;
      throw QuadratureError("Gauss-Kronrod quadrature: panel budget exhausted", as_complex(res));
    }
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel l{worst.a, mid, T{}, 0}, r{mid, worst.b, T{}, 0};
    double al, ar;
    kronrod_panel(f, l.a, l.b, l.value, l.err, al, res.evaluations);
    kronrod_panel(f, r.a, r.b, r.value, r.err, ar, res.evaluations);
    total += l.value + r.value - worst.value;
    total_err += l.err + r.err - worst.err;
    heap.push(l);
    heap.push(r);
  }
  // re-sum to shed accumulated cancellation in the running total
  T sum{};
  double err = 0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().err;
    heap.pop();
  }
  res.value = sum;
  res.abs_error_estimate = err;
  return res;
}

}  // namespace detail

/// Integral of f over [lo, hi].  The tanh-sinh default tolerates algebraic
/// endpoint behavior; Gauss-Kronrod is the smooth-integrand fallback.
template <typename F>
auto integrate_real(F&& f, double lo, double hi, double tol = kDefaultQuadTol,
                    QuadratureRule rule = QuadratureRule::TanhSinh) {
  if (!(tol > 0)) throw std::invalid_argument("quadrature tolerance must be positive");
  if (rule == QuadratureRule::GaussKronrod) return detail::gauss_kronrod(f, lo, hi, tol);
  return detail::tanh_sinh(f, lo, hi, tol);
}

/// Contour integral of f along the straight segment z0 -> z1.
template <typename F>
QuadratureResult<cplx> integrate_segment(F&& f, cplx z0, cplx z1, double tol = kDefaultQuadTol,
                                         QuadratureRule rule = QuadratureRule::TanhSinh) {
  const cplx dz = z1 - z0;
  auto g = [&](double s) -> cplx { return f(z0 + dz * s) * dz; };
  return integrate_real(g, 0.0, 1.0, tol, rule);
}

}  // namespace lcross
