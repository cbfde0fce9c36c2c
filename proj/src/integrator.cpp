#include "lcross/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lcross/errors.hpp"

namespace lcross {

namespace {

using Vec = Eigen::Vector2cd;
constexpr std::complex<double> kI(0.0, 1.0);

Vec rhs(const HamiltonianEntries& h, const Vec& b) {
  // i db/dtau = [[-delta, omega], [omega, delta]] b
  return Vec(-kI * (-h.delta * b(0) + h.omega * b(1)), -kI * (h.omega * b(0) + h.delta * b(1)));
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

/**
 * Adaptive DOPRI5 with PI step control.  The step is additionally capped at
 * a fraction of the local period pi / sqrt(delta^2 + omega^2).  `observe` is
 * called after every accepted step with (tau, b) and may request a stop.
 */
template <typename Ham, typename Observer>
void drive(const Ham& ham, double t0, double t1, Vec& b, const IntegratorConfig& cfg, Observer&& observe,
           long* step_count = nullptr) {
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  double t = t0;
  HamiltonianEntries h0 = ham(t);
  Vec k1 = rhs(h0, b);
  auto cap = [&](const HamiltonianEntries& h) {
    const double freq = std::hypot(h.delta, h.omega);
    return std::min(cfg.max_step, cfg.period_fraction * std::numbers::pi / std::max(freq, 1e-300));
  };
  double h = std::min(cap(h0), 1e-3);
  double err_prev = 1e-4;
  long steps = 0;
  const double h_min = 1e-15 * std::max(1.0, std::max(std::abs(t0), std::abs(t1)));

  while (dir * (t1 - t) > 0) {
    h = std::min(h, cap(h0));
    bool last = false;
    if (h >= dir * (t1 - t)) {
      h = dir * (t1 - t);
      last = true;
    }
    if (h < h_min && !last) throw StepUnderflow("step size underflow");
    const double hs = dir * h;
    const Vec k2 = rhs(ham(t + c2 * hs), b + hs * (a21 * k1));
    const Vec k3 = rhs(ham(t + c3 * hs), b + hs * (a31 * k1 + a32 * k2));
    const Vec k4 = rhs(ham(t + c4 * hs), b + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = rhs(ham(t + c5 * hs), b + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 = rhs(ham(t + hs), b + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec y = b + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const double t_new = last ? t1 : t + hs;
    const HamiltonianEntries h_new = ham(t_new);
    const Vec k7 = rhs(h_new, y);
    const Vec err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double norm = 0;
    for (int i = 0; i < 2; ++i) {
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(b(i)), std::abs(y(i)));
      norm += std::norm(err(i) / sc);
    }
    norm = std::sqrt(norm / 2);

    if (norm <= 1.0) {
      b = y;
      t = t_new;
      k1 = k7;
      h0 = h_new;
      ++steps;
      const double e = std::max(norm, 1e-10);
      const double fac = 0.9 * std::pow(e, -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
      err_prev = e;
      h *= std::clamp(fac, 0.2, 5.0);
      if (observe(t, b)) break;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(norm, -0.2));
    }
  }
  if (step_count) *step_count = steps;
}

// Scale of the transition region on the positive real axis: the largest
// transition-point modulus.
double transition_scale(const ModelSpec& m) {
  if (m.kind == ModelKind::AEHTangent) return m.aeh_T * std::atan(m.aeh_A / m.aeh_B);
  double s = 0;
  for (const auto& p : transition_points(m)) s = std::max(s, std::abs(p.tau_c));
  return s;
}

}  // namespace

ParityClass parity_for_order(int order_n) {
  if (order_n < 0) throw std::invalid_argument("SA order must be >= 0");
  if (order_n == 0) return ParityClass::EvenOdd;
  return order_n % 2 == 1 ? ParityClass::EvenEven : ParityClass::OddEven;
}

SaFrame::SaFrame(ModelSpec model, int order_n) : model_(std::move(model)), order_(order_n) {
  model_.validate();
  if (order_n < 0 || order_n > kDefaultJetOrder)
    throw std::out_of_range("SA order exceeds the available jet order");
}

std::pair<Jet<double>, Jet<double>> SaFrame::jets(double tau, int extra) const {
  const int k = order_ + extra;
  if (extra < 0 || k > kDefaultJetOrder) throw std::out_of_range("insufficient jet order for SA frame");
  auto delta = eval_detuning<double>(model_, tau, k);
  auto omega = eval_coupling<double>(model_, tau, k);
  for (int level = 0; level < order_; ++level) std::tie(delta, omega) = sa_step(delta, omega);
  return {delta, omega};
}

HamiltonianEntries SaFrame::operator()(double tau) const {
  const auto [d, o] = jets(tau, 0);
  return {d.value(), o.value()};
}

SaFrame build_sa_frame(const ModelSpec& model, int order_n) { return SaFrame(model, order_n); }

double sa_tail_exponent(const ModelSpec& m, int n) {
  double growth = 1.0;
  switch (m.kind) {
    case ModelKind::LZ: growth = 1.0; break;
    case ModelKind::Superlinear: growth = m.eps > 0 ? 2.0 : 1.0; break;
    case ModelKind::Sublinear: growth = m.eps > 0 ? 0.5 : 1.0; break;
    case ModelKind::Essential: growth = m.n_power; break;
    case ModelKind::AEHTangent: throw UnsupportedModel("tangent model has no large-tau tail");
  }
  return n + (n + 1) * growth;
}

void IntegratorConfig::validate() const {
  if (sa_order < 0 || sa_order > 5) throw std::invalid_argument("sa_order must lie in [0, 5]");
  if (!(rel_tol > 0 && abs_tol > 0)) throw std::invalid_argument("tolerances must be positive");
  if (!(convergence_ratio > 0 && convergence_ratio < 1))
    throw std::invalid_argument("convergence_ratio must lie in (0, 1)");
  if (!(max_time > 0)) throw std::invalid_argument("max_time must be positive");
  if (cross_check_order && (*cross_check_order < 0 || *cross_check_order > 5))
    throw std::invalid_argument("cross_check_order must lie in [0, 5]");
}

Reconstruction reconstruct_full(std::complex<double> b1, std::complex<double> b2, ParityClass parity) {
  const double norm = std::norm(b1) + std::norm(b2);
  if (std::abs(norm - 1.0) > 1e-8) throw std::invalid_argument("reconstruct_full: fundamental solution not normalized");
  Reconstruction r;
  switch (parity) {
    case ParityClass::EvenEven:
      r.u11 = b1 * b1 + std::conj(b2) * std::conj(b2);
      r.u12 = 2.0 * kI * (b1 * b2).imag();
      break;
    case ParityClass::EvenOdd:
      r.u11 = std::norm(b1) - std::norm(b2);
      r.u12 = -2.0 * b1 * std::conj(b2);
      break;
    case ParityClass::OddEven:
      r.u11 = b1 * b1 - std::conj(b2) * std::conj(b2);
      r.u12 = -2.0 * (b1 * b2).real();
      break;
    case ParityClass::OddOdd:
      r.u11 = 1.0;
      r.u12 = 0.0;
      break;
  }
  r.probability = parity == ParityClass::EvenOdd ? std::norm(r.u11) : std::norm(r.u12);
  return r;
}

Eigen::Matrix2cd evolution_matrix(const Reconstruction& r) {
  Eigen::Matrix2cd u;
  u << r.u11, r.u12, -std::conj(r.u12), std::conj(r.u11);
  return u;
}

PropagationResult propagate_half_axis(const ModelSpec& model, const IntegratorConfig& cfg) {
  cfg.validate();
  const SaFrame frame(model, cfg.sa_order);
  const ParityClass parity = parity_for_order(cfg.sa_order);
  const double t_min = transition_scale(model);
  const double t_end = std::min(cfg.max_time, model.domain_limit() * (1 - 1e-9));

  PropagationResult res;
  res.sa_order = cfg.sa_order;
  Vec b(1.0, 0.0);

  // Rolling window of the monitored probability for extremum detection.
  double t_prev2 = 0, t_prev = 0, p_prev2 = 0, p_prev = 0;
  int seen = 0;
  int extrema_past = 0;
  // flat-run guard: no resolvable oscillation over many steps
  constexpr int kFlatWindow = 64;
  std::vector<double> window;
  window.reserve(kFlatWindow);

  auto observe = [&](double t, const Vec& y) {
    const double p = reconstruct_full(y(0), y(1), parity).probability;
    if (seen >= 2) {
      const double d1 = p_prev - p_prev2, d2 = p - p_prev;
      if ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) {
        // vertex of the parabola through the last three samples
        const double h1 = t_prev - t_prev2, h2 = t - t_prev;
        const double s1 = d1 / h1, s2 = d2 / h2;
        const double curv = (s2 - s1) / (h1 + h2);
        double tv = t_prev, pv = p_prev;
        if (curv != 0) {
          const double slope_mid = s1 + curv * h1;  // slope at t_prev
          const double dt = -slope_mid / (2 * curv);
          if (std::abs(dt) <= std::max(h1, h2)) {
            tv = t_prev + dt;
            pv = p_prev + slope_mid * dt + curv * dt * dt;
          }
        }
        res.extrema.push_back({tv, pv});
        if (tv > t_min) ++extrema_past;
      }
    }
    t_prev2 = t_prev;
    p_prev2 = p_prev;
    t_prev = t;
    p_prev = p;
    ++seen;

    const double target = cfg.convergence_ratio * p;
    const std::size_t ne = res.extrema.size();
    if (extrema_past >= cfg.min_extrema && ne >= 3) {
      // the drift since the last extremum guards against transients that mimic a settled tail
      const double span = std::max({std::abs(res.extrema[ne - 1].value - res.extrema[ne - 2].value),
                                    std::abs(res.extrema[ne - 2].value - res.extrema[ne - 3].value),
                                    std::abs(p - res.extrema[ne - 1].value)});
      res.osc_amplitude = span;
      if (span < target) return true;
    }
    if (t > t_min) {
      window.push_back(p);
      if (static_cast<int>(window.size()) > kFlatWindow) window.erase(window.begin());
      if (static_cast<int>(window.size()) == kFlatWindow) {
        const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
        // fewer than two extrema inside a full window means no oscillation is resolved
        if (*hi - *lo < 1e-2 * target) {
          res.osc_amplitude = *hi - *lo;
          return true;
        }
      }
    }
    return false;
  };

  double t_stop = 0;
  bool stopped = false;
  auto observe_and_record = [&](double t, const Vec& y) {
    t_stop = t;
    stopped = observe(t, y);
    return stopped;
  };
  drive(frame, 0.0, t_end, b, cfg, observe_and_record, &res.steps);

  res.b1 = b(0);
  res.b2 = b(1);
  res.stop_time = t_stop;
  res.converged = stopped;
  // renormalize away the integrator's drift before applying the symmetry relations
  const double n = std::sqrt(std::norm(b(0)) + std::norm(b(1)));
  const Reconstruction rec = reconstruct_full(b(0) / n, b(1) / n, parity);
  res.u11 = rec.u11;
  res.u12 = rec.u12;
  res.probability = rec.probability;
  return res;
}

namespace {

// Near-degenerate couplings make high SA orders singular at the origin
// (Omega_n ~ a^-n); step down one order at a time until the frame is resolvable.
PropagationResult propagate_stepping_down(const ModelSpec& model, IntegratorConfig cfg) {
  for (;;) {
    try {
      return propagate_half_axis(model, cfg);
    } catch (const StepUnderflow&) {
      if (cfg.sa_order == 0) throw;
      --cfg.sa_order;
    }
  }
}

}  // namespace

PropagationResult solve(const ModelSpec& model, const IntegratorConfig& cfg) {
  PropagationResult main = propagate_stepping_down(model, cfg);
  if (cfg.cross_check_order && *cfg.cross_check_order != main.sa_order) {
    IntegratorConfig other = cfg;
    other.sa_order = *cfg.cross_check_order;
    const PropagationResult cross = propagate_stepping_down(model, other);
    main.cross_probability = cross.probability;
    main.cross_order_gap = std::abs(main.probability - cross.probability);
  }
  return main;
}

Eigen::Vector2cd integrate_direct(const Hamiltonian& h, double tau_from, double tau_to,
                                  const Eigen::Vector2cd& initial, const IntegratorConfig& cfg) {
  Vec b = initial;
  drive(h, tau_from, tau_to, b, cfg, [](double, const Vec&) { return false; });
  return b;
}

Eigen::Vector2cd integrate_direct(const ModelSpec& model, int sa_order, double tau_from, double tau_to,
                                  const Eigen::Vector2cd& initial, const IntegratorConfig& cfg) {
  const SaFrame frame(model, sa_order);
  return integrate_direct(Hamiltonian(frame), tau_from, tau_to, initial, cfg);
}

std::optional<double> envelope_decay_power(const std::vector<Extremum>& extrema, double tau_lo, double tau_hi,
                                           double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 1; i < extrema.size(); ++i) {
    const double tau = 0.5 * (extrema[i].tau + extrema[i - 1].tau);
    if (tau < tau_lo || tau > tau_hi) continue;
    const double span = std::abs(extrema[i].value - extrema[i - 1].value);
    if (!(span > floor)) continue;
    const double x = std::log(tau), y = std::log(span);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) return std::nullopt;
  const double denom = n * sxx - sx * sx;
  if (denom == 0) return std::nullopt;
  return -(n * sxy - sx * sy) / denom;
}

}  // namespace lcross
