#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lcross/jet.hpp"
#include "lcross/models.hpp"

namespace lcross {

/// Parity of (coupling, detuning) under tau -> -tau.
enum class ParityClass { EvenEven, EvenOdd, OddEven, OddOdd };

/// Parity class of the order-n SA basis for an odd detuning and constant
/// coupling: n = 0 (even, odd); odd n (even, even); even n >= 2 (odd, even).
ParityClass parity_for_order(int order_n);

/// One level of the SA recursion on jets; the result has one order less.
///   Delta' = sqrt(Omega^2 + Delta^2)
///   Omega' = (Omega_dot Delta - Omega Delta_dot) / (2 Delta'^2)
template <typename S, int M>
std::pair<Jet<S, M>, Jet<S, M>> sa_step(const Jet<S, M>& delta, const Jet<S, M>& omega) {
  const Jet<S, M> next_delta = sqrt(omega * omega + delta * delta);
  const int k = std::min(delta.order(), omega.order()) - 1;
  const Jet<S, M> d = next_delta.truncated(k);
  const Jet<S, M> next_omega =
      (omega.differentiate() * delta.truncated(k) - omega.truncated(k) * delta.differentiate()) /
      (S(2) * d * d);
  return {d, next_omega};
}

/// Diagonal and off-diagonal entries of H = [[-delta, omega], [omega, delta]].
struct HamiltonianEntries {
  double delta = 0;
  double omega = 0;
};

using Hamiltonian = std::function<HamiltonianEntries(double)>;

/**
 * Order-n superadiabatic frame of a model.  Order 0 is the diabatic basis,
 * order 1 the adiabatic basis (Delta_1 = E, Omega_1 = thetadot).  Evaluation
 * propagates model jets of order n + extra through n recursion levels.
 */
class SaFrame {
 public:
  SaFrame(ModelSpec model, int order_n);

  int order() const { return order_; }
  const ModelSpec& model() const { return model_; }

  /// Delta_n, Omega_n and their first `extra` derivatives at tau.
  std::pair<Jet<double>, Jet<double>> jets(double tau, int extra = 0) const;

  HamiltonianEntries operator()(double tau) const;

 private:
  ModelSpec model_;
  int order_;
};

/// Throws std::out_of_range when order_n exceeds the jet budget.
SaFrame build_sa_frame(const ModelSpec& model, int order_n);

/// Predicted decay power of the SA-basis oscillation amplitude,
/// n + (n + 1) * (large-tau growth power of Delta).
double sa_tail_exponent(const ModelSpec& model, int order_n);

struct IntegratorConfig {
  int sa_order = 3;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double convergence_ratio = 1e-4;
  double max_time = 1e4;
  std::optional<int> cross_check_order = 2;
  /// Step cap as a fraction of the local oscillation period pi / E_n.
  double period_fraction = 0.1;
  double max_step = 0.5;
  /// Minimum number of envelope extrema past the transition region.
  int min_extrema = 3;

  void validate() const;
};

/// A local extremum of the monitored probability during propagation.
struct Extremum {
  double tau;
  double value;
};

struct PropagationResult {
  std::complex<double> b1, b2;
  std::complex<double> u11, u12;
  double probability = 0;
  double stop_time = 0;
  double osc_amplitude = 0;
  int sa_order = 0;
  bool converged = false;
  long steps = 0;
  std::vector<Extremum> extrema;
  /// |P - P_cross| from the cross-check order, when requested.
  std::optional<double> cross_order_gap;
  std::optional<double> cross_probability;
};

struct Reconstruction {
  std::complex<double> u11, u12;
  double probability = 0;
};

/// U(t, -t) from the half-axis fundamental solutions b1, b2 (b1(0) = 1,
/// b2(0) = 0) for a Hamiltonian of the given parity class, and the probability
/// for nonadiabatic transitions: |U11|^2 in the diabatic (even, odd) class,
/// |U12|^2 otherwise.  Throws std::invalid_argument for non-normalized input.
Reconstruction reconstruct_full(std::complex<double> b1, std::complex<double> b2, ParityClass parity);

/// Full SU(2) matrix [[u11, u12], [-u12*, u11*]].
Eigen::Matrix2cd evolution_matrix(const Reconstruction& r);

/// Half-axis propagation in the cfg.sa_order basis from tau = 0 until the
/// probability envelope has converged (or max_time is reached, with
/// converged = false).
PropagationResult propagate_half_axis(const ModelSpec& model, const IntegratorConfig& cfg = {});

/// propagate_half_axis plus the optional cross-order repeat.  A frame whose
/// step size underflows is retried one order lower; sa_order in the result is
/// the order actually used.
PropagationResult solve(const ModelSpec& model, const IntegratorConfig& cfg = {});

/// Plain adaptive Runge-Kutta solution of i db/dtau = H(tau) b from tau_from to tau_to.
Eigen::Vector2cd integrate_direct(const Hamiltonian& h, double tau_from, double tau_to,
                                  const Eigen::Vector2cd& initial, const IntegratorConfig& cfg = {});

/// integrate_direct in the order-n SA basis of a model.
Eigen::Vector2cd integrate_direct(const ModelSpec& model, int sa_order, double tau_from, double tau_to,
                                  const Eigen::Vector2cd& initial, const IntegratorConfig& cfg = {});

/// Least-squares slope of log(peak-to-trough span) against log(tau) over the
/// extrema in [tau_lo, tau_hi], ignoring spans below `floor`.  Returns the
/// decay power (positive for a decaying envelope) or nullopt with < 3 spans.
std::optional<double> envelope_decay_power(const std::vector<Extremum>& extrema, double tau_lo,
                                           double tau_hi, double floor = 0.0);

}  // namespace lcross
