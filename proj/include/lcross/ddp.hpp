#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcross/models.hpp"
#include "lcross/specfun.hpp"

namespace lcross {

enum class DdpBranch {
  SinglePoint,
  CoherentSum,
  ClosedFormSmallXi,
  ClosedFormLargeXi,
  SublinearQuadrature,
  SublinearSmall,
  SublinearLarge,
  EssentialSum,
  PerturbativeUniversal,
  LZExact,
};

std::string_view to_string(DdpBranch b);

/// A secondary estimate reported next to the main DDP value.
struct DdpAlternative {
  DdpBranch branch;
  double probability;
};

struct DdpResult {
  double probability = 0;
  DdpBranch branch = DdpBranch::SinglePoint;
  std::vector<std::string> warnings;
  std::vector<TransitionPoint> points_used;
  std::vector<DdpAlternative> alternatives;
};

/// Probability with validity warnings, for formulas that are not tied to a
/// transition-point set.
struct Estimate {
  double probability = 0;
  std::vector<std::string> warnings;
};

enum class PointSelection { All, LowestOnly };

/// exp(-pi a^2).
double p_lz(double a);

/// D(tau_c) = 2 int_0^tau_c E(tau) dtau along the straight segment.
cplx action(const ModelSpec& m, cplx tau_c, double tol = kDefaultQuadTol);

/// Residue factor 4i lim (tau - tau_c) thetadot(tau) for constant coupling,
/// evaluated from a complex jet of Delta at tau_c.
cplx gamma_factor(const ModelSpec& m, cplx tau_c);

/// transition_points() with action and gamma filled in.
std::vector<TransitionPoint> resolved_points(const ModelSpec& m, double tol = kDefaultQuadTol);

/// exp(-2 Im D) from the lowest transition point alone.
DdpResult ddp_single(const ModelSpec& m);

/// |sum_k Gamma_k exp(i D_k)|^2 over `points` (or only those sharing the
/// lowest imaginary part).  Reported raw, with a warning when above 1.
DdpResult ddp_coherent(const ModelSpec& m, const std::vector<TransitionPoint>& points,
                       PointSelection selection = PointSelection::All);

/// Hypergeometric closed forms: xi <= 1 single point, xi > 1 two-point
/// interference 4 exp(-2 D_i) cos^2 D_r.
DdpResult superlinear_closed_form(const ModelSpec& m);

/// exp(-pi a^2 (1 + 3/4 a^2 eps^2)); warns for xi > 0.5.
Estimate superlinear_small_xi_expansion(double a, double eps);

/// exp(-2J) by quadrature, with both asymptotic branches as alternatives.
DdpResult sublinear_probability(const ModelSpec& m);

/// The sublinear action integral J = 2 int_0^y_c sqrt(a^2 - y^2 / sqrt(1 - 4 eps^2 y^2)) dy.
double sublinear_action(double a, double eps, double tol = kDefaultQuadTol);

/// Small / large a*eps asymptotics of the sublinear model.
double sublinear_small(double a, double eps);
double sublinear_large(double a, double eps);

/// P_LZ exp(-(3/4) pi Omega^4 Gamma / beta^8) in physical units.
Estimate perturbative_deviation(double omega, double slope_beta, double gamma_cubic);

/// Exact probability of the Allen-Eberly-Hioe class (cosh -> cos for A > B).
double aeh_exact(double A, double B, double T);

/// Signed amplitude of the essential-model coherent sum; its square is the
/// probability.  Accepts a = 0 (bracket -1 for N = 3).
double essential_sum(double a, int n_power);

/// Closed-form coherent sum for Delta = tau^N.
DdpResult essential_closed_form(const ModelSpec& m);

/// Model-appropriate DDP estimate: LZ exact, superlinear/essential closed
/// forms, sublinear quadrature.
DdpResult ddp_estimate(const ModelSpec& m);

/// Asymptotic formula used for the p_asymptotic column (none for LZ/essential).
std::optional<double> asymptotic_estimate(const ModelSpec& m);

}  // namespace lcross
