#include "lcross/ddp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace lcross {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI(0.0, 1.0);

// Contributions from transition points sharing the lowest imaginary part
// (relative tolerance) are treated as degenerate.
bool same_height(double y0, double y1) { return std::abs(y1 - y0) <= 1e-12 * std::max(1.0, std::abs(y0)); }

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Proximity of the transition points to the detuning's own singularities.
void singularity_warnings(const ModelSpec& m, const std::vector<TransitionPoint>& pts,
                          std::vector<std::string>& warnings) {
  for (const cplx s : singularities(m)) {
    for (const auto& p : pts) {
      if (std::abs(p.tau_c - s) < 1.0) {
        warnings.push_back(fmt("transition point within %.3g of the detuning singularity", std::abs(p.tau_c - s)));
        return;
      }
    }
  }
}

void overshoot_warning(double p, std::vector<std::string>& warnings) {
  if (p > 1.0) warnings.push_back(fmt("coherent-sum probability %.6g exceeds 1 (outside validity range)", p));
}

}  // namespace

std::string_view to_string(DdpBranch b) {
  switch (b) {
    case DdpBranch::SinglePoint: return "single_point";
    case DdpBranch::CoherentSum: return "coherent_sum";
    case DdpBranch::ClosedFormSmallXi: return "closed_form_small_xi";
    case DdpBranch::ClosedFormLargeXi: return "closed_form_large_xi";
    case DdpBranch::SublinearQuadrature: return "sublinear_quadrature";
    case DdpBranch::SublinearSmall: return "sublinear_small";
    case DdpBranch::SublinearLarge: return "sublinear_large";
    case DdpBranch::EssentialSum: return "essential_sum";
    case DdpBranch::PerturbativeUniversal: return "perturbative_universal";
    case DdpBranch::LZExact: return "lz_exact";
  }
  return "unknown";
}

double p_lz(double a) { return std::exp(-kPi * a * a); }

cplx action(const ModelSpec& m, cplx tau_c, double tol) {
  const double c2 = m.coupling() * m.coupling();
  auto energy = [&](cplx z) { return std::sqrt(c2 + detuning_squared(m, z)); };
  // Other quasienergy zeros lying on the open segment are branch points of E;
  // split there so each piece has its singular behavior at an endpoint.  The
  // principal root (Re E >= 0) fixes the side on which they are passed.
  std::vector<double> cuts{0.0, 1.0};
  if (m.kind != ModelKind::AEHTangent) {
    for (const auto& p : transition_points(m)) {
      const double s = std::real(p.tau_c / tau_c);
      const double off = std::abs(p.tau_c - s * tau_c);
      if (s > 1e-12 && s < 1 - 1e-12 && off <= 1e-12 * std::abs(tau_c)) cuts.push_back(s);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cplx total(0);
  for (std::size_t i = 1; i < cuts.size(); ++i)
    total += integrate_segment(energy, cuts[i - 1] * tau_c, cuts[i] * tau_c, 0.5 * tol / (cuts.size() - 1)).value;
  return 2.0 * total;
}

cplx gamma_factor(const ModelSpec& m, cplx tau_c) {
  const double a = m.coupling();
  const auto d = eval_detuning<cplx>(m, tau_c, 1);
  const auto e2 = d * d + cplx(a * a);
  const cplx de2 = e2.derivative(1);
  const cplx dd = d.derivative(1);
  if (std::abs(de2) <= 1e-12 * std::max(1.0, std::abs(a * dd)))
    throw DegenerateZeroError("gamma_factor: d(E^2)/dtau vanishes at the transition point");
  // thetadot = -a Delta' / (2 E^2); E^2 has a simple zero at tau_c
  return 4.0 * kI * (-a * dd) / (2.0 * de2);
}

std::vector<TransitionPoint> resolved_points(const ModelSpec& m, double tol) {
  auto pts = transition_points(m);
  for (auto& p : pts) {
    p.action = action(m, p.tau_c, tol);
    p.gamma = gamma_factor(m, p.tau_c);
  }
  return pts;
}

DdpResult ddp_single(const ModelSpec& m) {
  auto pts = transition_points(m);
  if (pts.size() > 1 && same_height(pts[0].tau_c.imag(), pts[1].tau_c.imag()))
    throw AmbiguityError("ddp_single: several transition points share the lowest imaginary part");
  TransitionPoint p = pts.front();
  p.action = action(m, p.tau_c);
  p.gamma = gamma_factor(m, p.tau_c);
  DdpResult r;
  r.branch = DdpBranch::SinglePoint;
  r.probability = std::exp(-2.0 * p.action.imag());
  r.points_used = {p};
  singularity_warnings(m, r.points_used, r.warnings);
  return r;
}

DdpResult ddp_coherent(const ModelSpec& m, const std::vector<TransitionPoint>& points,
                       PointSelection selection) {
  if (points.empty()) throw std::invalid_argument("ddp_coherent: no transition points");
  DdpResult r;
  r.branch = DdpBranch::CoherentSum;
  double ymin = points.front().tau_c.imag();
  for (const auto& p : points) ymin = std::min(ymin, p.tau_c.imag());
  cplx amp(0);
  for (const auto& p : points) {
    if (selection == PointSelection::LowestOnly && !same_height(ymin, p.tau_c.imag())) continue;
    amp += p.gamma * std::exp(kI * p.action);
    r.points_used.push_back(p);
  }
  r.probability = std::norm(amp);
  overshoot_warning(r.probability, r.warnings);
  singularity_warnings(m, r.points_used, r.warnings);
  return r;
}

DdpResult superlinear_closed_form(const ModelSpec& m) {
  if (m.kind != ModelKind::Superlinear) throw UnsupportedModel("superlinear_closed_form needs a superlinear model");
  const double a = m.a;
  const double xi = superlinear_xi(a, m.eps);
  auto pts = transition_points(m);
  DdpResult r;
  if (std::abs(xi - 1) < 0.1)
    r.warnings.push_back(fmt("xi = %.4g is close to 1: transition points nearly coalesce", xi));

  if (xi <= 1) {
    r.branch = DdpBranch::ClosedFormSmallXi;
    const double f = hyp2f1(0.25, 0.75, 2.0, cplx(xi * xi)).real();
    r.probability = std::exp(-kPi * a * a * f);
    TransitionPoint p = pts.front();
    p.action = kI * (0.5 * kPi * a * a * f);
    p.gamma = -1.0;
    r.points_used = {p};
  } else {
    r.branch = DdpBranch::ClosedFormLargeXi;
    const double w = std::sqrt(xi * xi - 1);
    const double pre = a / xi;
    // tau_c^(+/-) = (i a / xi)(sqrt(1 + xi) +/- i sqrt(xi - 1))
    const cplx tau_plus(-pre * std::sqrt(xi - 1), pre * std::sqrt(1 + xi));
    const cplx tau_minus(-tau_plus.real(), tau_plus.imag());
    const cplx z_plus = (1.0 + kI * w) / (1.0 - kI * w);
    const cplx z_minus = std::conj(z_plus);
    TransitionPoint pp{tau_plus, 0.5 * kPi * a * tau_plus * hyp2f1(0.5, -0.5, 2.0, z_plus), -1.0};
    TransitionPoint pm{tau_minus, 0.5 * kPi * a * tau_minus * hyp2f1(0.5, -0.5, 2.0, z_minus), -1.0};
    const double d_r = pp.action.real();
    const double d_i = pp.action.imag();
    const double c = std::cos(d_r);
    r.probability = 4.0 * std::exp(-2.0 * d_i) * c * c;
    r.points_used = {pm, pp};
    overshoot_warning(r.probability, r.warnings);
    if (1.0 / (m.eps * std::numbers::sqrt2) < tau_plus.imag())
      r.warnings.push_back("detuning singularity lies closer to the real axis than the transition points");
  }
  singularity_warnings(m, r.points_used, r.warnings);
  return r;
}

Estimate superlinear_small_xi_expansion(double a, double eps) {
  Estimate e;
  e.probability = std::exp(-kPi * a * a * (1.0 + 0.75 * a * a * eps * eps));
  const double xi = superlinear_xi(a, eps);
  if (xi > 0.5) e.warnings.push_back(fmt("small-xi expansion used at xi = %.4g > 0.5", xi));
  return e;
}

double sublinear_action(double a, double eps, double tol) {
  const double ae2 = a * a * eps * eps;
  const double yc = a * std::sqrt(1.0 / (std::sqrt(4 * ae2 * ae2 + 1) + 2 * ae2));
  const double e2 = 4 * eps * eps;
  auto integrand = [&](double y) {
    const double v = a * a - y * y / std::sqrt(1.0 - e2 * y * y);
    return v > 0 ? std::sqrt(v) : 0.0;
  };
  return 2.0 * integrate_real(integrand, 0.0, yc, 0.5 * tol).value;
}

double sublinear_small(double a, double eps) { return std::exp(-kPi * a * a * (1.0 - 0.75 * a * a * eps * eps)); }

double sublinear_large(double a, double eps) {
  return std::exp(-2.0 * a / eps + kPi / (16.0 * a * eps * eps * eps));
}

DdpResult sublinear_probability(const ModelSpec& m) {
  if (m.kind != ModelKind::Sublinear) throw UnsupportedModel("sublinear_probability needs a sublinear model");
  DdpResult r;
  r.branch = DdpBranch::SublinearQuadrature;
  const double j = sublinear_action(m.a, m.eps);
  r.probability = std::exp(-2.0 * j);
  TransitionPoint p = transition_points(m).front();
  p.action = kI * j;
  p.gamma = -1.0;
  r.points_used = {p};
  r.alternatives.push_back({DdpBranch::SublinearSmall, sublinear_small(m.a, m.eps)});
  if (m.eps > 0) r.alternatives.push_back({DdpBranch::SublinearLarge, sublinear_large(m.a, m.eps)});
  singularity_warnings(m, r.points_used, r.warnings);
  return r;
}

Estimate perturbative_deviation(double omega, double slope_beta, double gamma_cubic) {
  Estimate e;
  const double b2 = slope_beta * slope_beta;
  const double b6 = b2 * b2 * b2;
  const double o2 = omega * omega;
  e.probability = p_lz(omega / slope_beta) * std::exp(-0.75 * kPi * o2 * o2 * gamma_cubic / (b6 * b2));
  const double validity = std::abs(o2 * gamma_cubic / b6);
  if (validity > 1) e.warnings.push_back(fmt("|Omega^2 Gamma / beta^6| = %.4g exceeds 1", validity));
  return e;
}

double aeh_exact(double A, double B, double T) {
  if (!(A >= 0 && B > 0 && T > 0)) throw std::invalid_argument("aeh_exact: need A >= 0, B > 0, T > 0");
  const double y = kPi * B * T;
  // sech(y) without overflow
  const double sech = 2.0 * std::exp(-y) / (1.0 + std::exp(-2.0 * y));
  if (A < B) {
    const double x = kPi * T * std::sqrt(B * B - A * A);
    const double ratio = std::exp(x - y) * (1.0 + std::exp(-2.0 * x)) / (1.0 + std::exp(-2.0 * y));
    return ratio * ratio;
  }
  const double c = std::cos(kPi * T * std::sqrt(A * A - B * B)) * sech;
  return c * c;
}

double essential_sum(double a, int n_power) {
  if (!(a >= 0)) throw std::invalid_argument("essential_sum: a must be nonnegative");
  const int n = n_power;
  const double eta = 2.0 * nu_constant(n) * std::pow(a, (n + 1.0) / n);
  double bracket = 0;
  for (int k = 1; k <= (n - 1) / 2; ++k) {
    const double phi = kPi * (2 * k - 1) / (2.0 * n);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    bracket += 2.0 * sign * std::exp(-eta * std::sin(phi)) * std::cos(eta * std::cos(phi));
  }
  return bracket + (((n + 1) / 2) % 2 == 0 ? 1.0 : -1.0) * std::exp(-eta);
}

DdpResult essential_closed_form(const ModelSpec& m) {
  if (m.kind != ModelKind::Essential) throw UnsupportedModel("essential_closed_form needs an essential model");
  const int n = m.n_power;
  const double eta = 2.0 * nu_constant(n) * std::pow(m.a, (n + 1.0) / n);
  const double bracket = essential_sum(m.a, n);

  DdpResult r;
  r.branch = DdpBranch::EssentialSum;
  r.probability = bracket * bracket;
  for (auto p : transition_points(m)) {
    const double phi = std::arg(p.tau_c);
    const int k = static_cast<int>(std::lround((phi * 2.0 * n / kPi + 1.0) / 2.0));
    p.action = eta * std::polar(1.0, phi);
    p.gamma = (k % 2 == 0) ? 1.0 : -1.0;
    r.points_used.push_back(p);
  }
  overshoot_warning(r.probability, r.warnings);
  return r;
}

DdpResult ddp_estimate(const ModelSpec& m) {
  switch (m.kind) {
    case ModelKind::LZ: {
      DdpResult r;
      r.branch = DdpBranch::LZExact;
      r.probability = p_lz(m.a);
      r.points_used = transition_points(m);
      r.points_used.front().action = kI * (0.5 * kPi * m.a * m.a);
      r.points_used.front().gamma = -1.0;
      return r;
    }
    case ModelKind::Superlinear:
      return superlinear_closed_form(m);
    case ModelKind::Sublinear:
      return sublinear_probability(m);
    case ModelKind::Essential:
      return essential_closed_form(m);
    case ModelKind::AEHTangent: {
      const double beta = std::sqrt(m.aeh_B / m.aeh_T);
      const double gamma = m.aeh_B / (3.0 * m.aeh_T * m.aeh_T * m.aeh_T);
      Estimate e = perturbative_deviation(m.aeh_A, beta, gamma);
      DdpResult r;
      r.branch = DdpBranch::PerturbativeUniversal;
      r.probability = e.probability;
      r.warnings = std::move(e.warnings);
      return r;
    }
  }
  throw UnsupportedModel("unknown model kind");
}

std::optional<double> asymptotic_estimate(const ModelSpec& m) {
  switch (m.kind) {
    case ModelKind::Superlinear:
      return superlinear_small_xi_expansion(m.a, m.eps).probability;
    case ModelKind::Sublinear:
      if (m.eps == 0 || std::numbers::sqrt2 * m.a * m.eps <= 1) return sublinear_small(m.a, m.eps);
      return sublinear_large(m.a, m.eps);
    case ModelKind::AEHTangent:
      return ddp_estimate(m).probability;
    default:
      return std::nullopt;
  }
}

}  // namespace lcross
