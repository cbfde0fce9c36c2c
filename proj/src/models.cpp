#include "lcross/models.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace lcross {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::LZ: return "lz";
    case ModelKind::Superlinear: return "superlinear";
    case ModelKind::Sublinear: return "sublinear";
    case ModelKind::Essential: return "essential";
    case ModelKind::AEHTangent: return "aeh";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (auto k : {ModelKind::LZ, ModelKind::Superlinear, ModelKind::Sublinear, ModelKind::Essential,
                 ModelKind::AEHTangent})
    if (name == to_string(k)) return k;
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

ModelSpec ModelSpec::lz(double a) {
  ModelSpec m;
  m.kind = ModelKind::LZ;
  m.a = a;
  m.validate();
  return m;
}

ModelSpec ModelSpec::superlinear(double a, double eps) {
  ModelSpec m;
  m.kind = ModelKind::Superlinear;
  m.a = a;
  m.eps = eps;
  m.validate();
  return m;
}

ModelSpec ModelSpec::sublinear(double a, double eps) {
  ModelSpec m;
  m.kind = ModelKind::Sublinear;
  m.a = a;
  m.eps = eps;
  m.validate();
  return m;
}

ModelSpec ModelSpec::essential(double a, int n_power) {
  ModelSpec m;
  m.kind = ModelKind::Essential;
  m.a = a;
  m.n_power = n_power;
  m.validate();
  return m;
}

ModelSpec ModelSpec::aeh_tangent(double A, double B, double T) {
  ModelSpec m;
  m.kind = ModelKind::AEHTangent;
  m.aeh_A = A;
  m.aeh_B = B;
  m.aeh_T = T;
  m.a = A * std::sqrt(T / B);
  m.validate();
  return m;
}

ModelSpec ModelSpec::from_physical(double omega, double beta, double gamma_cubic) {
  if (!(beta > 0)) throw std::invalid_argument("slope parameter beta must be positive");
  const double a = omega / beta;
  const double eps = std::sqrt(std::abs(gamma_cubic)) / (beta * beta);
  if (gamma_cubic > 0) return superlinear(a, eps);
  if (gamma_cubic < 0) return sublinear(a, eps);
  return lz(a);
}

double ModelSpec::domain_limit() const {
  return kind == ModelKind::AEHTangent ? 0.5 * kPi * aeh_T : std::numeric_limits<double>::infinity();
}

void ModelSpec::validate() const {
  if (kind == ModelKind::AEHTangent) {
    if (!(aeh_A > 0 && aeh_B > 0 && aeh_T > 0))
      throw std::invalid_argument("tangent model needs A, B, T > 0");
    return;
  }
  if (!(a > 0) || !std::isfinite(a)) throw std::invalid_argument("coupling a must be positive");
  if (!(eps >= 0) || !std::isfinite(eps)) throw std::invalid_argument("nonlinearity eps must be >= 0");
  if (kind == ModelKind::Essential && (n_power < 3 || n_power % 2 == 0))
    throw std::invalid_argument("essential model needs an odd power N >= 3");
}

std::string ModelSpec::id() const { return std::string(to_string(kind)); }

double quasienergy(const ModelSpec& m, double tau) {
  const double c = m.coupling();
  return std::sqrt(c * c + detuning_squared(m, tau));
}

std::vector<TransitionPoint> transition_points(const ModelSpec& m) {
  std::vector<TransitionPoint> pts;
  const double a = m.a;
  switch (m.kind) {
    case ModelKind::LZ:
      pts.push_back({cplx(0, a)});
      break;
    case ModelKind::Superlinear: {
      const double xi = superlinear_xi(a, m.eps);
      if (xi == 0) {
        pts.push_back({cplx(0, a)});
        break;
      }
      const double pre = a / xi;
      const double up = std::sqrt(1 + xi);
      if (xi <= 1) {
        const double dn = std::sqrt(1 - xi);
        // (a/xi)(up - dn) = 2a / (up + dn)
        pts.push_back({cplx(0, 2 * a / (up + dn))});
        pts.push_back({cplx(0, pre * (up + dn))});
      } else {
        // sqrt(1 - xi) = i sqrt(xi - 1): equal imaginary parts, mirrored real parts
        const double re = pre * std::sqrt(xi - 1);
        pts.push_back({cplx(re, pre * up)});
        pts.push_back({cplx(-re, pre * up)});
      }
      break;
    }
    case ModelKind::Sublinear: {
      const double ae2 = a * a * m.eps * m.eps;
      // sqrt(4 a^4 eps^4 + 1) - 2 a^2 eps^2, written without cancellation
      const double inner = 1.0 / (std::sqrt(4 * ae2 * ae2 + 1) + 2 * ae2);
      pts.push_back({cplx(0, a * std::sqrt(inner))});
      break;
    }
    case ModelKind::Essential: {
      const int n = m.n_power;
      const double r = std::pow(a, 1.0 / n);
      for (int k = 1; k <= (n + 1) / 2; ++k) {
        const double phi = kPi * (2 * k - 1) / (2.0 * n);
        const double im = r * std::sin(phi);
        if (2 * k - 1 == n) {
          pts.push_back({cplx(0, r)});
        } else {
          const double re = r * std::cos(phi);
          pts.push_back({cplx(re, im)});
          pts.push_back({cplx(-re, im)});
        }
      }
      break;
    }
    case ModelKind::AEHTangent:
      throw UnsupportedModel("transition points of the tangent model are not computed");
  }
  std::stable_sort(pts.begin(), pts.end(), [](const TransitionPoint& x, const TransitionPoint& y) {
    if (x.tau_c.imag() != y.tau_c.imag()) return x.tau_c.imag() < y.tau_c.imag();
    return std::arg(x.tau_c) < std::arg(y.tau_c);
  });
  return pts;
}

std::vector<cplx> singularities(const ModelSpec& m) {
  if (m.eps == 0) return {};
  switch (m.kind) {
    case ModelKind::Superlinear:
      return {cplx(0, 1.0 / (m.eps * std::numbers::sqrt2))};
    case ModelKind::Sublinear:
      return {cplx(0, 1.0 / (2 * m.eps))};
    default:
      return {};
  }
}

}  // namespace lcross
