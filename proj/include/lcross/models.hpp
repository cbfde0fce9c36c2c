#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "lcross/errors.hpp"
#include "lcross/jet.hpp"

namespace lcross {

using cplx = std::complex<double>;

enum class ModelKind { LZ, Superlinear, Sublinear, Essential, AEHTangent };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

/**
 * A two-state crossing model in dimensionless form: constant coupling and an
 * odd detuning of the scaled time tau = beta t.
 *
 *   LZ           Delta = tau
 *   Superlinear  Delta = tau sqrt(1 + 2 eps^2 tau^2)
 *   Sublinear    Delta = tau / (1 + 4 eps^2 tau^2)^(1/4)
 *   Essential    Delta = tau^N, N odd >= 3
 *   AEHTangent   Omega = A, Delta = B tan(tau / T), |tau| < pi T / 2
 *
 * The tangent model is kept in its own time unit; its `a` is the equivalent
 * dimensionless coupling A sqrt(T / B).
 */
struct ModelSpec {
  ModelKind kind = ModelKind::LZ;
  double a = 1.0;
  double eps = 0.0;
  int n_power = 3;
  double aeh_A = 0.0;
  double aeh_B = 0.0;
  double aeh_T = 0.0;

  static ModelSpec lz(double a);
  static ModelSpec superlinear(double a, double eps);
  static ModelSpec sublinear(double a, double eps);
  static ModelSpec essential(double a, int n_power);
  static ModelSpec aeh_tangent(double A, double B, double T);

  /// Physical parameters Omega, beta, and cubic coefficient Gamma of
  /// Delta = beta^2 t + Gamma t^3: Gamma > 0 maps to Superlinear, Gamma < 0 to
  /// Sublinear, Gamma = 0 to LZ.
  static ModelSpec from_physical(double omega, double beta, double gamma_cubic);

  /// Coupling in the model's own time unit (A for the tangent model).
  double coupling() const { return kind == ModelKind::AEHTangent ? aeh_A : a; }

  /// Right end of the real domain (pi T / 2 for the tangent model).
  double domain_limit() const;

  /// Throws std::invalid_argument when a field violates the kind's invariants.
  void validate() const;

  /// Short identifier used in output rows, e.g. "superlinear".
  std::string id() const;
};

template <typename Scalar>
using ModelJet = Jet<Scalar, kDefaultJetOrder>;

/// Detuning Delta(tau) and its first `order` derivatives.
template <typename Scalar>
ModelJet<Scalar> eval_detuning(const ModelSpec& m, Scalar tau, int order) {
  using J = ModelJet<Scalar>;
  const J t = J::variable(tau, order);
  switch (m.kind) {
    case ModelKind::LZ:
      return t;
    case ModelKind::Superlinear:
      return t * sqrt(Scalar(1) + Scalar(2 * m.eps * m.eps) * t * t);
    case ModelKind::Sublinear:
      return t * pow(Scalar(1) + Scalar(4 * m.eps * m.eps) * t * t, -0.25);
    case ModelKind::Essential:
      return ipow(t, static_cast<unsigned>(m.n_power));
    case ModelKind::AEHTangent: {
      using std::abs;
      using std::real;
      if (std::abs(real(tau)) >= m.domain_limit())
        throw DomainError("tangent detuning evaluated at or beyond its pole");
      return Scalar(m.aeh_B) * tan(t / Scalar(m.aeh_T));
    }
  }
  throw UnsupportedModel("unknown model kind");
}

/// Coupling Omega(tau): a constant jet for every kind in scope.
template <typename Scalar>
ModelJet<Scalar> eval_coupling(const ModelSpec& m, Scalar /*tau*/, int order) {
  return ModelJet<Scalar>(order, Scalar(m.coupling()));
}

/// Delta(tau)^2 without going through the branch of Delta itself.
template <typename Scalar>
Scalar detuning_squared(const ModelSpec& m, Scalar tau) {
  using std::sqrt;
  const Scalar t2 = tau * tau;
  switch (m.kind) {
    case ModelKind::LZ:
      return t2;
    case ModelKind::Superlinear:
      return t2 * (Scalar(1) + Scalar(2 * m.eps * m.eps) * t2);
    case ModelKind::Sublinear:
      return t2 / sqrt(Scalar(1) + Scalar(4 * m.eps * m.eps) * t2);
    case ModelKind::Essential: {
      Scalar r(1);
      for (int i = 0; i < m.n_power; ++i) r *= t2;
      return r;
    }
    case ModelKind::AEHTangent: {
      const Scalar d = eval_detuning<Scalar>(m, tau, 0).value();
      return d * d;
    }
  }
  throw UnsupportedModel("unknown model kind");
}

/// Quasienergy E(tau) = sqrt(a^2 + Delta^2) on the real axis.
double quasienergy(const ModelSpec& m, double tau);

/// Quasienergy zero in the upper half-plane.  `action` and `gamma` are filled
/// by the DDP layer.
struct TransitionPoint {
  cplx tau_c;
  cplx action{};
  cplx gamma{};
};

/// All upper-half-plane zeros of the quasienergy, ordered by ascending
/// imaginary part, ties broken by ascending argument.  Throws UnsupportedModel
/// for the tangent model.
std::vector<TransitionPoint> transition_points(const ModelSpec& m);

/// Branch points / poles of Delta in the upper half-plane.
std::vector<cplx> singularities(const ModelSpec& m);

/// xi = 2 sqrt(2) a eps, the superlinear branch parameter.
inline double superlinear_xi(double a, double eps) { return 2.0 * std::numbers::sqrt2 * a * eps; }

}  // namespace lcross
