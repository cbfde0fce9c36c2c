#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <type_traits>

namespace lcross {

/// Default truncation order of model jets.  Order 3 SA frames need four levels
/// (value + three derivatives), leaving headroom for diagnostic derivatives.
inline constexpr int kDefaultJetOrder = 7;

/**
 * Truncated Taylor series of a function at a point.
 *
 * Coefficients are stored normalized, c[k] = f^(k)(t0) / k!, which keeps the
 * product and composition rules free of binomial factors.  Use derivative(k)
 * to read the k-th derivative itself.  The order is a runtime quantity bounded
 * by MaxOrder; binary operations truncate to the smaller order of the operands.
 *
 * Scalar may be real or complex.  Complex jets are what the transition-point
 * residues are evaluated with.
 */
template <typename Scalar, int MaxOrder = kDefaultJetOrder>
class Jet {
  static_assert(MaxOrder >= 0);

 public:
  using scalar_type = Scalar;
  static constexpr int max_order = MaxOrder;

  Jet() = default;

  /// Constant jet of the given order.
  explicit Jet(int order, Scalar value = Scalar(0)) : order_(checked(order)) {
    c_.fill(Scalar(0));
    c_[0] = value;
  }

  /// The independent variable expanded at t0: t0 + (t - t0).
  static Jet variable(Scalar t0, int order) {
    Jet j(order, t0);
    if (order >= 1) j.c_[1] = Scalar(1);
    return j;
  }

  /// Build from derivatives f, f', f'', ... (converted to Taylor coefficients).
  template <typename Range>
  static Jet from_derivatives(const Range& derivs) {
    const int n = static_cast<int>(std::size(derivs)) - 1;
    Jet j(n);
    double fact = 1.0;
    int k = 0;
    for (const auto& d : derivs) {
      if (k > 0) fact *= k;
      j.c_[k] = Scalar(d) / fact;
      ++k;
    }
    return j;
  }

  int order() const { return order_; }
  Scalar value() const { return c_[0]; }
  Scalar coeff(int k) const { return k <= order_ ? c_[k] : Scalar(0); }
  Scalar& coeff(int k) { return c_[k]; }

  Scalar derivative(int k) const {
    if (k > order_) return Scalar(0);
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c_[k] * fact;
  }

  /// d/dt of the series; one order is consumed.
  Jet differentiate() const {
    if (order_ == 0) throw std::domain_error("cannot differentiate an order-0 jet");
    Jet d(order_ - 1);
    for (int k = 0; k < order_; ++k) d.c_[k] = c_[k + 1] * Scalar(k + 1);
    return d;
  }

  Jet truncated(int order) const {
    Jet j(std::min(order, order_));
    for (int k = 0; k <= j.order_; ++k) j.c_[k] = c_[k];
    return j;
  }

  Jet operator-() const {
    Jet r(order_);
    for (int k = 0; k <= order_; ++k) r.c_[k] = -c_[k];
    return r;
  }

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(const Jet& x, const Jet& y) {
    Jet r(std::min(x.order_, y.order_));
    for (int k = 0; k <= r.order_; ++k) r.c_[k] = x.c_[k] + y.c_[k];
    return r;
  }
  friend Jet operator-(const Jet& x, const Jet& y) {
    Jet r(std::min(x.order_, y.order_));
    for (int k = 0; k <= r.order_; ++k) r.c_[k] = x.c_[k] - y.c_[k];
    return r;
  }
  // Cauchy product
  friend Jet operator*(const Jet& x, const Jet& y) {
    Jet r(std::min(x.order_, y.order_));
    for (int k = 0; k <= r.order_; ++k) {
      Scalar s(0);
      for (int j = 0; j <= k; ++j) s += x.c_[j] * y.c_[k - j];
      r.c_[k] = s;
    }
    return r;
  }
  friend Jet operator/(const Jet& x, const Jet& y) {
    Jet q(std::min(x.order_, y.order_));
    for (int k = 0; k <= q.order_; ++k) {
      Scalar s = x.c_[k];
      for (int j = 1; j <= k; ++j) s -= y.c_[j] * q.c_[k - j];
      q.c_[k] = s / y.c_[0];
    }
    return q;
  }

  friend Jet operator+(const Jet& x, Scalar s) { Jet r = x; r.c_[0] += s; return r; }
  friend Jet operator+(Scalar s, const Jet& x) { return x + s; }
  friend Jet operator-(const Jet& x, Scalar s) { Jet r = x; r.c_[0] -= s; return r; }
  friend Jet operator-(Scalar s, const Jet& x) { return -x + s; }
  friend Jet operator*(const Jet& x, Scalar s) {
    Jet r = x;
    for (int k = 0; k <= r.order_; ++k) r.c_[k] *= s;
    return r;
  }
  friend Jet operator*(Scalar s, const Jet& x) { return x * s; }
  friend Jet operator/(const Jet& x, Scalar s) {
    Jet r = x;
    for (int k = 0; k <= r.order_; ++k) r.c_[k] /= s;
    return r;
  }
  friend Jet operator/(Scalar s, const Jet& x) { return Jet(x.order_, s) / x; }

 private:
  static int checked(int order) {
    if (order < 0 || order > MaxOrder) throw std::out_of_range("jet order outside [0, MaxOrder]");
    return order;
  }

  int order_ = 0;
  std::array<Scalar, MaxOrder + 1> c_{};
};

// Elementary functions.  Each uses the standard first-order recurrence obtained
// by differentiating the defining identity (e.g. y' = y x' for y = exp x).

template <typename S, int M>
Jet<S, M> exp(const Jet<S, M>& x) {
  Jet<S, M> y(x.order());
  using std::exp;
  y.coeff(0) = exp(x.value());
  for (int k = 1; k <= x.order(); ++k) {
    S s(0);
    for (int j = 1; j <= k; ++j) s += S(j) * x.coeff(j) * y.coeff(k - j);
    y.coeff(k) = s / S(k);
  }
  return y;
}

template <typename S, int M>
Jet<S, M> log(const Jet<S, M>& x) {
  Jet<S, M> y(x.order());
  using std::log;
  y.coeff(0) = log(x.value());
  for (int k = 1; k <= x.order(); ++k) {
    S s(0);
    for (int j = 1; j < k; ++j) s += S(j) * y.coeff(j) * x.coeff(k - j);
    y.coeff(k) = (x.coeff(k) - s / S(k)) / x.value();
  }
  return y;
}

/// Principal-branch power x^alpha; requires x(t0) != 0.
template <typename S, int M>
Jet<S, M> pow(const Jet<S, M>& x, double alpha) {
  Jet<S, M> y(x.order());
  using std::pow;
  y.coeff(0) = pow(x.value(), alpha);
  for (int k = 1; k <= x.order(); ++k) {
    S s(0);
    for (int j = 1; j <= k; ++j) s += S((alpha + 1.0) * j - k) * x.coeff(j) * y.coeff(k - j);
    y.coeff(k) = s / (S(k) * x.value());
  }
  return y;
}

/// Principal square root; requires x(t0) != 0 beyond order 0.
template <typename S, int M>
Jet<S, M> sqrt(const Jet<S, M>& x) {
  Jet<S, M> y(x.order());
  using std::sqrt;
  y.coeff(0) = sqrt(x.value());
  for (int k = 1; k <= x.order(); ++k) {
    S s = x.coeff(k);
    for (int j = 1; j < k; ++j) s -= y.coeff(j) * y.coeff(k - j);
    y.coeff(k) = s / (S(2) * y.coeff(0));
  }
  return y;
}

/// Integer power by repeated squaring; valid at x(t0) = 0.
template <typename S, int M>
Jet<S, M> ipow(Jet<S, M> x, unsigned n) {
  Jet<S, M> r(x.order(), S(1));
  while (n > 0) {
    if (n & 1u) r = r * x;
    n >>= 1u;
    if (n > 0) x = x * x;
  }
  return r;
}

template <typename S, int M>
void sincos(const Jet<S, M>& x, Jet<S, M>& sn, Jet<S, M>& cs) {
  using std::cos;
  using std::sin;
  sn = Jet<S, M>(x.order(), sin(x.value()));
  cs = Jet<S, M>(x.order(), cos(x.value()));
  for (int k = 1; k <= x.order(); ++k) {
    S a(0), b(0);
    for (int j = 1; j <= k; ++j) {
      a += S(j) * x.coeff(j) * cs.coeff(k - j);
      b += S(j) * x.coeff(j) * sn.coeff(k - j);
    }
    sn.coeff(k) = a / S(k);
    cs.coeff(k) = -b / S(k);
  }
}

template <typename S, int M>
Jet<S, M> sin(const Jet<S, M>& x) {
  Jet<S, M> s, c;
  sincos(x, s, c);
  return s;
}

template <typename S, int M>
Jet<S, M> cos(const Jet<S, M>& x) {
  Jet<S, M> s, c;
  sincos(x, s, c);
  return c;
}

template <typename S, int M>
Jet<S, M> tan(const Jet<S, M>& x) {
  Jet<S, M> s, c;
  sincos(x, s, c);
  return s / c;
}

}  // namespace lcross
