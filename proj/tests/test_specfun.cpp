#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "lcross/specfun.hpp"

using namespace lcross;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

using mp = boost::multiprecision::cpp_bin_float_50;
constexpr double kPi = std::numbers::pi;

// Plain Gauss series in 50-digit arithmetic.
cplx series_oracle(double p, double q, double r, cplx z, int terms = 10000) {
  mp sr = 1, si = 0, tr = 1, ti = 0;
  const mp zr = z.real(), zi = z.imag();
  for (int k = 0; k < terms; ++k) {
    const mp f = (mp(p) + k) * (mp(q) + k) / ((mp(r) + k) * (k + 1));
    const mp nr = (tr * zr - ti * zi) * f;
    const mp ni = (tr * zi + ti * zr) * f;
    tr = nr;
    ti = ni;
    sr += tr;
    si += ti;
  }
  return {static_cast<double>(sr), static_cast<double>(si)};
}

// Euler integral F = G(r) / (G(q) G(r-q)) int_0^1 t^(q-1) (1-t)^(r-q-1) (1-zt)^(-p) dt.
cplx euler_oracle(double p, double q, double r, cplx z) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto integrand = [&](double t, bool imag) {
    const cplx v = std::pow(t, q - 1) * std::pow(1 - t, r - q - 1) * std::pow(1.0 - z * t, -p);
    return imag ? v.imag() : v.real();
  };
  const double re = ts.integrate([&](double t) { return integrand(t, false); }, 0.0, 1.0);
  const double im = ts.integrate([&](double t) { return integrand(t, true); }, 0.0, 1.0);
  return std::tgamma(r) / (std::tgamma(q) * std::tgamma(r - q)) * cplx(re, im);
}

bool close(cplx a, cplx b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("hyp2f1 examples") {
  CHECK(hyp2f1(0.25, 0.75, 2.0, 0.0) == cplx(1.0));
  CHECK_THAT(hyp2f1(0.5, -0.5, 2.0, 1.0).real(), WithinRel(8.0 / (3.0 * kPi), 1e-14));
  CHECK_THAT(hyp2f1(0.25, 0.75, 2.0, 1.0).real(), WithinRel(1.0 / (std::tgamma(1.75) * std::tgamma(1.25)), 1e-14));
  const cplx v = hyp2f1(0.25, 0.75, 2.0, 0.5);
  CHECK(close(v, series_oracle(0.25, 0.75, 2.0, 0.5), 1e-13));
}

TEST_CASE("hyp2f1 matches the extended-precision series inside the disk") {
  for (auto [p, q] : {std::pair{0.25, 0.75}, std::pair{0.5, -0.5}}) {
    for (double x : {0.0, 0.25, -0.25, 0.5, -0.5, 0.9, -0.9}) {
      INFO("p = " << p << " z = " << x);
      CHECK(close(hyp2f1(p, q, 2.0, x), series_oracle(p, q, 2.0, x), 1e-12));
    }
    for (cplx z : {cplx(0.3, 0.4), cplx(-0.6, 0.6), cplx(0.1, -0.85)})
      CHECK(close(hyp2f1(p, q, 2.0, z), series_oracle(p, q, 2.0, z), 1e-12));
  }
}

TEST_CASE("hyp2f1 on the unit circle matches the Euler integral") {
  for (auto [p, q] : {std::pair{0.75, 0.25}, std::pair{-0.5, 0.5}}) {
    for (double theta : {0.3, 1.0, kPi / 2, 2.0, 3.0, kPi}) {
      const cplx z = std::polar(1.0, theta);
      INFO("p = " << p << " theta = " << theta);
      CHECK(close(hyp2f1(p, q, 2.0, z), euler_oracle(p, q, 2.0, z), 1e-12));
    }
  }
}

TEST_CASE("hyp2f1 close to z = 1 stays accurate") {
  for (double x : {0.99, 0.999, 0.99999, 1.0}) {
    INFO("z = " << x);
    CHECK(close(hyp2f1(0.25, 0.75, 2.0, x), euler_oracle(0.75, 0.25, 2.0, x), 1e-12));
    CHECK(close(hyp2f1(0.5, -0.5, 2.0, x), euler_oracle(-0.5, 0.5, 2.0, x), 1e-12));
  }
}

TEST_CASE("hyp2f1 is symmetric in its numerator parameters") {
  for (cplx z : {cplx(0.5), cplx(-0.9), cplx(0.2, 0.7), std::polar(1.0, 2.5)}) {
    CHECK(hyp2f1(0.25, 0.75, 2.0, z) == hyp2f1(0.75, 0.25, 2.0, z));
    CHECK(hyp2f1(0.5, -0.5, 2.0, z) == hyp2f1(-0.5, 0.5, 2.0, z));
  }
}

TEST_CASE("hyp2f1 domain errors") {
  CHECK_THROWS_AS(hyp2f1(0.5, 0.5, 2.0, 1.5), ConvergenceError);
  CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 2.0, std::polar(1.0, 1.0)), ConvergenceError);
  CHECK_THROWS_AS(hyp2f1(0.5, 0.5, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(hyp2f1(0.5, 0.5, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("nu constants") {
  CHECK_THAT(nu_constant(1), WithinRel(kPi / 4, 1e-14));
  CHECK(std::round(nu_constant(1) * 1000) == 785);
  CHECK(std::round(nu_constant(3) * 1000) == 911);
  CHECK(std::round(nu_constant(5) * 1000) == 944);
  CHECK(std::round(nu_constant(7) * 1000) == 959);
  for (int n : {1, 3, 5, 7, 9}) {
    const double s = 1.0 / (2 * n);
    CHECK_THAT(nu_constant(n), WithinRel(beta_function(s, 1.5) * s, 1e-12));
    auto f = [n](double x) { return std::sqrt(1 - std::pow(x, 2 * n)); };
    CHECK_THAT(nu_constant(n), WithinAbs(integrate_real(f, 0.0, 1.0, 1e-14).value, 1e-12));
    boost::math::quadrature::tanh_sinh<double> ts;
    CHECK_THAT(nu_constant(n), WithinAbs(ts.integrate(f, 0.0, 1.0), 1e-12));
  }
  CHECK_THROWS_AS(nu_constant(2), std::invalid_argument);
}

TEST_CASE("real quadrature examples") {
  const auto q = integrate_real([](double x) { return std::sqrt(1 - x * x); }, 0.0, 1.0, 1e-12);
  CHECK_THAT(q.value, WithinAbs(kPi / 4, 1e-12));
  CHECK(q.abs_error_estimate >= 0);
  CHECK(q.evaluations >= 1);
  const auto nu3 = integrate_real([](double x) { return std::sqrt(1 - std::pow(x, 6)); }, 0.0, 1.0);
  CHECK_THAT(nu3.value, WithinAbs(nu_constant(3), 1e-12));
}

TEST_CASE("sublinear action integrand against a long-double midpoint rule") {
  const double a = 1.0, eps = 0.25;
  const double ae2 = a * a * eps * eps;
  const double yc = a * std::sqrt(std::sqrt(4 * ae2 * ae2 + 1) - 2 * ae2);
  auto f = [&](double y) {
    const double v = a * a - y * y / std::sqrt(1 - 4 * eps * eps * y * y);
    return v > 0 ? std::sqrt(v) : 0.0;
  };
  const double value = integrate_real(f, 0.0, yc).value;

  // y = yc (1 - u^2) turns the square-root endpoint into a smooth integrand
  const long n = 1000000;
  long double sum = 0;
  const long double lyc = yc;
  for (long i = 0; i < n; ++i) {
    const long double u = (i + 0.5L) / n;
    const long double y = lyc * (1 - u * u);
    const long double v = a * a - y * y / std::sqrt(1 - 4.0L * eps * eps * y * y);
    sum += (v > 0 ? std::sqrt(v) : 0.0L) * 2 * lyc * u;
  }
  CHECK_THAT(value, WithinRel(static_cast<double>(sum / n), 1e-10));
}

TEST_CASE("segment quadrature examples") {
  const auto one = integrate_segment([](cplx) { return cplx(1.0); }, cplx(0), cplx(0, 1));
  CHECK(std::abs(one.value - cplx(0, 1)) < 1e-14);
  const auto half = integrate_segment([](cplx z) { return std::sqrt(1.0 + z * z); }, cplx(0), cplx(0, 1), 1e-12);
  CHECK(std::abs(half.value - cplx(0, kPi / 4)) < 1e-12);
  const cplx tc = std::polar(1.0, kPi / 6);
  const auto ess = integrate_segment([](cplx z) { return std::sqrt(1.0 + std::pow(z, 6)); }, cplx(0), tc, 1e-13);
  const cplx expect = nu_constant(3) * std::polar(1.0, kPi / 6);
  CHECK(std::abs(ess.value - expect) <= 1e-10 * std::abs(expect));
}

TEST_CASE("segment integrals along the imaginary axis follow parity") {
  // even real-analytic f: f(iy) real, so the integral is purely imaginary
  for (double y : {0.5, 1.0, 2.0}) {
    const auto even = integrate_segment([](cplx z) { return std::cos(z) + z * z; }, cplx(0), cplx(0, y));
    CHECK(std::abs(even.value.real()) < 1e-13);
    const auto odd = integrate_segment([](cplx z) { return std::sin(z) + z * z * z; }, cplx(0), cplx(0, y));
    CHECK(std::abs(odd.value.imag()) < 1e-13);
  }
}

TEST_CASE("quadrature error estimates are conservative") {
  struct Case {
    double (*f)(double);
    double lo, hi, exact;
  };
  const Case battery[] = {
      {[](double x) { return std::exp(x); }, 0, 1, std::numbers::e - 1},
      {[](double x) { return 1 / (1 + x * x); }, 0, 1, kPi / 4},
      {[](double x) { return std::cos(x); }, 0, 2, std::sin(2.0)},
      {[](double x) { return std::sqrt(x); }, 0, 1, 2.0 / 3},
      {[](double x) { return 1 / std::sqrt(x); }, 0, 1, 2.0},
      {[](double x) { return std::log(1 + x); }, 0, 1, 2 * std::log(2.0) - 1},
      {[](double x) { return 1 / (1 + 25 * x * x); }, -1, 1, 0.4 * std::atan(5.0)},
      {[](double x) { return std::pow(x, 7); }, 0, 2, 32.0},
      {[](double x) { return std::sin(kPi * x) * std::sin(kPi * x); }, 0, 3, 1.5},
      {[](double x) { return std::exp(-x * x); }, -3, 3, std::sqrt(kPi) * std::erf(3.0)},
      {[](double x) { return std::log(x); }, 0, 1, -1.0},
      {[](double x) { return x * std::sqrt(1 - x * x); }, 0, 1, 1.0 / 3},
  };
  int total = 0, within = 0;
  for (auto rule : {QuadratureRule::TanhSinh, QuadratureRule::GaussKronrod}) {
    for (const auto& c : battery) {
      for (double tol : {1e-6, 1e-10}) {
        const auto r = integrate_real(c.f, c.lo, c.hi, tol, rule);
        const double err = std::abs(r.value - c.exact);
        const double est = std::max(r.abs_error_estimate, 1e-15 * std::abs(c.exact));
        ++total;
        if (err <= est) ++within;
        INFO("exact " << c.exact << " tol " << tol);
        CHECK(err <= 10 * est);
      }
    }
  }
  CHECK(within >= 0.95 * total);
}

TEST_CASE("quadrature failure attaches the best estimate") {
  try {
    integrate_real([](double x) { return 1 / x; }, 0.0, 1.0, 1e-12);
    FAIL("expected a QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.best.evaluations > 0);
  }
}
