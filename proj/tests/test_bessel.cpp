#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fracdiff/bessel.hpp"
#include "fracdiff/errors.hpp"
#include "fracdiff/problem.hpp"

using namespace fracdiff;

namespace {
constexpr double kPi = std::numbers::pi;

double k_half_closed(double z) { return std::sqrt(0.5 * kPi / z) * std::exp(-z); }

// centered 5-point derivative with one Richardson step
double fd_derivative(const std::function<double(double)>& f, double x,
                     double h) {
  auto d = [&](double hh) {
    return (f(x - 2 * hh) - 8 * f(x - hh) + 8 * f(x + hh) - f(x + 2 * hh)) /
           (12.0 * hh);
  };
  const double d1 = d(h), d2 = d(0.5 * h);
  return (16.0 * d2 - d1) / 15.0;
}
}  // namespace

TEST_CASE("K_{1/2} closed form") {
  for (double z = 0.01; z <= 50.0; z *= 1.37) {
    const double got = bessel_k(0.5, z);
    CHECK(std::abs(got - k_half_closed(z)) <= 1e-11 * k_half_closed(z));
  }
  CHECK(bessel_k(0.5, 4.0) ==
        doctest::Approx(std::sqrt(kPi / 8.0) * std::exp(-4.0)).epsilon(1e-12));
}

TEST_CASE("reference values (mpmath, 25 digits)") {
  struct Ref {
    double nu, z, value;
  };
  const std::vector<Ref> refs = {
      {0.25, 1.0, 0.43073977444858552},   {0.75, 3.0, 0.037696423405926791},
      {0.25, 0.01, 6.1657412641392401},   {0.9, 10.0, 1.8480604344102188e-5},
      {1.25, 0.5, 2.2520661411497987},    {1.5, 4.0, 0.014347030720760067},
      {0.1, 0.2, 1.7722259156803253},     {0.6, 25.0, 3.4887105200719595e-12}};
  for (const auto& r : refs) {
    CHECK(std::abs(bessel_k(r.nu, r.z) - r.value) <= 1e-11 * r.value);
  }
}

TEST_CASE("small-z limit of K_nu") {
  // K_nu(z) / (Gamma(nu)/2 (z/2)^{-nu}) -> 1 as z -> 0; the correction is
  // O(z^{2 nu}), so the 1e-3 window needs z truly small for nu = 1/4
  const double nu = 0.25;
  const double z = 1e-6;
  const double limit = 0.5 * gamma_fn(nu) * std::pow(0.5 * z, -nu);
  CHECK(std::abs(bessel_k(nu, z) / limit - 1.0) < 1e-3);
  // at z = 0.01 the ratio is still ~10% away from 1
  const double z2 = 0.01;
  const double limit2 = 0.5 * gamma_fn(nu) * std::pow(0.5 * z2, -nu);
  CHECK(std::abs(bessel_k(nu, z2) / limit2 - 1.0) < 0.15);
}

TEST_CASE("branch consistency near the series/integral split") {
  // the two internal evaluation routes agree where both are valid
  for (double nu : {0.1, 0.3, 0.45, 0.55, 0.8, 0.95}) {
    for (double z : {0.5, 1.0, 1.5, 2.0}) {
      const double a = detail::bessel_k_reflection(nu, z);
      const double b = detail::bessel_k_integral(nu, z);
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(b));
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_k(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k(0.5, -1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k(0.5, 1e-305), SingularEvaluationError);
  CHECK_THROWS_AS(bessel_k(1.6, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k(0.0, 1.0), std::domain_error);
}

TEST_CASE("psi basics") {
  const auto s025 = make_order(0.25);
  const auto s05 = make_order(0.5);
  const auto s075 = make_order(0.75);
  CHECK(psi(s025, 0.0) == 1.0);
  CHECK(psi(s05, 0.0) == 1.0);
  CHECK(psi(s075, 0.0) == 1.0);
  // s = 1/2 profile is exp(-z)
  for (double z = 0.0; z <= 30.0; z += 0.7)
    CHECK(std::abs(psi(s05, z) - std::exp(-z)) <= 1e-10 * std::exp(-z));
  CHECK(psi(s05, 1.0) == doctest::Approx(0.3678794412).epsilon(1e-9));
  // mpmath references
  CHECK(psi(s025, 0.5) == doctest::Approx(0.37458314746083767).epsilon(1e-11));
  CHECK(psi(s075, 2.0) == doctest::Approx(0.20875018003569869).epsilon(1e-11));
  // far-field decay below the asymptotic envelope
  const double env = std::sqrt(kPi / 100.0) *
                     PsiProfile(s025).c_s * std::pow(50.0, 0.25) *
                     std::exp(-50.0);
  CHECK(psi(s025, 50.0) < 1e-18);
  CHECK(psi(s025, 50.0) <= 1.05 * env);
  CHECK(psi(s025, 50.0) == doctest::Approx(4.2089953105555123e-23).epsilon(1e-10));
}

TEST_CASE("psi monotone decreasing and positive") {
  for (double s : {0.25, 0.4, 0.6, 0.9}) {
    const auto o = make_order(s);
    double prev = psi(o, 0.0);
    CHECK(prev == 1.0);
    for (double z = 0.05; z < 20.0; z *= 1.4) {
      const double v = psi(o, z);
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("psi derivatives, s = 1/2 closed forms") {
  const auto o = make_order(0.5);
  CHECK(psi_derivative(o, 1, 1.0) ==
        doctest::Approx(-std::exp(-1.0)).epsilon(1e-10));
  CHECK(psi_derivative(o, 3, 2.0) ==
        doctest::Approx(-std::exp(-2.0)).epsilon(1e-10));
  CHECK(psi_derivative(o, 6, 0.5) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-9));
}

TEST_CASE("psi_derivative matches finite differences") {
  // derivative-oracle check of the ODE recurrence
  for (double s : {0.3, 0.5, 0.7}) {
    const auto o = make_order(s);
    auto f = [&](double z) { return psi(o, z); };
    const double d2 = psi_derivative(o, 2, 0.7);
    auto f1 = [&](double z) { return psi_derivative(o, 1, z); };
    const double d2_fd = fd_derivative(f1, 0.7, 1e-4);
    CHECK(std::abs(d2 - d2_fd) <= 1e-6 * std::abs(d2));
    const double d1 = psi_derivative(o, 1, 1.3);
    const double d1_fd = fd_derivative(f, 1.3, 1e-4);
    CHECK(std::abs(d1 - d1_fd) <= 1e-8 * std::abs(d1));
  }
}

TEST_CASE("psi_derivative errors") {
  const auto o = make_order(0.4);
  CHECK_THROWS_AS(psi_derivative(o, 1, 0.0), std::domain_error);
  CHECK_THROWS_AS(psi_derivative(o, 13, 1.0), UnsupportedOrderError);
}

TEST_CASE("differentiation identity d/dz(z^nu K_nu) = -z^nu K_{nu-1}") {
  for (double nu : {0.3, 0.5, 0.75, 1.2}) {
    for (double z = 0.1; z <= 10.0; z *= 1.9) {
      auto f = [&](double t) { return std::pow(t, nu) * bessel_k(nu, t); };
      const double lhs = fd_derivative(f, z, 1e-5 * std::max(1.0, z));
      const double rhs = -std::pow(z, nu) * bessel_k(std::abs(nu - 1.0) < 1e-14
                                                         ? 1.0
                                                         : std::abs(nu - 1.0),
                                                     z);
      CHECK(std::abs(lhs - rhs) <= 1e-7 * std::abs(rhs));
    }
  }
}

TEST_CASE("near-zero envelope |psi^(l)(z)| <= C d_s l! z^{2s-l}") {
  for (double s : {0.25, 0.5, 0.75}) {
    const auto o = make_order(s);
    for (int ell = 1; ell <= 3; ++ell) {
      double sup_ratio = 0.0;
      double fact = 1.0;
      for (int j = 2; j <= ell; ++j) fact *= j;
      for (double z = 1e-3; z < 1.0; z *= 1.35) {
        const double num = std::abs(psi_derivative(o, ell, z));
        const double den = o.d_s * fact * std::pow(z, 2.0 * s - ell);
        sup_ratio = std::max(sup_ratio, num / den);
      }
      CHECK(sup_ratio <= 50.0);
    }
  }
}

TEST_CASE("large-z decay: psi(z) e^{0.9 z} bounded on [1, 50]") {
  for (double s : {0.25, 0.5, 0.75}) {
    const auto o = make_order(s);
    double sup = 0.0;
    for (double z = 1.0; z <= 50.0; z *= 1.15)
      sup = std::max(sup, psi(o, z) * std::exp(0.9 * z));
    CHECK(sup < 10.0);
  }
}

TEST_CASE("z^{min(nu,1/2)} e^z K_nu(z) nonincreasing") {
  // at nu = 1/2 the quantity is exactly the constant sqrt(pi/2)
  for (double nu : {0.25, 0.5, 0.8, 1.1}) {
    const double p = std::min(nu, 0.5);
    double prev = std::numeric_limits<double>::infinity();
    for (double z = 0.05; z <= 40.0; z *= 1.33) {
      const double v = std::pow(z, p) * std::exp(z) * bessel_k(nu, z);
      CHECK(v <= prev * (1.0 + 1e-13));
      if (nu != 0.5) CHECK(v < prev);
      prev = v;
    }
  }
}
