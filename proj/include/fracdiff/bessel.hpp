#ifndef FRACDIFF_BESSEL_HPP
#define FRACDIFF_BESSEL_HPP

#include "fracdiff/problem.hpp"

namespace fracdiff {

// Modified Bessel function of the second kind K_nu for nu in (0, 1.5].
// Relative accuracy <= 1e-11 on z in [1e-6, 100] away from integer nu.
// Uses K_nu = K_{-nu} internally; nu = 1/2 and nu = 3/2 short-circuit to
// their closed forms.
double bessel_k(double nu, double z);

// Solution profile psi(z) = c_s z^s K_s(z) with psi(0) = 1, and its
// normalization constant c_s = 2^{1-s}/Gamma(s).
struct PsiProfile {
  FractionalOrder order;
  double c_s;

  explicit PsiProfile(FractionalOrder o);
  double operator()(double z) const;
};

double psi(const FractionalOrder& order, double z);

// ell-th derivative of psi at z > 0. ell = 1 uses the closed form
// -c_s z^s K_{1-s}(z); higher orders follow the recurrence
// psi'' = psi - (alpha/z) psi'. Supported up to ell = 12.
double psi_derivative(const FractionalOrder& order, int ell, double z);

namespace detail {
// The two evaluation branches behind bessel_k, exposed for cross-checks.
double bessel_k_reflection(double nu, double z);  // series, z <= 2
double bessel_k_integral(double nu, double z);    // trapezoid, any z
}  // namespace detail

}  // namespace fracdiff

#endif
