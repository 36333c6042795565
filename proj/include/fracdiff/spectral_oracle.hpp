#ifndef FRACDIFF_SPECTRAL_ORACLE_HPP
#define FRACDIFF_SPECTRAL_ORACLE_HPP

#include <vector>

#include "fracdiff/problem.hpp"

namespace fracdiff {

// Eigen-expansion oracle for constant-coefficient operators
// L = -a Laplace + c on intervals and rectangles, where separation of
// variables is exact. Serves as ground truth for the FEM pipelines.

struct SpectralMode {
  double lambda;
  int kx;
  int ky;  // 0 for intervals
};

struct SpectralBasis {
  DomainSpec domain;
  double diffusion = 1.0;
  double reaction = 0.0;
  std::vector<SpectralMode> modes;  // lambda ascending

  int count() const { return static_cast<int>(modes.size()); }
  double lambda1() const { return modes.front().lambda; }
  double eigenfunction(int mode, Point2 p) const;
};

struct SpectralFunction {
  const SpectralBasis* basis = nullptr;
  std::vector<double> coeffs;

  double eval(Point2 p) const;
};

// Interval (a,b): lambda_k = a_diff (k pi / L)^2 + c, phi_k = sqrt(2/L)
// sin(k pi (x-a)/L). Rectangle: tensor sines, sorted by eigenvalue and
// truncated to the K smallest. Polygons are rejected.
SpectralBasis build_basis(const DomainSpec& domain, double a, double c, int K);

// Default truncation: 2000 modes on intervals, 64^2 sorted-truncated on
// rectangles.
int default_mode_count(const DomainSpec& domain);

// Expansion coefficients of the forcing in the basis. Spectral data is
// passed through (padded/truncated); constants use closed-form sine
// integrals. Closures are not supported here.
SpectralFunction project_forcing(const SpectralBasis& basis, const Forcing& f);

// u with u_k = lambda_k^{-s} f_k.
SpectralFunction solve_fractional(const SpectralBasis& basis,
                                  const SpectralFunction& f,
                                  const FractionalOrder& s);

// (sum_k lambda_k^sigma w_k^2)^{1/2}, sigma in [-1, 2].
double hs_norm(const SpectralFunction& w, double sigma);

// Extension value U(x, y) = sum_k lambda_k^{-s} f_k phi_k(x) psi(sqrt(lambda_k) y).
double extension_eval(const SpectralBasis& basis, const SpectralFunction& f,
                      const FractionalOrder& s, Point2 x, double y);

// Energy of the extension above the cut y = Y:
// int_{Omega x (Y,inf)} y^alpha (A grad U . grad U + c U^2). Computed
// mode-by-mode; Y = 0 gives the total energy d_s ||f||^2_{H^{-s}}.
double tail_energy(const SpectralBasis& basis, const SpectralFunction& f,
                   const FractionalOrder& s, double Y);

// d_s <f, u> = d_s sum_k f_k^2 lambda_k^{-s}; the reference value for
// energy-error computations.
double reference_pairing(const SpectralBasis& basis, const SpectralFunction& f,
                         const FractionalOrder& s);

// Crude upper bound for the pairing mass lost to mode truncation; 0 for
// finite spectral data, lambda_K^{-s} (||f||^2 - captured) for constants.
double oracle_tail_estimate(const SpectralBasis& basis,
                            const SpectralFunction& f,
                            const FractionalOrder& s, const Forcing& forcing);

}  // namespace fracdiff

#endif
