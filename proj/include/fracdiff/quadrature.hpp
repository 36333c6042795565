#ifndef FRACDIFF_QUADRATURE_HPP
#define FRACDIFF_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace fracdiff {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1]; exact for degree 2n-1.
QuadRule gauss_legendre(int n);

// n-point Gauss rule on (0, 1) for the weight t^alpha, alpha > -1;
// integrates t^alpha * p(t) exactly for polynomials p of degree 2n-1.
QuadRule gauss_jacobi01(int n, double alpha);

// n-point Gauss-Laguerre rule, weight e^{-t} on (0, inf).
QuadRule gauss_laguerre(int n);

// Gauss-Lobatto nodes on [-1, 1] for polynomial degree r (r+1 nodes,
// including both endpoints).
std::vector<double> gauss_lobatto_nodes(int r);

// Legendre polynomial L_n and derivative at x.
struct LegendrePair {
  double value;
  double derivative;
};
LegendrePair legendre(int n, double x);

// Adaptive tanh-sinh (double exponential) quadrature on (a, b); handles
// integrable endpoint singularities. Throws AccuracyError when the level
// doubling fails to converge to rel_tol.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

}  // namespace fracdiff

#endif
