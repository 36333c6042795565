#include "fracdiff/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fracdiff/errors.hpp"
#include "fracdiff/problem.hpp"

namespace fracdiff {

namespace {
constexpr double kPi = std::numbers::pi;

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal matrix
// built from the three-term recurrence; weights come from the first
// eigenvector components.
QuadRule golub_welsch(const std::vector<double>& diag,
                      const std::vector<double>& offdiag, double mu0) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jac(i, i) = diag[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      jac(i, i + 1) = offdiag[static_cast<std::size_t>(i)];
      jac(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}
}  // namespace

LegendrePair legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0, p = x;
  for (int k = 2; k <= n; ++k) {
    const double p_next =
        ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / static_cast<double>(k);
    p_prev = p;
    p = p_next;
  }
  double dp;
  if (x == 1.0 || x == -1.0) {
    dp = std::pow(x, n - 1.0) * 0.5 * n * (n + 1.0);
  } else {
    dp = n * (x * p - p_prev) / (x * x - 1.0);
  }
  return {p, dp};
}

QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::domain_error("gauss_legendre: n >= 1 required");
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = -p / dp;
      x += dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const auto [p, dp] = legendre(n, x);
    (void)p;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

QuadRule gauss_jacobi01(int n, double alpha) {
  if (n < 1) throw std::domain_error("gauss_jacobi01: n >= 1 required");
  if (alpha <= -1.0)
    throw std::domain_error("gauss_jacobi01: alpha > -1 required");
  // Jacobi weight (1-x)^0 (1+x)^alpha on (-1,1)
  const double a = 0.0, b = alpha;
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> off(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  for (int k = 0; k < n; ++k) {
    const double kk = k;
    const double denom = (2.0 * kk + a + b) * (2.0 * kk + a + b + 2.0);
    diag[static_cast<std::size_t>(k)] =
        (k == 0) ? (b - a) / (a + b + 2.0)
                 : (b * b - a * a) / denom;
  }
  for (int k = 1; k < n; ++k) {
    const double kk = k;
    const double num = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b);
    const double den = (2.0 * kk + a + b) * (2.0 * kk + a + b) *
                       (2.0 * kk + a + b + 1.0) * (2.0 * kk + a + b - 1.0);
    off[static_cast<std::size_t>(k - 1)] = std::sqrt(num / den);
  }
  const double mu0 = std::pow(2.0, a + b + 1.0) * gamma_fn(a + 1.0) *
                     gamma_fn(b + 1.0) / gamma_fn(a + b + 2.0);
  QuadRule rule = golub_welsch(diag, off, mu0);
  // map to (0,1): t = (1+x)/2, weight picks up 2^{-(alpha+1)}
  const double scale = std::pow(2.0, -(alpha + 1.0));
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = 0.5 * (1.0 + rule.nodes[i]);
    rule.weights[i] *= scale;
  }
  return rule;
}

QuadRule gauss_laguerre(int n) {
  if (n < 1) throw std::domain_error("gauss_laguerre: n >= 1 required");
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> off(static_cast<std::size_t>(n - 1));
  for (int k = 0; k < n; ++k)
    diag[static_cast<std::size_t>(k)] = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k)
    off[static_cast<std::size_t>(k - 1)] = static_cast<double>(k);
  return golub_welsch(diag, off, 1.0);
}

std::vector<double> gauss_lobatto_nodes(int r) {
  if (r < 1) throw std::domain_error("gauss_lobatto_nodes: r >= 1 required");
  std::vector<double> nodes(static_cast<std::size_t>(r) + 1);
  nodes.front() = -1.0;
  nodes.back() = 1.0;
  // interior nodes are the roots of L_r'
  for (int i = 1; i < r; ++i) {
    double x = std::cos(kPi * i / r);  // Chebyshev-Lobatto initial guess
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(r, x);
      // d/dx L_r' from the Legendre ODE: (1-x^2) L'' = 2x L' - r(r+1) L
      const double d2p = (2.0 * x * dp - r * (r + 1.0) * p) / (1.0 - x * x);
      const double dx = -dp / d2p;
      x += dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<std::size_t>(r - i)] = x;
  }
  return nodes;
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  // x = mid + half*tanh((pi/2) sinh(t)); the endpoint offsets are computed
  // directly so that integrable singularities at a or b are sampled down to
  // the underflow limit
  const double half = 0.5 * (b - a);
  const double t_max = 6.5;
  auto eval_pair = [&](double t) -> double {
    const double w = 0.5 * kPi * std::sinh(t);
    const double q = std::exp(-2.0 * w);  // t > 0 so q < 1
    if (q == 0.0) return 0.0;
    const double g = 2.0 * q / (1.0 + q);  // 1 - tanh(w)
    const double x_left = a + half * g;
    const double x_right = b - half * g;
    const double jac =
        0.5 * kPi * std::cosh(t) * 4.0 * q / ((1.0 + q) * (1.0 + q));
    double acc = 0.0;
    if (x_left > a) {
      const double fl = f(x_left);
      if (std::isfinite(fl)) acc += fl;
    }
    if (x_right < b) {
      const double fr = f(x_right);
      if (std::isfinite(fr)) acc += fr;
    }
    return acc * jac;
  };
  double h = 0.5;
  double sum = 0.5 * kPi * f(a + half);  // t = 0 node, x = midpoint
  for (double t = h; t <= t_max; t += h) sum += eval_pair(t);
  double result = sum * h * half;
  double prev = result;
  for (int level = 1; level <= 10; ++level) {
    h *= 0.5;
    for (double t = h; t <= t_max; t += 2.0 * h) sum += eval_pair(t);
    result = sum * h * half;
    if (level >= 2 &&
        std::abs(result - prev) <= rel_tol * std::max(1e-300, std::abs(result)))
      return result;
    prev = result;
  }
  const double achieved = std::abs(result - prev) /
                          std::max(1e-300, std::abs(result));
  if (achieved > 1e3 * rel_tol)
    throw AccuracyError("tanh_sinh: did not converge", achieved);
  return result;
}

}  // namespace fracdiff
