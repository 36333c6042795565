#include "fracdiff/fem_y.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fracdiff/errors.hpp"
#include "fracdiff/hp_basis.hpp"
#include "fracdiff/quadrature.hpp"

namespace fracdiff {

YMesh radical_geometric_mesh(double eta, double k, double Y) {
  if (eta < 1.0)
    throw ParameterError("radical_geometric_mesh: eta >= 1 required");
  if (Y < 1.0)
    throw ParameterError("radical_geometric_mesh: Y >= 1 required");
  const double n_real = 1.0 / k;
  const int n = static_cast<int>(std::llround(n_real));
  if (n < 1 || std::abs(n_real - n) > 1e-9 * n)
    throw ParameterError(
        "radical_geometric_mesh: k must be the reciprocal of an integer");
  YMesh mesh;
  mesh.kind = YMesh::Kind::RadicalGeometric;
  mesh.breakpoints.push_back(0.0);
  for (int i = 1; i <= n; ++i)
    mesh.breakpoints.push_back(std::pow(static_cast<double>(i) * k, eta));
  mesh.breakpoints.back() = 1.0;  // (n k)^eta == 1 up to roundoff
  const int n_exp = static_cast<int>(std::floor(n * std::log(Y)));
  for (int j = 1; j < n_exp; ++j)
    mesh.breakpoints.push_back(std::exp(j * k));
  // a single element [1, Y] when the step is too coarse for exp spacing
  if (n_exp >= 1 || Y > 1.0 + 1e-14) mesh.breakpoints.push_back(Y);
  return mesh;
}

YMesh geometric_mesh(double sigma, int M, double Y) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw ParameterError("geometric_mesh: sigma in (0,1) required");
  if (M < 1) throw ParameterError("geometric_mesh: M >= 1 required");
  YMesh mesh;
  mesh.kind = YMesh::Kind::Geometric;
  mesh.breakpoints.resize(static_cast<std::size_t>(M) + 1);
  mesh.breakpoints[0] = 0.0;
  for (int i = 1; i <= M; ++i)
    mesh.breakpoints[static_cast<std::size_t>(i)] = Y * std::pow(sigma, M - i);
  return mesh;
}

int DegreeVector::max_degree() const {
  int m = 1;
  for (int r : degrees) m = std::max(m, r);
  return m;
}

DegreeVector linear_degree_vector(int element_count, double slope) {
  if (slope <= 0.0)
    throw ParameterError("linear_degree_vector: positive slope required");
  DegreeVector r;
  r.degrees.resize(static_cast<std::size_t>(element_count));
  for (int i = 1; i <= element_count; ++i)
    r.degrees[static_cast<std::size_t>(i - 1)] =
        std::max(1, static_cast<int>(std::ceil(slope * i)));
  return r;
}

DegreeVector uniform_degree_vector(int element_count, int degree) {
  if (degree < 1)
    throw ParameterError("uniform_degree_vector: degree >= 1 required");
  DegreeVector r;
  r.degrees.assign(static_cast<std::size_t>(element_count), degree);
  return r;
}

namespace {

constexpr int kDegreeCap = 30;

using LocalBasis = Hp1dBasis;

// Gauss-Legendre node count certified for the weight y^alpha on [a,b] with
// a > 0: the quadrature error decays like chi^{-2n} with chi the Bernstein
// ellipse parameter reaching the singularity at 0.
int certified_gl_nodes(double a, double b, int poly_degree) {
  const double ratio = (a + b) / (b - a);
  const double chi = ratio + std::sqrt(std::max(ratio * ratio - 1.0, 1e-12));
  const int extra =
      static_cast<int>(std::ceil(18.0 / std::log(std::min(chi, 1e8)))) + 2;
  return poly_degree / 2 + 1 + std::min(extra, 400);
}

}  // namespace

YSpace::YSpace(YMesh m, DegreeVector r)
    : mesh(std::move(m)), degrees(std::move(r)) {
  const int ne = mesh.element_count();
  if (static_cast<int>(degrees.degrees.size()) != ne)
    throw ParameterError("YSpace: one degree per element required");
  if (degrees.max_degree() > kDegreeCap)
    throw ParameterError("YSpace: polynomial degree capped at 30");
  bubble_offset.assign(static_cast<std::size_t>(ne), -1);
  dim = ne;  // vertex dofs y_0 .. y_{ne-1}; the vertex at Y is constrained
  for (int e = 0; e < ne; ++e) {
    const int r = degrees.degrees[static_cast<std::size_t>(e)];
    if (r >= 2) {
      bubble_offset[static_cast<std::size_t>(e)] = dim;
      dim += r - 1;
    }
  }
}

namespace {

struct ElementView {
  int index;
  double a, b, xi;
};

ElementView locate(const YMesh& mesh, double y, const char* who) {
  const auto& bp = mesh.breakpoints;
  if (y < 0.0 || y > bp.back() * (1.0 + 1e-14))
    throw std::domain_error(std::string(who) + ": y outside [0, Y]");
  int e = static_cast<int>(std::upper_bound(bp.begin(), bp.end(), y) -
                           bp.begin()) -
          1;
  e = std::clamp(e, 0, mesh.element_count() - 1);
  const double a = bp[static_cast<std::size_t>(e)];
  const double b = bp[static_cast<std::size_t>(e) + 1];
  return {e, a, b, 2.0 * (y - a) / (b - a) - 1.0};
}

}  // namespace

double YSpace::eval(const linalg::Vector& coeffs, double y) const {
  const ElementView ev = locate(mesh, y, "YSpace::eval");
  const int r = degrees.degrees[static_cast<std::size_t>(ev.index)];
  LocalBasis basis{r};
  std::vector<double> val, der;
  basis.eval(ev.xi, val, der);
  double acc = coeffs(ev.index) * val[0];
  if (ev.index + 1 < mesh.element_count()) acc += coeffs(ev.index + 1) * val[1];
  const int off = bubble_offset[static_cast<std::size_t>(ev.index)];
  for (int j = 2; j <= r; ++j)
    acc += coeffs(off + j - 2) * val[static_cast<std::size_t>(j)];
  return acc;
}

double YSpace::eval_derivative(const linalg::Vector& coeffs, double y) const {
  const ElementView ev = locate(mesh, y, "YSpace::eval_derivative");
  const int r = degrees.degrees[static_cast<std::size_t>(ev.index)];
  LocalBasis basis{r};
  std::vector<double> val, der;
  basis.eval(ev.xi, val, der);
  double acc = coeffs(ev.index) * der[0];
  if (ev.index + 1 < mesh.element_count()) acc += coeffs(ev.index + 1) * der[1];
  const int off = bubble_offset[static_cast<std::size_t>(ev.index)];
  for (int j = 2; j <= r; ++j)
    acc += coeffs(off + j - 2) * der[static_cast<std::size_t>(j)];
  return acc * 2.0 / (ev.b - ev.a);
}

WeightedForms assemble_weighted(const YSpace& space, double alpha) {
  if (!(alpha > -1.0 && alpha < 1.0))
    throw ParameterError("assemble_weighted: alpha in (-1,1) required");
  const int ne = space.mesh.element_count();
  WeightedForms forms{linalg::DenseSym(space.dim), linalg::DenseSym(space.dim)};
  std::vector<double> val, der;
  for (int e = 0; e < ne; ++e) {
    const double a = space.mesh.breakpoints[static_cast<std::size_t>(e)];
    const double b = space.mesh.breakpoints[static_cast<std::size_t>(e) + 1];
    const double h = b - a;
    const int r = space.degrees.degrees[static_cast<std::size_t>(e)];
    const int nloc = r + 1;
    LocalBasis basis{r};

    // nodes mapped into the element with y^alpha folded into the weights
    std::vector<double> qy, qw;
    if (e == 0) {
      const QuadRule rule = gauss_jacobi01(r + 2, alpha);
      const double scale = std::pow(b, alpha + 1.0);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        qy.push_back(b * rule.nodes[q]);
        qw.push_back(scale * rule.weights[q]);
      }
    } else {
      const QuadRule rule = gauss_legendre(certified_gl_nodes(a, b, 2 * r));
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double y = 0.5 * (a + b) + 0.5 * h * rule.nodes[q];
        qy.push_back(y);
        qw.push_back(0.5 * h * rule.weights[q] * std::pow(y, alpha));
      }
    }

    Eigen::MatrixXd sloc = Eigen::MatrixXd::Zero(nloc, nloc);
    Eigen::MatrixXd mloc = Eigen::MatrixXd::Zero(nloc, nloc);
    for (std::size_t q = 0; q < qy.size(); ++q) {
      const double xi = 2.0 * (qy[q] - a) / h - 1.0;
      basis.eval(xi, val, der);
      for (int i = 0; i < nloc; ++i)
        for (int j = i; j < nloc; ++j) {
          mloc(i, j) += qw[q] * val[static_cast<std::size_t>(i)] *
                        val[static_cast<std::size_t>(j)];
          sloc(i, j) += qw[q] * der[static_cast<std::size_t>(i)] *
                        der[static_cast<std::size_t>(j)] * 4.0 / (h * h);
        }
    }

    std::vector<int> dof(static_cast<std::size_t>(nloc), -1);
    dof[0] = e;
    if (e + 1 < ne) dof[1] = e + 1;  // right hat at Y is constrained away
    for (int j = 2; j <= r; ++j)
      dof[static_cast<std::size_t>(j)] =
          space.bubble_offset[static_cast<std::size_t>(e)] + j - 2;
    for (int i = 0; i < nloc; ++i) {
      const int gi = dof[static_cast<std::size_t>(i)];
      if (gi < 0) continue;
      for (int j = i; j < nloc; ++j) {
        const int gj = dof[static_cast<std::size_t>(j)];
        if (gj < 0) continue;
        forms.stiffness.add(std::min(gi, gj), std::max(gi, gj), sloc(i, j));
        forms.mass.add(std::min(gi, gj), std::max(gi, gj), mloc(i, j));
      }
    }
  }
  return forms;
}

std::vector<double> interp_pi1(const YMesh& mesh,
                               const std::function<double(double)>& u,
                               bool terminal_zero) {
  const auto& bp = mesh.breakpoints;
  std::vector<double> nodal(bp.size());
  const double y1 = bp[1];
  // line through (y1/2, u(y1/2)) and (y1, u(y1)) extrapolated to 0
  nodal[0] = 2.0 * u(0.5 * y1) - u(y1);
  for (std::size_t i = 1; i < bp.size(); ++i) nodal[i] = u(bp[i]);
  if (terminal_zero) nodal.back() = 0.0;
  return nodal;
}

double eval_pw_linear(const YMesh& mesh, const std::vector<double>& nodal,
                      double y) {
  const ElementView ev = locate(mesh, y, "eval_pw_linear");
  const double t = 0.5 * (ev.xi + 1.0);
  return (1.0 - t) * nodal[static_cast<std::size_t>(ev.index)] +
         t * nodal[static_cast<std::size_t>(ev.index) + 1];
}

linalg::Vector interp_hp(const YSpace& space,
                         const std::function<double(double)>& u) {
  const int ne = space.mesh.element_count();
  const auto& bp = space.mesh.breakpoints;
  linalg::Vector coeffs = linalg::Vector::Zero(space.dim);
  // vertex values: extrapolated two-point line at y=0, u elsewhere; the
  // vertex at Y has no dof, which realizes the terminal zeroing
  const double y1 = bp[1];
  coeffs(0) = 2.0 * u(0.5 * y1) - u(y1);
  for (int v = 1; v < ne; ++v) coeffs(v) = u(bp[static_cast<std::size_t>(v)]);
  std::vector<double> val, der;
  for (int e = 1; e < ne; ++e) {
    const int r = space.degrees.degrees[static_cast<std::size_t>(e)];
    if (r < 2) continue;
    const double a = bp[static_cast<std::size_t>(e)];
    const double b = bp[static_cast<std::size_t>(e) + 1];
    const LocalBasis basis{r};
    const auto nodes = gauss_lobatto_nodes(r);
    const double left = u(a);
    const double right = u(b);
    Eigen::MatrixXd sys(r - 1, r - 1);
    Eigen::VectorXd rhs(r - 1);
    for (int q = 1; q < r; ++q) {
      const double xi = nodes[static_cast<std::size_t>(q)];
      basis.eval(xi, val, der);
      rhs(q - 1) = u(0.5 * (a + b) + 0.5 * (b - a) * xi) - left * val[0] -
                   right * val[1];
      for (int j = 2; j <= r; ++j)
        sys(q - 1, j - 2) = val[static_cast<std::size_t>(j)];
    }
    const Eigen::VectorXd beta = sys.partialPivLu().solve(rhs);
    const int off = space.bubble_offset[static_cast<std::size_t>(e)];
    for (int j = 2; j <= r; ++j) coeffs(off + j - 2) = beta(j - 2);
  }
  return coeffs;
}

}  // namespace fracdiff
