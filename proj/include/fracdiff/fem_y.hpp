#ifndef FRACDIFF_FEM_Y_HPP
#define FRACDIFF_FEM_Y_HPP

#include <functional>
#include <vector>

#include "fracdiff/linalg.hpp"
#include "fracdiff/problem.hpp"

namespace fracdiff {

// Discretization of the extended variable y on [0, Y]: graded meshes,
// degree vectors, weighted y^alpha assembly over continuous piecewise
// polynomials vanishing at Y, and the interpolation operators used in the
// convergence property tests.

struct YMesh {
  enum class Kind { RadicalGeometric, Geometric };
  Kind kind;
  std::vector<double> breakpoints;  // ascending, breakpoints.front() == 0
  double height() const { return breakpoints.back(); }
  int element_count() const { return static_cast<int>(breakpoints.size()) - 1; }
};

// Radical grading ((i k)^eta) on [0,1] followed by exponential spacing
// exp(j k) up to Y. Requires eta >= 1, k = 1/N for an integer N, Y >= 1.
YMesh radical_geometric_mesh(double eta, double k, double Y);

// M elements geometrically graded towards 0 with ratio sigma:
// {0, Y sigma^{M-1}, ..., Y sigma, Y}.
YMesh geometric_mesh(double sigma, int M, double Y);

struct DegreeVector {
  std::vector<int> degrees;  // one per element, >= 1
  int max_degree() const;
};

// r_i = max(1, ceil(slope * i)), i = 1..element_count.
DegreeVector linear_degree_vector(int element_count, double slope);
DegreeVector uniform_degree_vector(int element_count, int degree);

// Continuous piecewise polynomials on the mesh that vanish at y = Y.
// Basis: vertex hat functions (the vertex at Y is constrained away) plus
// integrated-Legendre bubbles per element. dim = sum_i r_i.
struct YSpace {
  YMesh mesh;
  DegreeVector degrees;
  int dim = 0;
  std::vector<int> bubble_offset;  // per element; -1 when r_i == 1

  YSpace() = default;
  YSpace(YMesh m, DegreeVector r);

  int vertex_dof_count() const { return mesh.element_count(); }
  // value of the coefficient vector at y in [0, Y]
  double eval(const linalg::Vector& coeffs, double y) const;
  double eval_derivative(const linalg::Vector& coeffs, double y) const;
};

// Weighted stiffness S_y[i][j] = int y^alpha phi_i' phi_j' and mass
// M_y[i][j] = int y^alpha phi_i phi_j. The element at y=0 uses Gauss-Jacobi
// with weight exponent alpha; the others use Gauss-Legendre with a node
// count certified against the distance to the singularity, so all entries
// are exact to roundoff.
struct WeightedForms {
  linalg::DenseSym stiffness;  // S_y
  linalg::DenseSym mass;       // M_y
};
WeightedForms assemble_weighted(const YSpace& space, double alpha);

// Piecewise linear interpolation on a radical-geometric mesh. On the first
// element the line through (y1/2, u(y1/2)) and (y1, u(y1)) is used, so u is
// never evaluated at 0. terminal_zero makes the result vanish at Y.
// Returns nodal values at the breakpoints.
std::vector<double> interp_pi1(const YMesh& mesh,
                               const std::function<double(double)>& u,
                               bool terminal_zero);

// hp interpolation on a geometric mesh: element-by-element Gauss-Lobatto
// interpolation of degree r_i (endpoint-exact), with the same first-element
// linear modification, returned as YSpace coefficients (vanishing at Y).
linalg::Vector interp_hp(const YSpace& space,
                         const std::function<double(double)>& u);

// Piecewise-linear evaluation helper for interp_pi1 output.
double eval_pw_linear(const YMesh& mesh, const std::vector<double>& nodal,
                      double y);

}  // namespace fracdiff

#endif
