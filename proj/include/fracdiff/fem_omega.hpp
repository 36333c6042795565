#ifndef FRACDIFF_FEM_OMEGA_HPP
#define FRACDIFF_FEM_OMEGA_HPP

#include <functional>
#include <string>
#include <vector>

#include "fracdiff/linalg.hpp"
#include "fracdiff/problem.hpp"

namespace fracdiff {

// Discretizations of the base domain: P1 spaces on corner-graded conforming
// triangulations driven by newest-vertex bisection, and 1D hp spaces on
// geometric boundary-layer meshes.

struct TriMesh {
  struct Tri {
    // vertices; the refinement edge is (v[0], v[1]), the peak is v[2]
    std::array<int, 3> v;
    int parent = -1;
    int generation = 0;
  };
  std::vector<Point2> vertices;
  std::vector<Tri> tris;
  std::vector<bool> vertex_on_boundary;

  int triangle_count() const { return static_cast<int>(tris.size()); }
  double area(int t) const;
  double diam(int t) const;
  double max_diam() const;
  double min_angle() const;
  bool conforming() const;

  // bisect the marked triangles, then keep bisecting until no hanging
  // nodes remain
  void refine(const std::vector<int>& marked);
  void refine_uniform();  // one round of everywhere-bisection with closure

  void write_off(const std::string& path) const;
};

// Deterministic initial triangulation of the polygon: ear clipping followed
// by Lawson flips to the constrained Delaunay mesh.
TriMesh coarse_triangulation(const DomainSpec& polygon);

// Conforming mesh with corner grading: element size ~ h * max(dist/diam,
// h^{1/(1-beta)})^beta toward each corner with exponent beta > 0. Uniform
// for beta = 0. beta_per_corner must match domain.corners.
TriMesh graded_triangulation(const DomainSpec& polygon, double h,
                             const std::vector<double>& beta_per_corner);

// grading exponents from the corner angles: max(0, 1 - pi/omega + margin)
std::vector<double> default_corner_grading(const DomainSpec& polygon,
                                           double margin = 0.05);

// P1 space on a TriMesh with homogeneous Dirichlet data: dofs are the
// interior vertices.
struct P1Space {
  TriMesh mesh;
  std::vector<int> vertex_to_dof;  // -1 for boundary vertices
  std::vector<int> dof_to_vertex;
  int dim = 0;

  P1Space() = default;
  explicit P1Space(TriMesh m);
};

// 1D continuous space of uniform degree q on (a,b), zero at both endpoints.
// The mesh is either uniform or geometrically refined into both endpoints
// with grading sigma and L layers per side.
struct HpIntervalSpace {
  Interval domain;
  std::vector<double> breakpoints;
  int degree = 1;
  int dim = 0;
  std::vector<int> bubble_offset;  // per element; -1 when degree == 1

  HpIntervalSpace() = default;
  HpIntervalSpace(Interval iv, std::vector<double> bps, int q);

  int element_count() const { return static_cast<int>(breakpoints.size()) - 1; }
  double min_element() const;
  double eval(const linalg::Vector& coeffs, double x) const;
};

// Boundary-layer space: L = ceil(log eps_min / log sigma_x) layers at each
// endpoint so sigma_x^L <= eps_min; eps_min = 1 degenerates to the fixed
// two-element mesh.
HpIntervalSpace hp_interval_space(Interval iv, double eps_min, int q,
                                  double sigma_x);

// Uniform n-element mesh of degree q (q = 1 gives the interval P1 space).
HpIntervalSpace uniform_interval_space(Interval iv, int n_elements, int q);

// Assembled forms on the base domain: a_omega = A-gradient part +
// c-reaction part, mass = plain L2 mass.
struct OmegaForms {
  linalg::SparseSym a_omega;
  linalg::SparseSym mass;
};

OmegaForms assemble_omega(const P1Space& space, const Coefficients& coeff);
OmegaForms assemble_omega(const HpIntervalSpace& space,
                          const Coefficients& coeff);

// Load vector b_j = int f phi_j, quadrature one order above assembly.
// The evaluator overloads serve forcings resolved elsewhere (spectral data
// through a basis); extra_nodes raises the rule for oscillatory data.
linalg::Vector load_vector(const P1Space& space, const Forcing& f);
linalg::Vector load_vector(const P1Space& space,
                           const std::function<double(Point2)>& f);
linalg::Vector load_vector(const HpIntervalSpace& space, const Forcing& f);
linalg::Vector load_vector(const HpIntervalSpace& space,
                           const std::function<double(Point2)>& f,
                           int extra_nodes);

// Solves (mu a_omega + mass) U = rhs_scale * load(f); the singularly
// perturbed reaction-diffusion problem of the diagonalized pipeline.
linalg::Vector reaction_diffusion_solve(const P1Space& space,
                                        const Coefficients& coeff, double mu,
                                        double rhs_scale, const Forcing& f);
linalg::Vector reaction_diffusion_solve(const HpIntervalSpace& space,
                                        const Coefficients& coeff, double mu,
                                        double rhs_scale, const Forcing& f);

}  // namespace fracdiff

#endif
