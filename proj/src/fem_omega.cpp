#include "fracdiff/fem_omega.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>

#include "fracdiff/errors.hpp"
#include "fracdiff/hp_basis.hpp"
#include "fracdiff/quadrature.hpp"

namespace fracdiff {

namespace {

constexpr double kPi = std::numbers::pi;

using Edge = std::pair<int, int>;

Edge sorted_edge(int i, int j) { return {std::min(i, j), std::max(i, j)}; }

double tri_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::set<Edge> boundary_edges_of(const TriMesh& mesh) {
  std::map<Edge, int> count;
  for (const auto& t : mesh.tris)
    for (int e = 0; e < 3; ++e)
      count[sorted_edge(t.v[static_cast<std::size_t>(e)],
                        t.v[static_cast<std::size_t>((e + 1) % 3)])]++;
  std::set<Edge> boundary;
  for (const auto& [edge, c] : count)
    if (c == 1) boundary.insert(edge);
  return boundary;
}

void rebuild_boundary_flags(TriMesh& mesh) {
  mesh.vertex_on_boundary.assign(mesh.vertices.size(), false);
  for (const auto& edge : boundary_edges_of(mesh)) {
    mesh.vertex_on_boundary[static_cast<std::size_t>(edge.first)] = true;
    mesh.vertex_on_boundary[static_cast<std::size_t>(edge.second)] = true;
  }
}

}  // namespace

double TriMesh::area(int t) const {
  const auto& tr = tris[static_cast<std::size_t>(t)];
  return tri_area(vertices[static_cast<std::size_t>(tr.v[0])],
                  vertices[static_cast<std::size_t>(tr.v[1])],
                  vertices[static_cast<std::size_t>(tr.v[2])]);
}

double TriMesh::diam(int t) const {
  const auto& tr = tris[static_cast<std::size_t>(t)];
  const Point2 a = vertices[static_cast<std::size_t>(tr.v[0])];
  const Point2 b = vertices[static_cast<std::size_t>(tr.v[1])];
  const Point2 c = vertices[static_cast<std::size_t>(tr.v[2])];
  return std::max({dist(a, b), dist(b, c), dist(c, a)});
}

double TriMesh::max_diam() const {
  double d = 0.0;
  for (int t = 0; t < triangle_count(); ++t) d = std::max(d, diam(t));
  return d;
}

double TriMesh::min_angle() const {
  double worst = kPi;
  for (const auto& tr : tris) {
    for (int i = 0; i < 3; ++i) {
      const Point2 o =
          vertices[static_cast<std::size_t>(tr.v[static_cast<std::size_t>(i)])];
      const Point2 p = vertices[static_cast<std::size_t>(
          tr.v[static_cast<std::size_t>((i + 1) % 3)])];
      const Point2 q = vertices[static_cast<std::size_t>(
          tr.v[static_cast<std::size_t>((i + 2) % 3)])];
      const double ax = p.x - o.x, ay = p.y - o.y;
      const double bx = q.x - o.x, by = q.y - o.y;
      const double ang =
          std::atan2(std::abs(ax * by - ay * bx), ax * bx + ay * by);
      worst = std::min(worst, ang);
    }
  }
  return worst;
}

bool TriMesh::conforming() const {
  std::map<Edge, int> count;
  for (const auto& t : tris)
    for (int e = 0; e < 3; ++e)
      count[sorted_edge(t.v[static_cast<std::size_t>(e)],
                        t.v[static_cast<std::size_t>((e + 1) % 3)])]++;
  for (const auto& [edge, c] : count)
    if (c != 1 && c != 2) return false;
  for (int t = 0; t < triangle_count(); ++t)
    if (area(t) <= 0.0) return false;
  return true;
}

void TriMesh::refine(const std::vector<int>& marked) {
  std::map<Edge, int> midpoint;
  std::set<Edge> boundary = boundary_edges_of(*this);

  auto midpoint_of = [&](int i, int j) {
    const Edge e = sorted_edge(i, j);
    auto it = midpoint.find(e);
    if (it != midpoint.end()) return it->second;
    const int m = static_cast<int>(vertices.size());
    vertices.push_back(Point2{0.5 * (vertices[static_cast<std::size_t>(i)].x +
                                     vertices[static_cast<std::size_t>(j)].x),
                              0.5 * (vertices[static_cast<std::size_t>(i)].y +
                                     vertices[static_cast<std::size_t>(j)].y)});
    midpoint.emplace(e, m);
    if (boundary.count(e)) {
      boundary.erase(e);
      boundary.insert(sorted_edge(i, m));
      boundary.insert(sorted_edge(m, j));
    }
    return m;
  };

  auto bisect = [&](int t) {
    // (a,b,c) with refinement edge (a,b): the children keep the parent's
    // other edges as their refinement edges (newest-vertex rule)
    const Tri tr = tris[static_cast<std::size_t>(t)];
    const int a = tr.v[0], b = tr.v[1], c = tr.v[2];
    const int m = midpoint_of(a, b);
    tris[static_cast<std::size_t>(t)] =
        Tri{{c, a, m}, tr.parent, tr.generation + 1};
    tris.push_back(Tri{{b, c, m}, tr.parent, tr.generation + 1});
  };

  std::vector<char> needs(tris.size(), 0);
  for (int t : marked) needs[static_cast<std::size_t>(t)] = 1;
  for (int round = 0;; ++round) {
    if (round > 200)
      throw GeometryError("TriMesh::refine: conformity closure did not stop");
    bool any = false;
    const int n = triangle_count();
    for (int t = 0; t < n; ++t) {
      if (!needs[static_cast<std::size_t>(t)]) continue;
      bisect(t);
      any = true;
    }
    needs.assign(tris.size(), 0);
    // a registered midpoint on an edge of a live triangle is a hanging node
    bool hanging = false;
    for (int t = 0; t < triangle_count(); ++t) {
      const auto& tr = tris[static_cast<std::size_t>(t)];
      for (int e = 0; e < 3; ++e) {
        if (midpoint.count(
                sorted_edge(tr.v[static_cast<std::size_t>(e)],
                            tr.v[static_cast<std::size_t>((e + 1) % 3)]))) {
          needs[static_cast<std::size_t>(t)] = 1;
          hanging = true;
          break;
        }
      }
    }
    if (!any && !hanging) break;
  }
  rebuild_boundary_flags(*this);
}

void TriMesh::refine_uniform() {
  std::vector<int> all(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) all[t] = static_cast<int>(t);
  refine(all);
}

void TriMesh::write_off(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_off: cannot open " + path);
  os << "OFF\n" << vertices.size() << " " << tris.size() << " 0\n";
  for (const auto& v : vertices) os << v.x << " " << v.y << " 0\n";
  for (const auto& t : tris)
    os << "3 " << t.v[0] << " " << t.v[1] << " " << t.v[2] << "\n";
}

namespace {

std::vector<Point2> polygon_vertices(const DomainSpec& domain) {
  if (domain.is_polygon()) return std::get<Polygon>(domain.shape).vertices;
  if (domain.is_rectangle()) {
    const auto& r = std::get<Rectangle>(domain.shape);
    return {{r.ax, r.ay}, {r.bx, r.ay}, {r.bx, r.by}, {r.ax, r.by}};
  }
  throw UnsupportedDomainError("polygon_vertices: 2D domain required");
}

bool point_in_triangle(Point2 p, Point2 a, Point2 b, Point2 c) {
  const double d1 = tri_area(p, a, b);
  const double d2 = tri_area(p, b, c);
  const double d3 = tri_area(p, c, a);
  return d1 > 1e-14 && d2 > 1e-14 && d3 > 1e-14;
}

bool in_circumcircle(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double ax = a.x - d.x, ay = a.y - d.y;
  const double bx = b.x - d.x, by = b.y - d.y;
  const double cx = c.x - d.x, cy = c.y - d.y;
  const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                     (bx * bx + by * by) * (ax * cy - cx * ay) +
                     (cx * cx + cy * cy) * (ax * by - bx * ay);
  return det > 1e-14;
}

}  // namespace

TriMesh coarse_triangulation(const DomainSpec& domain) {
  const std::vector<Point2> poly = polygon_vertices(domain);
  const int n = static_cast<int>(poly.size());
  TriMesh mesh;
  mesh.vertices = poly;

  // ear clipping, deterministic lowest-index scan
  std::vector<int> ring(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ring[static_cast<std::size_t>(i)] = i;
  while (ring.size() > 3) {
    bool clipped = false;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const int ip = ring[(i + ring.size() - 1) % ring.size()];
      const int ic = ring[i];
      const int in = ring[(i + 1) % ring.size()];
      const Point2 a = mesh.vertices[static_cast<std::size_t>(ip)];
      const Point2 b = mesh.vertices[static_cast<std::size_t>(ic)];
      const Point2 c = mesh.vertices[static_cast<std::size_t>(in)];
      if (tri_area(a, b, c) <= 1e-14) continue;  // reflex or degenerate
      bool empty = true;
      for (int v : ring) {
        if (v == ip || v == ic || v == in) continue;
        if (point_in_triangle(mesh.vertices[static_cast<std::size_t>(v)], a, b,
                              c)) {
          empty = false;
          break;
        }
      }
      if (!empty) continue;
      mesh.tris.push_back(TriMesh::Tri{{ip, ic, in}, -1, 0});
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped)
      throw GeometryError("coarse_triangulation: ear clipping failed");
  }
  mesh.tris.push_back(TriMesh::Tri{{ring[0], ring[1], ring[2]}, -1, 0});

  // Lawson flips toward the constrained Delaunay triangulation
  for (int pass = 0; pass < 200; ++pass) {
    bool flipped = false;
    std::map<Edge, std::vector<int>> edge_tris;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const auto& tr = mesh.tris[static_cast<std::size_t>(t)];
      for (int e = 0; e < 3; ++e)
        edge_tris[sorted_edge(tr.v[static_cast<std::size_t>(e)],
                              tr.v[static_cast<std::size_t>((e + 1) % 3)])]
            .push_back(t);
    }
    for (const auto& [edge, owners] : edge_tris) {
      if (owners.size() != 2) continue;
      auto& t1 = mesh.tris[static_cast<std::size_t>(owners[0])];
      auto& t2 = mesh.tris[static_cast<std::size_t>(owners[1])];
      auto opposite = [&](const TriMesh::Tri& tr) {
        for (int v : tr.v)
          if (v != edge.first && v != edge.second) return v;
        return -1;
      };
      const int p = opposite(t1);
      const int q = opposite(t2);
      const Point2 pe1 = mesh.vertices[static_cast<std::size_t>(edge.first)];
      const Point2 pe2 = mesh.vertices[static_cast<std::size_t>(edge.second)];
      const Point2 pp = mesh.vertices[static_cast<std::size_t>(p)];
      const Point2 pq = mesh.vertices[static_cast<std::size_t>(q)];
      if (!in_circumcircle(pe1, pe2, pp, pq)) continue;
      // flip only when the surrounding quad is strictly convex
      if (tri_area(pp, pe1, pq) <= 1e-14 || tri_area(pq, pe2, pp) <= 1e-14)
        continue;
      t1.v = {p, edge.first, q};
      t2.v = {q, edge.second, p};
      flipped = true;
      break;  // the edge map is stale after a flip; rebuild it
    }
    if (!flipped) break;
  }

  // orient counterclockwise; refinement edge = longest edge
  for (auto& tr : mesh.tris) {
    const Point2 a = mesh.vertices[static_cast<std::size_t>(tr.v[0])];
    const Point2 b = mesh.vertices[static_cast<std::size_t>(tr.v[1])];
    const Point2 c = mesh.vertices[static_cast<std::size_t>(tr.v[2])];
    if (tri_area(a, b, c) < 0.0) std::swap(tr.v[1], tr.v[2]);
    for (int rot = 0; rot < 3; ++rot) {
      const double e01 =
          dist(mesh.vertices[static_cast<std::size_t>(tr.v[0])],
               mesh.vertices[static_cast<std::size_t>(tr.v[1])]);
      const double e12 =
          dist(mesh.vertices[static_cast<std::size_t>(tr.v[1])],
               mesh.vertices[static_cast<std::size_t>(tr.v[2])]);
      const double e20 =
          dist(mesh.vertices[static_cast<std::size_t>(tr.v[2])],
               mesh.vertices[static_cast<std::size_t>(tr.v[0])]);
      if (e01 >= e12 - 1e-15 && e01 >= e20 - 1e-15) break;
      tr.v = {tr.v[1], tr.v[2], tr.v[0]};
    }
  }
  rebuild_boundary_flags(mesh);
  if (!mesh.conforming())
    throw GeometryError("coarse_triangulation: non-conforming result");
  return mesh;
}

std::vector<double> default_corner_grading(const DomainSpec& domain,
                                           double margin) {
  if (domain.is_rectangle()) return {0.0, 0.0, 0.0, 0.0};
  std::vector<double> beta;
  for (const auto& c : domain.corners)
    beta.push_back(std::max(0.0, 1.0 - kPi / c.opening_angle + margin));
  return beta;
}

TriMesh graded_triangulation(const DomainSpec& domain, double h,
                             const std::vector<double>& beta_per_corner) {
  if (h <= 0.0) throw ParameterError("graded_triangulation: h > 0 required");
  const std::vector<Point2> poly = polygon_vertices(domain);
  std::vector<double> beta = beta_per_corner;
  if (beta.empty()) beta.assign(poly.size(), 0.0);
  if (beta.size() != poly.size())
    throw ParameterError("graded_triangulation: one exponent per corner");
  for (double b : beta)
    if (b < 0.0 || b >= 1.0)
      throw ParameterError("graded_triangulation: beta in [0,1) required");

  TriMesh mesh = coarse_triangulation(domain);
  double diam_omega = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j)
      diam_omega = std::max(diam_omega, dist(poly[i], poly[j]));
  for (int round = 0; round < 200; ++round) {
    std::vector<int> marked;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      double allowed = h;
      for (std::size_t c = 0; c < poly.size(); ++c) {
        if (beta[c] <= 0.0) continue;
        const auto& tr = mesh.tris[static_cast<std::size_t>(t)];
        double d = 1e300;
        for (int v : tr.v)
          d = std::min(
              d, dist(mesh.vertices[static_cast<std::size_t>(v)], poly[c]));
        const double floor_rel = std::pow(h, 1.0 / (1.0 - beta[c]));
        const double factor =
            std::pow(std::max(d / diam_omega, floor_rel), beta[c]);
        allowed = std::min(allowed, h * factor);
      }
      if (mesh.diam(t) > allowed) marked.push_back(t);
    }
    if (marked.empty()) {
      if (!mesh.conforming())
        throw GeometryError("graded_triangulation: non-conforming mesh");
      return mesh;
    }
    mesh.refine(marked);
  }
  throw GeometryError("graded_triangulation: refinement did not terminate");
}

P1Space::P1Space(TriMesh m) : mesh(std::move(m)) {
  vertex_to_dof.assign(mesh.vertices.size(), -1);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (!mesh.vertex_on_boundary[v]) {
      vertex_to_dof[v] = dim++;
      dof_to_vertex.push_back(static_cast<int>(v));
    }
  }
}

namespace {

// order-4 six-point triangle rule, weights normalized to sum 1
struct TriQuadPoint {
  double l1, l2, l3, w;
};
constexpr std::array<TriQuadPoint, 6> kTriOrder4 = {{
    {0.445948490915965, 0.445948490915965, 0.108103018168070,
     0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965,
     0.223381589678011},
    {0.108103018168070, 0.445948490915965, 0.445948490915965,
     0.223381589678011},
    {0.091576213509771, 0.091576213509771, 0.816847572980459,
     0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771,
     0.109951743655322},
    {0.816847572980459, 0.091576213509771, 0.091576213509771,
     0.109951743655322},
}};

}  // namespace

OmegaForms assemble_omega(const P1Space& space, const Coefficients& coeff) {
  const TriMesh& mesh = space.mesh;
  OmegaForms forms{linalg::SparseSym(space.dim), linalg::SparseSym(space.dim)};
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tr = mesh.tris[static_cast<std::size_t>(t)];
    const Point2 p0 = mesh.vertices[static_cast<std::size_t>(tr.v[0])];
    const Point2 p1 = mesh.vertices[static_cast<std::size_t>(tr.v[1])];
    const Point2 p2 = mesh.vertices[static_cast<std::size_t>(tr.v[2])];
    const double area = tri_area(p0, p1, p2);
    const double gx[3] = {(p1.y - p2.y) / (2.0 * area),
                          (p2.y - p0.y) / (2.0 * area),
                          (p0.y - p1.y) / (2.0 * area)};
    const double gy[3] = {(p2.x - p1.x) / (2.0 * area),
                          (p0.x - p2.x) / (2.0 * area),
                          (p1.x - p0.x) / (2.0 * area)};
    // midpoint rule: order 2, exact for constant A and the P1 mass products
    const Point2 mids[3] = {{0.5 * (p0.x + p1.x), 0.5 * (p0.y + p1.y)},
                            {0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y)},
                            {0.5 * (p2.x + p0.x), 0.5 * (p2.y + p0.y)}};
    SymMat2 a_avg{0.0, 0.0, 0.0};
    for (const auto& mp : mids) {
      const SymMat2 a = coeff.a(mp);
      a_avg.a11 += a.a11 / 3.0;
      a_avg.a12 += a.a12 / 3.0;
      a_avg.a22 += a.a22 / 3.0;
    }
    // lambda_i at midpoint q: m_0=(01), m_1=(12), m_2=(20)
    const double lam_at_mid[3][3] = {
        {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}};
    for (int i = 0; i < 3; ++i) {
      const int di = space.vertex_to_dof[static_cast<std::size_t>(
          tr.v[static_cast<std::size_t>(i)])];
      if (di < 0) continue;
      for (int j = i; j < 3; ++j) {
        const int dj = space.vertex_to_dof[static_cast<std::size_t>(
            tr.v[static_cast<std::size_t>(j)])];
        if (dj < 0) continue;
        const double k_entry =
            area * (a_avg.a11 * gx[i] * gx[j] + a_avg.a22 * gy[i] * gy[j] +
                    a_avg.a12 * (gx[i] * gy[j] + gy[i] * gx[j]));
        double c_entry = 0.0;
        for (int q = 0; q < 3; ++q)
          c_entry += (area / 3.0) * coeff.c(mids[q]) * lam_at_mid[i][q] *
                     lam_at_mid[j][q];
        const double m_entry = (i == j ? area / 6.0 : area / 12.0);
        forms.a_omega.add(std::min(di, dj), std::max(di, dj),
                          k_entry + c_entry);
        forms.mass.add(std::min(di, dj), std::max(di, dj), m_entry);
      }
    }
  }
  forms.a_omega.finalize();
  forms.mass.finalize();
  return forms;
}

linalg::Vector load_vector(const P1Space& space,
                           const std::function<double(Point2)>& f) {
  const TriMesh& mesh = space.mesh;
  linalg::Vector b = linalg::Vector::Zero(space.dim);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tr = mesh.tris[static_cast<std::size_t>(t)];
    const Point2 p0 = mesh.vertices[static_cast<std::size_t>(tr.v[0])];
    const Point2 p1 = mesh.vertices[static_cast<std::size_t>(tr.v[1])];
    const Point2 p2 = mesh.vertices[static_cast<std::size_t>(tr.v[2])];
    const double area = tri_area(p0, p1, p2);
    for (const auto& qp : kTriOrder4) {
      const Point2 x{qp.l1 * p0.x + qp.l2 * p1.x + qp.l3 * p2.x,
                     qp.l1 * p0.y + qp.l2 * p1.y + qp.l3 * p2.y};
      const double fval = f(x);
      const double lam[3] = {qp.l1, qp.l2, qp.l3};
      for (int i = 0; i < 3; ++i) {
        const int di = space.vertex_to_dof[static_cast<std::size_t>(
            tr.v[static_cast<std::size_t>(i)])];
        if (di >= 0) b(di) += area * qp.w * fval * lam[i];
      }
    }
  }
  return b;
}

linalg::Vector load_vector(const P1Space& space, const Forcing& f) {
  return load_vector(space, [&f](Point2 p) { return f(p); });
}

linalg::Vector reaction_diffusion_solve(const P1Space& space,
                                        const Coefficients& coeff, double mu,
                                        double rhs_scale, const Forcing& f) {
  if (mu <= 0.0)
    throw ParameterError("reaction_diffusion_solve: mu > 0 required");
  const OmegaForms forms = assemble_omega(space, coeff);
  const linalg::SparseSym sys =
      linalg::SparseSym::combine(mu, forms.a_omega, 1.0, forms.mass);
  linalg::Vector b = load_vector(space, f);
  b *= rhs_scale;
  return linalg::spd_solve(sys, b);
}

HpIntervalSpace::HpIntervalSpace(Interval iv, std::vector<double> bps, int q)
    : domain(iv), breakpoints(std::move(bps)), degree(q) {
  if (q < 1 || q > 30)
    throw ParameterError("HpIntervalSpace: degree in [1,30] required");
  const int ne = element_count();
  if (ne < 2)
    throw ParameterError("HpIntervalSpace: at least two elements required");
  bubble_offset.assign(static_cast<std::size_t>(ne), -1);
  dim = ne - 1;  // interior vertices
  if (q >= 2) {
    for (int e = 0; e < ne; ++e) {
      bubble_offset[static_cast<std::size_t>(e)] = dim;
      dim += q - 1;
    }
  }
}

double HpIntervalSpace::min_element() const {
  double m = 1e300;
  for (int e = 0; e < element_count(); ++e)
    m = std::min(m, breakpoints[static_cast<std::size_t>(e) + 1] -
                        breakpoints[static_cast<std::size_t>(e)]);
  return m;
}

double HpIntervalSpace::eval(const linalg::Vector& coeffs, double x) const {
  if (x < domain.a - 1e-14 || x > domain.b + 1e-14)
    throw std::domain_error("HpIntervalSpace::eval: x outside the interval");
  const int ne = element_count();
  int e = static_cast<int>(
              std::upper_bound(breakpoints.begin(), breakpoints.end(), x) -
              breakpoints.begin()) -
          1;
  e = std::clamp(e, 0, ne - 1);
  const double a = breakpoints[static_cast<std::size_t>(e)];
  const double b = breakpoints[static_cast<std::size_t>(e) + 1];
  const double xi = 2.0 * (x - a) / (b - a) - 1.0;
  Hp1dBasis basis{degree};
  std::vector<double> val, der;
  basis.eval(xi, val, der);
  double acc = 0.0;
  if (e > 0) acc += coeffs(e - 1) * val[0];
  if (e + 1 < ne) acc += coeffs(e) * val[1];
  const int off = bubble_offset[static_cast<std::size_t>(e)];
  for (int j = 2; j <= degree; ++j)
    acc += coeffs(off + j - 2) * val[static_cast<std::size_t>(j)];
  return acc;
}

HpIntervalSpace hp_interval_space(Interval iv, double eps_min, int q,
                                  double sigma_x) {
  if (!(eps_min > 0.0 && eps_min <= 1.0))
    throw ParameterError("hp_interval_space: eps_min in (0,1] required");
  if (!(sigma_x > 0.0 && sigma_x < 1.0))
    throw ParameterError("hp_interval_space: sigma_x in (0,1) required");
  const int layers =
      eps_min >= 1.0 ? 0
                     : static_cast<int>(std::ceil(
                           std::log(eps_min) / std::log(sigma_x) - 1e-12));
  const double len = iv.length();
  std::vector<double> bps;
  bps.push_back(iv.a);
  for (int j = layers; j >= 1; --j)
    bps.push_back(iv.a + 0.5 * len * std::pow(sigma_x, j));
  bps.push_back(iv.a + 0.5 * len);
  for (int j = 1; j <= layers; ++j)
    bps.push_back(iv.b - 0.5 * len * std::pow(sigma_x, j));
  bps.push_back(iv.b);
  return HpIntervalSpace(iv, std::move(bps), q);
}

HpIntervalSpace uniform_interval_space(Interval iv, int n_elements, int q) {
  if (n_elements < 2)
    throw ParameterError("uniform_interval_space: need >= 2 elements");
  std::vector<double> bps(static_cast<std::size_t>(n_elements) + 1);
  for (int i = 0; i <= n_elements; ++i)
    bps[static_cast<std::size_t>(i)] =
        iv.a + iv.length() * static_cast<double>(i) / n_elements;
  return HpIntervalSpace(iv, std::move(bps), q);
}

namespace {

std::vector<int> interval_dofs(const HpIntervalSpace& space, int e) {
  const int ne = space.element_count();
  std::vector<int> dof(static_cast<std::size_t>(space.degree) + 1, -1);
  if (e > 0) dof[0] = e - 1;
  if (e + 1 < ne) dof[1] = e;
  for (int j = 2; j <= space.degree; ++j)
    dof[static_cast<std::size_t>(j)] =
        space.bubble_offset[static_cast<std::size_t>(e)] + j - 2;
  return dof;
}

}  // namespace

OmegaForms assemble_omega(const HpIntervalSpace& space,
                          const Coefficients& coeff) {
  OmegaForms forms{linalg::SparseSym(space.dim), linalg::SparseSym(space.dim)};
  const int q = space.degree;
  const QuadRule rule = gauss_legendre(q + 2);
  Hp1dBasis basis{q};
  std::vector<double> val, der;
  for (int e = 0; e < space.element_count(); ++e) {
    const double a = space.breakpoints[static_cast<std::size_t>(e)];
    const double b = space.breakpoints[static_cast<std::size_t>(e) + 1];
    const double h = b - a;
    const int nloc = q + 1;
    Eigen::MatrixXd aloc = Eigen::MatrixXd::Zero(nloc, nloc);
    Eigen::MatrixXd mloc = Eigen::MatrixXd::Zero(nloc, nloc);
    for (std::size_t qi = 0; qi < rule.nodes.size(); ++qi) {
      const double x = 0.5 * (a + b) + 0.5 * h * rule.nodes[qi];
      const double w = 0.5 * h * rule.weights[qi];
      const double a11 = coeff.a(Point2{x, 0.0}).a11;
      const double cval = coeff.c(Point2{x, 0.0});
      basis.eval(rule.nodes[qi], val, der);
      for (int i = 0; i < nloc; ++i)
        for (int j = i; j < nloc; ++j) {
          aloc(i, j) +=
              w * (a11 * der[static_cast<std::size_t>(i)] *
                       der[static_cast<std::size_t>(j)] * 4.0 / (h * h) +
                   cval * val[static_cast<std::size_t>(i)] *
                       val[static_cast<std::size_t>(j)]);
          mloc(i, j) += w * val[static_cast<std::size_t>(i)] *
                        val[static_cast<std::size_t>(j)];
        }
    }
    const auto dof = interval_dofs(space, e);
    for (int i = 0; i < nloc; ++i) {
      const int gi = dof[static_cast<std::size_t>(i)];
      if (gi < 0) continue;
      for (int j = i; j < nloc; ++j) {
        const int gj = dof[static_cast<std::size_t>(j)];
        if (gj < 0) continue;
        forms.a_omega.add(std::min(gi, gj), std::max(gi, gj), aloc(i, j));
        forms.mass.add(std::min(gi, gj), std::max(gi, gj), mloc(i, j));
      }
    }
  }
  forms.a_omega.finalize();
  forms.mass.finalize();
  return forms;
}

linalg::Vector load_vector(const HpIntervalSpace& space,
                           const std::function<double(Point2)>& f,
                           int extra_nodes) {
  linalg::Vector b = linalg::Vector::Zero(space.dim);
  const int q = space.degree;
  const QuadRule rule = gauss_legendre(q + 3 + extra_nodes);
  Hp1dBasis basis{q};
  std::vector<double> val, der;
  for (int e = 0; e < space.element_count(); ++e) {
    const double a = space.breakpoints[static_cast<std::size_t>(e)];
    const double bb = space.breakpoints[static_cast<std::size_t>(e) + 1];
    const double h = bb - a;
    const auto dof = interval_dofs(space, e);
    for (std::size_t qi = 0; qi < rule.nodes.size(); ++qi) {
      const double x = 0.5 * (a + bb) + 0.5 * h * rule.nodes[qi];
      const double w = 0.5 * h * rule.weights[qi];
      const double fv = f(Point2{x, 0.0});
      basis.eval(rule.nodes[qi], val, der);
      for (int i = 0; i <= q; ++i) {
        const int gi = dof[static_cast<std::size_t>(i)];
        if (gi >= 0) b(gi) += w * fv * val[static_cast<std::size_t>(i)];
      }
    }
  }
  return b;
}

linalg::Vector load_vector(const HpIntervalSpace& space, const Forcing& f) {
  return load_vector(
      space, [&f](Point2 p) { return f(p); }, 0);
}

linalg::Vector reaction_diffusion_solve(const HpIntervalSpace& space,
                                        const Coefficients& coeff, double mu,
                                        double rhs_scale, const Forcing& f) {
  if (mu <= 0.0)
    throw ParameterError("reaction_diffusion_solve: mu > 0 required");
  const OmegaForms forms = assemble_omega(space, coeff);
  const linalg::SparseSym sys =
      linalg::SparseSym::combine(mu, forms.a_omega, 1.0, forms.mass);
  linalg::Vector b = load_vector(space, f);
  b *= rhs_scale;
  return linalg::spd_solve(sys, b);
}

}  // namespace fracdiff
