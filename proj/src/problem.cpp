#include "fracdiff/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fracdiff/errors.hpp"
#include "json.hpp"

namespace fracdiff {

namespace {
constexpr double kPi = std::numbers::pi;

// Lanczos coefficients, g = 7.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace

double gamma_fn(double x) {
  if (x < 0.5) {
    // reflection
    return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
  }
  x -= 1.0;
  double acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i)
    acc += kLanczos[i] / (x + static_cast<double>(i));
  const double t = x + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

FractionalOrder make_order(double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("make_order: s must lie in (0,1)");
  FractionalOrder o;
  o.s = s;
  o.alpha = 1.0 - 2.0 * s;
  o.d_s = std::pow(2.0, 1.0 - 2.0 * s) * gamma_fn(1.0 - s) / gamma_fn(s);
  return o;
}

Coefficients Coefficients::constant(double a_scalar, double c_scalar) {
  Coefficients co = constant_matrix(SymMat2{a_scalar, 0.0, a_scalar}, c_scalar);
  co.isotropic_ = true;
  return co;
}

Coefficients Coefficients::constant_matrix(SymMat2 a_mat, double c_scalar) {
  if (a_mat.a11 <= 0.0 || a_mat.a11 * a_mat.a22 - a_mat.a12 * a_mat.a12 <= 0.0)
    throw std::domain_error("Coefficients: A must be positive definite");
  if (c_scalar < 0.0)
    throw std::domain_error("Coefficients: c must be nonnegative");
  Coefficients co;
  co.a = [a_mat](Point2) { return a_mat; };
  co.c = [c_scalar](Point2) { return c_scalar; };
  co.constant_ = true;
  co.isotropic_ = (a_mat.a12 == 0.0 && a_mat.a11 == a_mat.a22);
  co.const_a_ = a_mat;
  co.const_c_ = c_scalar;
  return co;
}

double Coefficients::constant_a_scalar() const {
  if (!constant_ || !isotropic_)
    throw UnsupportedDomainError(
        "Coefficients: scalar diffusion requested from non-isotropic data");
  return const_a_.a11;
}

double Coefficients::constant_c() const {
  if (!constant_)
    throw UnsupportedDomainError(
        "Coefficients: constant reaction requested from variable data");
  return const_c_;
}

namespace {

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

std::vector<Corner> polygon_corners(const std::vector<Point2>& v) {
  const std::size_t n = v.size();
  std::vector<Corner> corners(n);
  double angle_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 prev = v[(i + n - 1) % n];
    const Point2 cur = v[i];
    const Point2 next = v[(i + 1) % n];
    // interior lies to the left of each directed edge: the opening angle is
    // the counterclockwise rotation from (next-cur) onto (prev-cur)
    const double ax = prev.x - cur.x, ay = prev.y - cur.y;
    const double bx = next.x - cur.x, by = next.y - cur.y;
    double ang = std::atan2(bx * ay - by * ax, bx * ax + by * ay);
    if (ang <= 0.0) ang += 2.0 * kPi;
    corners[i] = Corner{cur, ang};
    angle_sum += ang;
  }
  const double expected = (static_cast<double>(n) - 2.0) * kPi;
  if (std::abs(angle_sum - expected) > 1e-10)
    throw GeometryError("polygon: interior angle sum mismatch");
  return corners;
}

}  // namespace

DomainSpec DomainSpec::interval(double a, double b) {
  if (!(a < b)) throw GeometryError("interval: need a < b");
  DomainSpec d;
  d.shape = Interval{a, b};
  return d;
}

DomainSpec DomainSpec::rectangle(double ax, double bx, double ay, double by) {
  if (!(ax < bx && ay < by)) throw GeometryError("rectangle: degenerate");
  DomainSpec d;
  d.shape = Rectangle{ax, bx, ay, by};
  return d;
}

DomainSpec DomainSpec::polygon(std::vector<Point2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw GeometryError("polygon: need at least 3 vertices");
  double twice_area = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices[i];
    const Point2 b = vertices[(i + 1) % n];
    twice_area += a.x * b.y - b.x * a.y;
  }
  if (twice_area <= 0.0)
    throw GeometryError("polygon: vertices must be counterclockwise");
  // simplicity: no two non-adjacent edges intersect
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                             vertices[(j + 1) % n]))
        throw GeometryError("polygon: self-intersecting");
    }
  }
  DomainSpec d;
  d.corners = polygon_corners(vertices);
  d.shape = Polygon{std::move(vertices)};
  return d;
}

DomainSpec DomainSpec::lshape() {
  return polygon({{0.0, 0.0},
                  {1.0, 0.0},
                  {1.0, 1.0},
                  {-1.0, 1.0},
                  {-1.0, -1.0},
                  {0.0, -1.0}});
}

double DomainSpec::diameter() const {
  if (is_interval()) return std::get<Interval>(shape).length();
  if (is_rectangle()) {
    const auto& r = std::get<Rectangle>(shape);
    return std::hypot(r.bx - r.ax, r.by - r.ay);
  }
  const auto& poly = std::get<Polygon>(shape);
  double d = 0.0;
  for (std::size_t i = 0; i < poly.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < poly.vertices.size(); ++j)
      d = std::max(d, std::hypot(poly.vertices[i].x - poly.vertices[j].x,
                                 poly.vertices[i].y - poly.vertices[j].y));
  return d;
}

Forcing Forcing::spectral(std::vector<double> coefficients) {
  Forcing f;
  f.kind = Spectral{std::move(coefficients)};
  return f;
}

Forcing Forcing::closure(std::function<double(Point2)> fn) {
  Forcing f;
  f.kind = Closure{std::move(fn)};
  return f;
}

Forcing Forcing::constant(double value) {
  Forcing f;
  f.kind = Constant{value};
  return f;
}

double Forcing::operator()(Point2 p) const {
  if (const auto* c = std::get_if<Constant>(&kind)) return c->value;
  if (const auto* c = std::get_if<Closure>(&kind)) return c->f(p);
  throw UnsupportedDomainError(
      "Forcing: spectral data has no pointwise evaluation here");
}

double weight_eval(const ExpWeight& w, double y) {
  if (y < 0.0) throw std::domain_error("weight_eval: y must be nonnegative");
  if (y == 0.0) {
    if (w.beta < 0.0)
      throw SingularEvaluationError("weight_eval: y^beta singular at y=0");
    return w.beta == 0.0 ? 1.0 : 0.0;
  }
  return std::pow(y, w.beta) * std::exp(w.gamma * y);
}

std::string problem_to_json(const FractionalProblem& p) {
  nlohmann::json j;
  j["s"] = p.order.s;
  if (p.domain.is_interval()) {
    const auto& iv = std::get<Interval>(p.domain.shape);
    j["domain"] = {{"kind", "interval"}, {"a", iv.a}, {"b", iv.b}};
  } else if (p.domain.is_rectangle()) {
    const auto& r = std::get<Rectangle>(p.domain.shape);
    j["domain"] = {{"kind", "rectangle"},
                   {"ax", r.ax},
                   {"bx", r.bx},
                   {"ay", r.ay},
                   {"by", r.by}};
  } else {
    const auto& poly = std::get<Polygon>(p.domain.shape);
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : poly.vertices) verts.push_back({v.x, v.y});
    j["domain"] = {{"kind", "polygon"}, {"vertices", verts}};
  }
  if (!p.coeff.is_constant())
    throw UnsupportedDomainError(
        "problem_to_json: only constant coefficients serialize");
  const SymMat2 a = p.coeff.a(Point2{});
  if (a.a12 == 0.0 && a.a11 == a.a22)
    j["coefficients"] = {{"a", a.a11}, {"c", p.coeff.constant_c()}};
  else
    j["coefficients"] = {{"a", {a.a11, a.a12, a.a22}},
                         {"c", p.coeff.constant_c()}};
  if (p.forcing.is_constant())
    j["forcing"] = {{"kind", "constant"},
                    {"value", std::get<Forcing::Constant>(p.forcing.kind).value}};
  else if (p.forcing.is_spectral())
    j["forcing"] = {
        {"kind", "spectral"},
        {"coefficients",
         std::get<Forcing::Spectral>(p.forcing.kind).coefficients}};
  else
    throw UnsupportedDomainError("problem_to_json: closure forcing");
  return j.dump(2);
}

FractionalProblem problem_from_json(const std::string& json_text) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  FractionalProblem p{make_order(j.at("s").get<double>()),
                      DomainSpec::interval(0.0, 1.0),
                      Coefficients::constant(1.0, 0.0),
                      Forcing::constant(0.0)};
  const auto& jd = j.at("domain");
  const std::string kind = jd.at("kind").get<std::string>();
  if (kind == "interval") {
    p.domain = DomainSpec::interval(jd.at("a").get<double>(),
                                    jd.at("b").get<double>());
  } else if (kind == "rectangle") {
    p.domain =
        DomainSpec::rectangle(jd.at("ax").get<double>(), jd.at("bx").get<double>(),
                              jd.at("ay").get<double>(), jd.at("by").get<double>());
  } else if (kind == "polygon") {
    std::vector<Point2> verts;
    for (const auto& v : jd.at("vertices"))
      verts.push_back(Point2{v.at(0).get<double>(), v.at(1).get<double>()});
    p.domain = DomainSpec::polygon(std::move(verts));
  } else {
    throw ParameterError("problem_from_json: unknown domain kind " + kind);
  }
  if (j.contains("coefficients")) {
    const auto& jc = j.at("coefficients");
    const double c = jc.value("c", 0.0);
    if (jc.contains("a") && jc.at("a").is_array()) {
      const auto& arr = jc.at("a");
      p.coeff = Coefficients::constant_matrix(
          SymMat2{arr.at(0).get<double>(), arr.at(1).get<double>(),
                  arr.at(2).get<double>()},
          c);
    } else {
      p.coeff = Coefficients::constant(jc.value("a", 1.0), c);
    }
  }
  if (j.contains("forcing")) {
    const auto& jf = j.at("forcing");
    const std::string fk = jf.at("kind").get<std::string>();
    if (fk == "constant") {
      p.forcing = Forcing::constant(jf.at("value").get<double>());
    } else if (fk == "spectral") {
      p.forcing = Forcing::spectral(
          jf.at("coefficients").get<std::vector<double>>());
    } else if (fk == "sine_product") {
      // scale * sin(kx pi x) sin(ky pi y); ky ignored on intervals
      const double scale = jf.value("scale", 1.0);
      const int kx = jf.value("kx", 1);
      const int ky = jf.value("ky", 1);
      const bool one_d = p.domain.is_interval();
      p.forcing = Forcing::closure([scale, kx, ky, one_d](Point2 pt) {
        const double sx = std::sin(kx * kPi * pt.x);
        return one_d ? scale * sx : scale * sx * std::sin(ky * kPi * pt.y);
      });
    } else {
      throw ParameterError("problem_from_json: unknown forcing kind " + fk);
    }
  }
  return p;
}

}  // namespace fracdiff
