#ifndef FRACDIFF_PROBLEM_HPP
#define FRACDIFF_PROBLEM_HPP

#include <array>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace fracdiff {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Fractional order s together with the derived extension parameters
// alpha = 1 - 2s and the normalization d_s = 2^{1-2s} Gamma(1-s)/Gamma(s).
// Immutable after construction.
struct FractionalOrder {
  double s;
  double alpha;
  double d_s;
};

// Gamma function via the Lanczos approximation (g = 7, 9 coefficients),
// accurate to ~1e-14 relative on the range used here. Kept local so that
// d_s is bit-stable across platforms.
double gamma_fn(double x);

// Throws std::domain_error unless 0 < s < 1.
FractionalOrder make_order(double s);

// Diffusion matrix A (2x2 symmetric, positive definite) and reaction c >= 0,
// both evaluable pointwise. 1D problems use a11 only.
struct SymMat2 {
  double a11 = 1.0;
  double a12 = 0.0;
  double a22 = 1.0;
};

struct Coefficients {
  std::function<SymMat2(Point2)> a;
  std::function<double(Point2)> c;

  static Coefficients constant(double a_scalar, double c_scalar);
  static Coefficients constant_matrix(SymMat2 a_mat, double c_scalar);

  bool is_constant() const { return constant_; }
  double constant_a_scalar() const;  // throws unless constant and isotropic
  double constant_c() const;         // throws unless constant

 private:
  bool constant_ = false;
  bool isotropic_ = false;
  SymMat2 const_a_;
  double const_c_ = 0.0;
};

struct Interval {
  double a = 0.0;
  double b = 1.0;
  double length() const { return b - a; }
};

struct Rectangle {
  double ax = 0.0, bx = 1.0;
  double ay = 0.0, by = 1.0;
};

struct Polygon {
  std::vector<Point2> vertices;  // counterclockwise, no repetition
};

struct Corner {
  Point2 location;
  double opening_angle;  // interior angle in (0, 2*pi)
};

// Domain descriptor. Polygon construction validates simplicity, orientation
// and computes the corner list; angle sum must match (n-2)*pi.
struct DomainSpec {
  std::variant<Interval, Rectangle, Polygon> shape;
  std::vector<Corner> corners;  // polygons only

  static DomainSpec interval(double a, double b);
  static DomainSpec rectangle(double ax, double bx, double ay, double by);
  static DomainSpec polygon(std::vector<Point2> vertices);
  static DomainSpec lshape();  // vertices (0,0),(1,0),(1,1),(-1,1),(-1,-1),(0,-1)

  bool is_interval() const { return std::holds_alternative<Interval>(shape); }
  bool is_rectangle() const { return std::holds_alternative<Rectangle>(shape); }
  bool is_polygon() const { return std::holds_alternative<Polygon>(shape); }
  double diameter() const;
};

// Right-hand side f. Spectral coefficients are understood with respect to
// the eigenbasis of the problem's operator on its domain.
struct Forcing {
  struct Spectral {
    std::vector<double> coefficients;
  };
  struct Closure {
    std::function<double(Point2)> f;
  };
  struct Constant {
    double value;
  };
  std::variant<Spectral, Closure, Constant> kind;

  static Forcing spectral(std::vector<double> coefficients);
  static Forcing closure(std::function<double(Point2)> f);
  static Forcing constant(double value);

  // Pointwise evaluation; throws UnsupportedDomainError for spectral data
  // (those are evaluated through a SpectralBasis instead).
  double operator()(Point2 p) const;
  bool is_spectral() const { return std::holds_alternative<Spectral>(kind); }
  bool is_constant() const { return std::holds_alternative<Constant>(kind); }
};

// The weight y^beta e^{gamma y} used in regularity checks.
struct ExpWeight {
  double beta = 0.0;
  double gamma = 0.0;
};

// Throws SingularEvaluationError at y = 0 when beta < 0; y < 0 is a domain
// error.
double weight_eval(const ExpWeight& w, double y);

// One instance of the fractional diffusion problem L^s u = f.
struct FractionalProblem {
  FractionalOrder order;
  DomainSpec domain;
  Coefficients coeff;
  Forcing forcing;
};

// JSON round trip with keys {s, domain, coefficients, forcing}. Only
// constant coefficients and constant/spectral forcing serialize; closures
// throw UnsupportedDomainError.
std::string problem_to_json(const FractionalProblem& p);
FractionalProblem problem_from_json(const std::string& json_text);

}  // namespace fracdiff

#endif
