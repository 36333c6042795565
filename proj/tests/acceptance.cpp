// Acceptance suite: end-to-end checks of the solver pipelines at pinned
// tolerances, one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fracdiff/bessel.hpp"
#include "fracdiff/errors.hpp"
#include "fracdiff/extension_solver.hpp"
#include "fracdiff/fem_omega.hpp"
#include "fracdiff/fem_y.hpp"
#include "fracdiff/problem.hpp"
#include "fracdiff/spectral_oracle.hpp"
#include "fracdiff/study.hpp"

using namespace fracdiff;

namespace {

constexpr double kPi = std::numbers::pi;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double mean = sy / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = f.slope * xs[i] + f.intercept;
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean) * (ys[i] - mean);
  }
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

// fitted slope of log2(err) against the level index (levels step by 1)
double fitted_rate(const std::vector<StudyRow>& rows) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(static_cast<double>(r.level));
    ys.push_back(-std::log2(r.energy_error));
  }
  return fit_line(xs, ys).slope;
}

struct Harness {
  int failures = 0;

  void report(int id, const char* name, bool ok, const std::string& detail,
              double seconds) {
    std::printf("criterion %2d %s %s (%s; %.1f s)\n", id, ok ? "PASS" : "FAIL",
                name, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
  }

  void run(int id, const char* name,
           const std::function<std::pair<bool, std::string>()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = fn();
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    report(id, name, ok, detail, secs);
  }
};

char buf[512];

std::string fmt(const char* f, ...) {
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

FractionalProblem lshape_smooth(double s) {
  const double scale = std::pow(2.0 * kPi * kPi, s);
  return FractionalProblem{
      make_order(s), DomainSpec::lshape(), Coefficients::constant(1.0, 0.0),
      Forcing::closure([scale](Point2 p) {
        return scale * std::sin(kPi * p.x) * std::sin(kPi * p.y);
      })};
}

// d_s <f,u> for the sine eigenfunction datum: u = sin sin solves exactly,
// and the pairing reduces to d_s (2 pi^2)^s int u^2
double lshape_smooth_pairing(double s) {
  return make_order(s).d_s * std::pow(2.0 * kPi * kPi, s) * 0.75;
}

// --- criterion 1 -----------------------------------------------------

std::pair<bool, std::string> criterion1() {
  std::mt19937 rng(20250810);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_energy = 0.0, worst_trace = 0.0;
  int instances = 0;
  for (double s : {0.25, 0.5, 0.75}) {
    // interval instance
    {
      const double a_coef = 0.5 + 1.5 * unif(rng);
      const double c_coef = unif(rng);
      std::vector<double> fc = {normal(rng), normal(rng), normal(rng)};
      const auto iv = (instances % 2 == 0) ? Interval{0.0, 1.0}
                                           : Interval{0.3, 1.7};
      FractionalProblem p{make_order(s),
                          DomainSpec::interval(iv.a, iv.b),
                          Coefficients::constant(a_coef, c_coef),
                          Forcing::spectral(fc)};
      const auto space = uniform_interval_space(iv, 20 + 4 * instances, 1);
      YSpace yspace =
          (instances % 2 == 0)
              ? YSpace(radical_geometric_mesh(2.0 / s, 0.25, 2.0),
                       uniform_degree_vector(
                           radical_geometric_mesh(2.0 / s, 0.25, 2.0)
                               .element_count(),
                           1))
              : YSpace(geometric_mesh(0.3, 4, 1.5),
                       linear_degree_vector(4, 1.5));
      const auto omega = make_omega_system(space, p);
      const auto diag = diagonalize(yspace, p.order.alpha);
      const auto sd = solve_diagonalized(p, omega, diag);
      const auto st = solve_full_tensor_direct(p, omega, yspace);
      worst_energy = std::max(
          worst_energy, std::abs(p.order.d_s * sd.trace_pairing() -
                                 st.energy_sq) /
                            st.energy_sq);
      const auto trace = sd.trace_coeffs();
      worst_trace = std::max(worst_trace,
                             (trace - st.trace).cwiseAbs().maxCoeff() /
                                 std::max(1e-30, trace.cwiseAbs().maxCoeff()));
      ++instances;
    }
    // unit square instance
    {
      const double a_coef = 0.5 + unif(rng);
      const double c_coef = 0.5 * unif(rng);
      std::vector<double> fc = {normal(rng), 0.3 * normal(rng)};
      FractionalProblem p{make_order(s), DomainSpec::rectangle(0, 1, 0, 1),
                          Coefficients::constant(a_coef, c_coef),
                          Forcing::spectral(fc)};
      TriMesh mesh = coarse_triangulation(p.domain);
      for (int i = 0; i < 4; ++i) mesh.refine_uniform();
      P1Space space(std::move(mesh));
      YSpace yspace(geometric_mesh(0.4, 3, 2.0), linear_degree_vector(3, 2.0));
      const auto omega = make_omega_system(space, p);
      const auto diag = diagonalize(yspace, p.order.alpha);
      if (static_cast<long long>(omega.dim) * diag.size() > 10000)
        return {false, "instance exceeds the 1e4 dof bound"};
      const auto sd = solve_diagonalized(p, omega, diag);
      const auto st = solve_full_tensor_direct(p, omega, yspace);
      worst_energy = std::max(
          worst_energy, std::abs(p.order.d_s * sd.trace_pairing() -
                                 st.energy_sq) /
                            st.energy_sq);
      const auto trace = sd.trace_coeffs();
      worst_trace = std::max(worst_trace,
                             (trace - st.trace).cwiseAbs().maxCoeff() /
                                 std::max(1e-30, trace.cwiseAbs().maxCoeff()));
      ++instances;
    }
  }
  const bool ok = worst_energy <= 1e-10 && worst_trace <= 1e-9;
  return {ok, fmt("%d instances, max rel energy gap %.2e, max trace gap %.2e",
                  instances, worst_energy, worst_trace)};
}

// --- criterion 2 -----------------------------------------------------

std::pair<bool, std::string> criterion2() {
  StudySpec spec;
  spec.problem = FractionalProblem{make_order(0.5), DomainSpec::interval(0, 1),
                                   Coefficients::constant(1.0, 0.0),
                                   Forcing::spectral({1.0})};
  spec.method = Method::HpInY;
  spec.level_min = 5;
  spec.level_max = 7;
  const auto result = run_study(spec);
  const double target = 1.0 / kPi;
  bool decreasing = true;
  for (std::size_t i = 1; i < result.rows.size(); ++i)
    decreasing = decreasing &&
                 result.rows[i].energy_error < result.rows[i - 1].energy_error;
  const double err2 = result.rows.back().energy_error *
                      result.rows.back().energy_error;
  const double rel = err2 / target;  // pairing deviation relative to 1/pi
  const bool ok = decreasing && rel < 1e-3 &&
                  result.rows.back().m_elements == 8;
  return {ok, fmt("d_s<f,tr> = %.8f vs 1/pi = %.8f, rel gap %.2e, M=%d",
                  target - err2, target, rel, result.rows.back().m_elements)};
}

// --- criterion 3 -----------------------------------------------------

std::pair<bool, std::string> criterion3() {
  std::string detail;
  bool ok = true;
  for (double s : {0.3, 0.7}) {
    StudySpec spec;
    spec.problem = lshape_smooth(s);
    spec.method = Method::P1Uniform;
    spec.level_min = 2;
    spec.level_max = 6;
    spec.reference_pairing = lshape_smooth_pairing(s);
    spec.jobs = 0;
    const auto result = run_study(spec);
    const double rate = fitted_rate(result.rows);
    ok = ok && rate >= 0.85 && rate <= 1.10;
    detail += fmt("s=%.1f slope %.3f  ", s, rate);
  }
  return {ok, detail + "(window [0.85, 1.10])"};
}

// --- criterion 4 -----------------------------------------------------

std::pair<bool, std::string> criterion4() {
  StudySpec graded;
  graded.problem =
      FractionalProblem{make_order(0.75), DomainSpec::lshape(),
                        Coefficients::constant(1.0, 0.0), Forcing::constant(1.0)};
  graded.method = Method::P1Graded;
  graded.level_min = 2;
  graded.level_max = 5;
  graded.reference = ReferenceMode::FineSolve;
  const auto graded_result = run_study(graded);  // throws if self-error > 5%

  StudySpec uniform = graded;
  uniform.method = Method::P1Uniform;
  uniform.reference_pairing = graded_result.reference_pairing;  // frozen
  const auto uniform_result = run_study(uniform);

  const double rate_graded = fitted_rate(graded_result.rows);
  const double rate_uniform = fitted_rate(uniform_result.rows);
  const bool ok = rate_graded >= 0.9 && rate_uniform <= rate_graded - 0.1;
  return {ok, fmt("graded slope %.3f (>= 0.9), uniform slope %.3f (<= %.3f), "
                  "ref self-error %.2e",
                  rate_graded, rate_uniform, rate_graded - 0.1,
                  graded_result.reference_self_error)};
}

// --- criterion 5 -----------------------------------------------------

std::pair<bool, std::string> criterion5() {
  const double s = 0.5;
  StudySpec spec;
  const double scale = std::pow(2.0 * kPi * kPi, s);
  spec.problem = FractionalProblem{
      make_order(s), DomainSpec::rectangle(0, 1, 0, 1),
      Coefficients::constant(1.0, 0.0),
      Forcing::closure([scale](Point2 p) {
        return scale * std::sin(kPi * p.x) * std::sin(kPi * p.y);
      })};
  spec.method = Method::Sparse;
  spec.level_min = 2;
  spec.level_max = 6;
  spec.reference_pairing = make_order(s).d_s * scale * 0.25;
  // one sufficiently large truncation for the whole hierarchy study
  spec.overrides.Y = std::abs(std::log(std::pow(2.0, -6)));
  const auto sparse = run_study(spec);

  StudySpec full = spec;
  full.method = Method::P1Uniform;
  const auto tensor = run_study(full);

  // growth exponent of N_total in 2^L on the asymptotic tail L = 4..6
  auto tail_exponent = [](const std::vector<StudyRow>& rows) {
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
      if (r.level < 4) continue;
      xs.push_back(static_cast<double>(r.level));
      ys.push_back(std::log2(static_cast<double>(r.n_total)));
    }
    return fit_line(xs, ys).slope;
  };
  const double e_sparse = tail_exponent(sparse.rows);
  const double e_full = tail_exponent(tensor.rows);
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < sparse.rows.size(); ++i)
    worst_ratio = std::max(worst_ratio, sparse.rows[i].energy_error /
                                            tensor.rows[i].energy_error);
  const bool ok = std::abs(e_sparse - 2.0) <= 0.15 &&
                  std::abs(e_full - 3.0) <= 0.15 && worst_ratio <= 3.0;
  return {ok, fmt("N_total exponents: sparse %.3f (2.0 +- 0.15), full %.3f "
                  "(3.0 +- 0.15); max error ratio %.2f (<= 3)",
                  e_sparse, e_full, worst_ratio)};
}

// --- criterion 6 -----------------------------------------------------

std::pair<bool, std::string> criterion6() {
  FractionalProblem p{make_order(0.5), DomainSpec::interval(0, 1),
                      Coefficients::constant(1.0, 0.0),
                      Forcing::spectral({1.0})};
  const double target = 1.0 / kPi;
  const auto space = uniform_interval_space(Interval{0, 1}, 1 << 17, 1);
  const auto omega = make_omega_system(space, p);
  std::vector<double> ms, logerr;
  // grading 1/2 paces the decay so all nine errors sit far above the
  // frozen Omega floor and the fit stays clean
  for (int m = 2; m <= 10; ++m) {
    YSpace yspace(geometric_mesh(0.5, m, static_cast<double>(m)),
                  linear_degree_vector(m, 2.0));
    const auto diag = diagonalize(yspace, p.order.alpha);
    const auto sol = solve_diagonalized(p, omega, diag);
    const double err2 = std::max(1e-300, target - p.order.d_s * sol.trace_pairing());
    ms.push_back(static_cast<double>(m));
    logerr.push_back(0.5 * std::log(err2));
  }
  const LineFit f = fit_line(ms, logerr);
  const bool ok = f.slope <= -0.3 && f.r2 >= 0.97;
  return {ok, fmt("log(err) vs M slope %.3f (<= -0.3), R^2 %.4f (>= 0.97)",
                  f.slope, f.r2)};
}

// --- criterion 7 -----------------------------------------------------

std::pair<bool, std::string> criterion7() {
  StudySpec spec;
  spec.problem = FractionalProblem{make_order(0.25), DomainSpec::interval(0, 1),
                                   Coefficients::constant(1.0, 0.0),
                                   Forcing::constant(1.0)};
  spec.method = Method::HpFull1d;
  spec.level_min = 2;
  spec.level_max = 9;
  spec.overrides.oracle_modes = 500000;
  const auto result = run_study(spec);
  bool decreasing = true;
  std::vector<double> qs, logerr;
  for (const auto& r : result.rows) {
    qs.push_back(static_cast<double>(r.q));
    logerr.push_back(std::log(r.energy_error));
  }
  for (std::size_t i = 1; i < logerr.size(); ++i)
    decreasing = decreasing && logerr[i] < logerr[i - 1];
  // convex-to-linear: second differences of log(err) stay near or above 0
  double min_second_diff = 1e300;
  for (std::size_t i = 2; i < logerr.size(); ++i)
    min_second_diff = std::min(
        min_second_diff, logerr[i] - 2.0 * logerr[i - 1] + logerr[i - 2]);
  auto fit_range = [&](int q_lo, int q_hi) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < qs.size(); ++i)
      if (qs[i] >= q_lo && qs[i] <= q_hi) {
        xs.push_back(qs[i]);
        ys.push_back(logerr[i]);
      }
    return -fit_line(xs, ys).slope;
  };
  const double b_low = fit_range(2, 6);
  const double b_high = fit_range(4, 9);
  const double variation =
      std::abs(b_low - b_high) / std::max(b_low, b_high);
  const double tail_ok =
      result.oracle_tail_estimate <=
      0.01 * result.rows.back().energy_error * result.rows.back().energy_error;
  const bool ok = decreasing && min_second_diff >= -0.2 && b_low >= 0.3 &&
                  b_high >= 0.3 && variation < 0.4 && tail_ok;
  return {ok, fmt("b(2..6)=%.3f b(4..9)=%.3f variation %.1f%% (< 40%%), "
                  "min 2nd diff %.3f, decreasing %d",
                  b_low, b_high, 100.0 * variation, min_second_diff,
                  decreasing ? 1 : 0)};
}

// --- criterion 8 -----------------------------------------------------

std::pair<bool, std::string> criterion8() {
  // K_{1/2} closed form
  double worst_half = 0.0;
  for (double z = 0.01; z <= 50.0; z *= 1.21) {
    const double exact = std::sqrt(0.5 * kPi / z) * std::exp(-z);
    worst_half = std::max(worst_half,
                          std::abs(bessel_k(0.5, z) - exact) / exact);
  }
  // psi(0) = 1 and the s = 1/2 profile
  bool psi0_ok = true;
  double worst_prof = 0.0;
  for (double s : {0.25, 0.4, 0.5, 0.6, 0.75}) {
    psi0_ok = psi0_ok && psi(make_order(s), 0.0) == 1.0;
  }
  const auto half_order = make_order(0.5);
  for (double z = 0.0; z <= 40.0; z += 0.37) {
    const double exact = std::exp(-z);
    worst_prof =
        std::max(worst_prof, std::abs(psi(half_order, z) - exact) / exact);
  }
  // differentiation identity vs finite differences
  double worst_diff = 0.0;
  for (double nu : {0.3, 0.5, 0.75, 1.2}) {
    for (double z = 0.1; z <= 10.0; z *= 1.6) {
      auto g = [&](double t) { return std::pow(t, nu) * bessel_k(nu, t); };
      const double h = 1e-5 * std::max(1.0, z);
      auto d4 = [&](double hh) {
        return (g(z - 2 * hh) - 8 * g(z - hh) + 8 * g(z + hh) - g(z + 2 * hh)) /
               (12.0 * hh);
      };
      const double fd = (16.0 * d4(0.5 * h) - d4(h)) / 15.0;
      const double exact = -std::pow(z, nu) * bessel_k(std::abs(nu - 1.0), z);
      worst_diff = std::max(worst_diff, std::abs(fd - exact) / std::abs(exact));
    }
  }
  // near-zero envelope ratio
  double worst_env = 0.0;
  for (double s : {0.25, 0.5, 0.75}) {
    const auto o = make_order(s);
    for (int ell = 1; ell <= 3; ++ell) {
      double fact = 1.0;
      for (int j = 2; j <= ell; ++j) fact *= j;
      for (double z = 1e-3; z < 1.0; z *= 1.5) {
        const double ratio = std::abs(psi_derivative(o, ell, z)) /
                             (o.d_s * fact * std::pow(z, 2.0 * s - ell));
        worst_env = std::max(worst_env, ratio);
      }
    }
  }
  const bool ok = worst_half <= 1e-11 && psi0_ok && worst_prof <= 1e-10 &&
                  worst_diff <= 1e-7 && worst_env <= 50.0;
  return {ok, fmt("K_half %.1e (<=1e-11), psi profile %.1e (<=1e-10), "
                  "diff identity %.1e (<=1e-7), envelope %.1f (<=50)",
                  worst_half, worst_prof, worst_diff, worst_env)};
}

// --- criterion 9 -----------------------------------------------------

std::pair<bool, std::string> criterion9() {
  struct Config {
    YSpace space;
    double alpha;
  };
  auto radical = [](double s, double k, double Y) {
    const YMesh mesh = radical_geometric_mesh(2.0 / s, k, Y);
    return Config{
        YSpace(mesh, uniform_degree_vector(mesh.element_count(), 1)),
        1.0 - 2.0 * s};
  };
  auto geometric = [](double s, double sigma, int m, double Y, double slope) {
    return Config{YSpace(geometric_mesh(sigma, m, Y),
                         linear_degree_vector(m, slope)),
                  1.0 - 2.0 * s};
  };
  std::vector<Config> configs;
  configs.push_back(radical(0.25, 0.25, 2.0));                      // c1
  configs.push_back(geometric(0.5, 0.3, 4, 1.5, 1.5));              // c1
  configs.push_back(geometric(0.5, 0.05, 8, 7.0 / 3.0, 2.0));       // c2
  configs.push_back(radical(0.3, std::pow(2.0, -5), std::log(16.0)));   // c3
  configs.push_back(radical(0.7, std::pow(2.0, -7), std::log(64.0)));   // c3
  configs.push_back(radical(0.75, std::pow(2.0, -6), std::log(32.0)));  // c4
  configs.push_back(radical(0.5, std::pow(2.0, -7), std::log(64.0)));   // c5
  configs.push_back(geometric(0.5, 0.35, 6, 6.0, 2.0));             // c6
  configs.push_back(geometric(0.5, 0.35, 10, 10.0, 2.0));           // c6
  configs.push_back(geometric(0.25, 0.05, 9, 3.0, 2.0));            // c7
  double worst_upper = 0.0;
  double worst_floor = 1e300;
  for (const auto& cfg : configs) {
    const auto diag = diagonalize(cfg.space, cfg.alpha);
    const double y_height = cfg.space.mesh.height();
    const double bound =
        y_height * y_height / (1.0 - cfg.alpha * cfg.alpha);
    worst_upper = std::max(worst_upper,
                           diag.mu(diag.size() - 1) / bound);
    double h_min = 1e300;
    for (int e = 0; e < cfg.space.mesh.element_count(); ++e)
      h_min = std::min(
          h_min, cfg.space.mesh.breakpoints[static_cast<std::size_t>(e) + 1] -
                     cfg.space.mesh.breakpoints[static_cast<std::size_t>(e)]);
    const double q = cfg.space.degrees.max_degree();
    const double floor = 1e-2 * h_min * h_min / (q * q * q * q);
    const double noise = 1e-12 * diag.mu(diag.size() - 1);
    worst_floor = std::min(worst_floor, (diag.mu(0) + noise) / floor);
  }
  const bool ok = worst_upper <= 1.0 + 1e-9 && worst_floor >= 1.0;
  return {ok, fmt("%zu spaces: max mu/bound %.6f (<= 1+1e-9), min "
                  "mu_min/floor %.1e (>= 1)",
                  configs.size(), worst_upper, worst_floor)};
}

// --- criterion 10 ----------------------------------------------------

std::pair<bool, std::string> criterion10() {
  auto slope_for = [](double s) {
    StudySpec spec;
    spec.problem = FractionalProblem{make_order(s), DomainSpec::interval(0, 1),
                                     Coefficients::constant(1.0, 0.0),
                                     Forcing::constant(1.0)};
    spec.method = Method::HpFull1d;
    const auto solved = solve_level(spec, 8);
    std::vector<double> dists;
    for (int j = 10; j >= 4; --j) dists.push_back(std::pow(2.0, -j));
    const auto pts = boundary_profile(*solved.interval_space,
                                      solved.solution.trace_coeffs(), dists);
    std::vector<double> xs, ys;
    for (const auto& pt : pts) {
      xs.push_back(std::log(pt.distance));
      ys.push_back(std::log(std::abs(pt.value)));
    }
    return fit_line(xs, ys).slope;
  };
  const double s_low = slope_for(0.25);
  const double s_high = slope_for(0.75);
  const bool ok = s_low >= 2.0 * 0.25 - 0.1 && s_low <= 2.0 * 0.25 + 0.15 &&
                  s_high >= 0.85 && s_high <= 1.1;
  return {ok, fmt("s=0.25 slope %.3f (in [0.40, 0.65]), s=0.75 slope %.3f "
                  "(in [0.85, 1.10])",
                  s_low, s_high)};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  Harness h;
  auto want = [&](int id) { return only == 0 || only == id; };

  if (want(1)) h.run(1, "diagonalization oracle equivalence", criterion1);
  if (want(2)) h.run(2, "spectral exactness at s=1/2", criterion2);
  if (want(3)) h.run(3, "first-order rate for smooth data", criterion3);
  if (want(4)) h.run(4, "corner grading restores the rate", criterion4);
  if (want(5)) h.run(5, "sparse complexity and accuracy", criterion5);
  if (want(6)) h.run(6, "exponential hp-in-y semidiscretization", criterion6);
  if (want(7)) h.run(7, "full hp exponential convergence", criterion7);
  if (want(8)) h.run(8, "Bessel/psi kernel suite", criterion8);
  if (want(9)) h.run(9, "decoupling eigenvalue bounds", criterion9);
  if (want(10)) h.run(10, "algebraic boundary singularity", criterion10);

  if (h.failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", h.failures);
  return h.failures == 0 ? 0 : 1;
}
