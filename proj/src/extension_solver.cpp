#include "fracdiff/extension_solver.hpp"

#include <algorithm>
#include <cmath>

#include "fracdiff/errors.hpp"
#include "fracdiff/spectral_oracle.hpp"

namespace fracdiff {

namespace {

// Resolve the forcing into a pointwise evaluator; spectral data goes
// through an eigenbasis of the constant-coefficient operator.
struct ResolvedForcing {
  std::function<double(Point2)> eval;
  int max_mode = 0;  // largest 1D mode index, for quadrature boosting
};

ResolvedForcing resolve_forcing(const FractionalProblem& problem) {
  ResolvedForcing out;
  if (const auto* cst = std::get_if<Forcing::Constant>(&problem.forcing.kind)) {
    const double v = cst->value;
    out.eval = [v](Point2) { return v; };
    return out;
  }
  if (const auto* cls = std::get_if<Forcing::Closure>(&problem.forcing.kind)) {
    out.eval = cls->f;
    return out;
  }
  const auto& sp = std::get<Forcing::Spectral>(problem.forcing.kind);
  const int k = static_cast<int>(sp.coefficients.size());
  auto basis = std::make_shared<SpectralBasis>(
      build_basis(problem.domain, problem.coeff.constant_a_scalar(),
                  problem.coeff.constant_c(), std::max(k, 1)));
  auto fn = std::make_shared<SpectralFunction>();
  fn->basis = basis.get();
  fn->coeffs = sp.coefficients;
  for (const auto& mode : basis->modes)
    out.max_mode = std::max({out.max_mode, mode.kx, mode.ky});
  out.eval = [basis, fn](Point2 p) { return fn->eval(p); };
  return out;
}

}  // namespace

OmegaSystem make_omega_system(const P1Space& space,
                              const FractionalProblem& problem) {
  OmegaSystem sys;
  sys.dim = space.dim;
  sys.n_omega_elements = space.mesh.triangle_count();
  OmegaForms forms = assemble_omega(space, problem.coeff);
  sys.a_omega = std::move(forms.a_omega);
  sys.mass = std::move(forms.mass);
  const ResolvedForcing f = resolve_forcing(problem);
  sys.load = load_vector(space, f.eval);
  return sys;
}

OmegaSystem make_omega_system(const HpIntervalSpace& space,
                              const FractionalProblem& problem) {
  OmegaSystem sys;
  sys.dim = space.dim;
  sys.n_omega_elements = space.element_count();
  OmegaForms forms = assemble_omega(space, problem.coeff);
  sys.a_omega = std::move(forms.a_omega);
  sys.mass = std::move(forms.mass);
  const ResolvedForcing f = resolve_forcing(problem);
  // boost the rule so oscillatory spectral data stays resolved
  const double h_max = space.domain.length();  // coarse upper bound
  const int extra =
      f.max_mode > 0
          ? static_cast<int>(std::ceil(0.9 * f.max_mode * h_max)) + 4
          : 0;
  sys.load = load_vector(space, f.eval, std::min(extra, 320));
  return sys;
}

DiagonalizedSystem diagonalize(const YSpace& y_space, double alpha) {
  const WeightedForms forms = assemble_weighted(y_space, alpha);
  const linalg::GenEig eig = linalg::gen_sym_eig(forms.mass, forms.stiffness);
  DiagonalizedSystem diag;
  diag.y_space = y_space;
  diag.alpha = alpha;
  diag.mu = eig.values;
  // eigenvalues below the dense solver's absolute resolution can round
  // negative; clamp those to the mass-only limit, reject real negatives
  const double noise = 1e-12 * std::max(diag.mu.maxCoeff(), 1.0);
  for (int i = 0; i < diag.mu.size(); ++i) {
    if (diag.mu(i) < -noise)
      throw IndefiniteMatrixError("diagonalize: negative eigenvalue");
    if (diag.mu(i) < 0.0) diag.mu(i) = 0.0;
  }
  diag.vectors = eig.vectors;
  // the y-vertex dof at y = 0 is global dof 0; bubbles vanish there
  diag.trace0 = eig.vectors.row(0).transpose();
  return diag;
}

linalg::Vector ExtensionSolution::trace_coeffs() const {
  linalg::Vector acc = linalg::Vector::Zero(u.rows());
  for (int i = 0; i < diag.size(); ++i) acc += diag.trace0(i) * u.col(i);
  return acc;
}

double ExtensionSolution::trace_pairing() const {
  return omega_load.dot(trace_coeffs());
}

double ExtensionSolution::energy_squared() const {
  double acc = 0.0;
  for (double e : mode_energy_sq) acc += e;
  return acc;
}

ExtensionSolution solve_diagonalized(const FractionalProblem& problem,
                                     const OmegaSystem& omega,
                                     const DiagonalizedSystem& diag,
                                     Exec exec) {
  const int m = diag.size();
  ExtensionSolution sol;
  sol.diag = diag;
  sol.order = problem.order;
  sol.omega_load = omega.load;
  sol.u.resize(omega.dim, m);
  sol.mode_energy_sq.assign(static_cast<std::size_t>(m), 0.0);
  const double d_s = problem.order.d_s;
  bool failed = false;

  auto solve_mode = [&](int i) {
    const linalg::SparseSym sys =
        linalg::SparseSym::combine(diag.mu(i), omega.a_omega, 1.0, omega.mass);
    const linalg::Vector rhs = (d_s * diag.trace0(i)) * omega.load;
    const linalg::Vector ui = linalg::spd_solve(sys, rhs);
    sol.u.col(i) = ui;
    sol.mode_energy_sq[static_cast<std::size_t>(i)] = rhs.dot(ui);
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic) reduction(|| : failed)
    for (int i = 0; i < m; ++i) {
      try {
        solve_mode(i);
      } catch (...) {
        failed = true;
      }
    }
    if (failed)
      throw IndefiniteMatrixError(
          "solve_diagonalized: a decoupled solve failed");
  } else {
    for (int i = 0; i < m; ++i) solve_mode(i);
  }
  return sol;
}

ExtensionSolution solve_diagonalized(const FractionalProblem& problem,
                                     const P1Space& space,
                                     const YSpace& y_space, Exec exec) {
  return solve_diagonalized(problem, make_omega_system(space, problem),
                            diagonalize(y_space, problem.order.alpha), exec);
}

ExtensionSolution solve_diagonalized(const FractionalProblem& problem,
                                     const HpIntervalSpace& space,
                                     const YSpace& y_space, Exec exec) {
  return solve_diagonalized(problem, make_omega_system(space, problem),
                            diagonalize(y_space, problem.order.alpha), exec);
}

FullTensorSolution solve_full_tensor_direct(const FractionalProblem& problem,
                                            const OmegaSystem& omega,
                                            const YSpace& y_space) {
  const WeightedForms yforms = assemble_weighted(y_space, problem.order.alpha);
  const int ny = y_space.dim;
  const int nx = omega.dim;
  const long long total = static_cast<long long>(ny) * nx;
  if (total > 500000)
    throw ResourceError("solve_full_tensor_direct: dof cap 5e5 exceeded");

  // global index (iy, ix) -> iy * nx + ix
  linalg::SparseSym big(static_cast<int>(total));
  const auto& ax = omega.a_omega.upper();
  const auto& mx = omega.mass.upper();
  for (int iy = 0; iy < ny; ++iy) {
    for (int jy = iy; jy < ny; ++jy) {
      const double my_entry = yforms.mass(iy, jy);
      const double sy_entry = yforms.stiffness(iy, jy);
      if (my_entry == 0.0 && sy_entry == 0.0) continue;
      const bool diag_block = (iy == jy);
      for (int k = 0; k < ax.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(ax, k); it; ++it) {
          const int ix = static_cast<int>(it.row());
          const int jx = static_cast<int>(it.col());
          const double v = my_entry * it.value();
          if (v == 0.0) continue;
          big.add(iy * nx + ix, jy * nx + jx, v);
          if (!diag_block && ix != jx) big.add(iy * nx + jx, jy * nx + ix, v);
        }
      }
      for (int k = 0; k < mx.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(mx, k); it; ++it) {
          const int ix = static_cast<int>(it.row());
          const int jx = static_cast<int>(it.col());
          const double v = sy_entry * it.value();
          if (v == 0.0) continue;
          big.add(iy * nx + ix, jy * nx + jx, v);
          if (!diag_block && ix != jx) big.add(iy * nx + jx, jy * nx + ix, v);
        }
      }
    }
  }
  big.finalize();

  linalg::Vector rhs = linalg::Vector::Zero(total);
  // only the y-basis function at the y = 0 vertex has a nonzero trace
  rhs.head(nx) = problem.order.d_s * omega.load;
  const linalg::Vector w = linalg::spd_solve(big, rhs);

  FullTensorSolution out;
  out.w.resize(nx, ny);
  for (int iy = 0; iy < ny; ++iy) out.w.col(iy) = w.segment(iy * nx, nx);
  out.trace = out.w.col(0);
  out.trace_pairing = omega.load.dot(out.trace);
  out.energy_sq = w.dot(big.apply(w));
  return out;
}

double SparseSolution::trace_pairing() const {
  double acc = 0.0;
  for (const auto& c : components) acc += c.sign * c.pairing;
  return acc;
}

long long SparseSolution::total_dof() const {
  long long acc = 0;
  for (const auto& c : components)
    acc += static_cast<long long>(c.n_omega) * c.n_y;
  return acc;
}

namespace {

void check_y_hierarchy(const std::vector<YSpace>& y_spaces, int L) {
  if (static_cast<int>(y_spaces.size()) < L + 1)
    throw ParameterError("solve_sparse_combination: need y levels 0..L");
  for (int l = 0; l + 1 <= L; ++l) {
    const auto& coarse = y_spaces[static_cast<std::size_t>(l)].mesh.breakpoints;
    const auto& fine =
        y_spaces[static_cast<std::size_t>(l) + 1].mesh.breakpoints;
    if (std::abs(coarse.back() - fine.back()) > 1e-12 * coarse.back())
      throw ParameterError(
          "solve_sparse_combination: y-hierarchy heights differ");
    for (double bp : coarse) {
      bool found = false;
      for (double fp : fine)
        if (std::abs(fp - bp) <= 1e-12 * std::max(1.0, bp)) {
          found = true;
          break;
        }
      if (!found)
        throw ParameterError(
            "solve_sparse_combination: y-hierarchy is not nested");
    }
  }
}

template <typename Space>
SparseSolution sparse_combination_impl(const FractionalProblem& problem,
                                       const std::vector<Space>& spaces,
                                       const std::vector<YSpace>& y_spaces,
                                       int L, Exec exec) {
  if (L < 0) throw ParameterError("solve_sparse_combination: L >= 0");
  if (static_cast<int>(spaces.size()) < L + 1)
    throw ParameterError("solve_sparse_combination: need base levels 0..L");
  check_y_hierarchy(y_spaces, L);
  for (int l = 0; l + 1 <= L; ++l)
    if (spaces[static_cast<std::size_t>(l)].dim >
        spaces[static_cast<std::size_t>(l) + 1].dim)
      throw ParameterError(
          "solve_sparse_combination: base hierarchy is not refined");

  SparseSolution sol;
  sol.level = L;
  sol.order = problem.order;
  // assemble each level once; the component solves share them read-only
  std::vector<OmegaSystem> omega(static_cast<std::size_t>(L) + 1);
  std::vector<DiagonalizedSystem> diag(static_cast<std::size_t>(L) + 1);
  for (int l = 0; l <= L; ++l) {
    omega[static_cast<std::size_t>(l)] =
        make_omega_system(spaces[static_cast<std::size_t>(l)], problem);
    diag[static_cast<std::size_t>(l)] = diagonalize(
        y_spaces[static_cast<std::size_t>(l)], problem.order.alpha);
  }

  auto run = [&](int lx, int ly, int sign) {
    const ExtensionSolution comp =
        solve_diagonalized(problem, omega[static_cast<std::size_t>(lx)],
                           diag[static_cast<std::size_t>(ly)], exec);
    SparseComponent c;
    c.level_x = lx;
    c.level_y = ly;
    c.sign = sign;
    c.n_omega = omega[static_cast<std::size_t>(lx)].dim;
    c.n_y = diag[static_cast<std::size_t>(ly)].size();
    c.pairing = comp.trace_pairing();
    sol.components.push_back(c);
  };
  for (int l = 0; l <= L; ++l) run(l, L - l, +1);
  for (int l = 1; l <= L; ++l) run(l - 1, L - l, -1);
  return sol;
}

}  // namespace

SparseSolution solve_sparse_combination(const FractionalProblem& problem,
                                        const std::vector<P1Space>& tri_spaces,
                                        const std::vector<YSpace>& y_spaces,
                                        int L, Exec exec) {
  return sparse_combination_impl(problem, tri_spaces, y_spaces, L, exec);
}

SparseSolution solve_sparse_combination(
    const FractionalProblem& problem,
    const std::vector<HpIntervalSpace>& interval_spaces,
    const std::vector<YSpace>& y_spaces, int L, Exec exec) {
  return sparse_combination_impl(problem, interval_spaces, y_spaces, L, exec);
}

namespace {

double checked_error(double reference_pairing, double pairing_ds) {
  const double err2 = reference_pairing - pairing_ds;
  if (err2 < -1e-12 * std::abs(reference_pairing))
    throw ReferenceInconsistencyError(
        "energy_error_squared: computed pairing exceeds the reference");
  return err2;
}

}  // namespace

double energy_error_squared(double reference_pairing,
                            const ExtensionSolution& sol) {
  return checked_error(reference_pairing, sol.order.d_s * sol.trace_pairing());
}

double energy_error_squared(double reference_pairing,
                            const SparseSolution& sol) {
  return checked_error(reference_pairing, sol.order.d_s * sol.trace_pairing());
}

TruncationChoice choose_truncation(double h, YMode mode, double s) {
  if (!(h > 0.0 && h < 1.0))
    throw ParameterError("choose_truncation: h in (0,1) required");
  TruncationChoice c;
  if (mode == YMode::P1) {
    c.Y = std::max(1.0, std::abs(std::log(h)));
    c.eta = 2.0 / s;
    c.k = 0.5 * h;
    return c;
  }
  c.Y = std::max(1.0, std::abs(std::log2(h)) / 3.0);
  c.M =
      std::max(1, static_cast<int>(std::lround(std::abs(std::log2(0.5 * h)))));
  c.sigma = 0.05;
  c.slope = 2.0;
  return c;
}

}  // namespace fracdiff
