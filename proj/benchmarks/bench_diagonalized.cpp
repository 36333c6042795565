// Timing comparison of the serial reference path against the OpenMP path
// for the decoupled reaction-diffusion solves and the oracle tail sums.

#include <chrono>
#include <cstdio>

#include "fracdiff/extension_solver.hpp"
#include "fracdiff/spectral_oracle.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace fracdiff;

namespace {

double wall_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int repeats = 3;
  if (argc > 1) repeats = std::atoi(argv[1]);
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  // medium 2D instance: unit square, ~2000 base dofs, ~80 eigenmodes
  FractionalProblem problem{make_order(0.5), DomainSpec::rectangle(0, 1, 0, 1),
                            Coefficients::constant(1.0, 0.0),
                            Forcing::spectral({1.0})};
  TriMesh mesh = coarse_triangulation(problem.domain);
  for (int i = 0; i < 10; ++i) mesh.refine_uniform();
  P1Space space(std::move(mesh));
  const YMesh ymesh = radical_geometric_mesh(4.0, 1.0 / 16, 4.0);
  YSpace yspace(ymesh, uniform_degree_vector(ymesh.element_count(), 1));
  const OmegaSystem omega = make_omega_system(space, problem);
  const DiagonalizedSystem diag = diagonalize(yspace, problem.order.alpha);
  std::printf("instance: N_omega=%d, modes=%d\n", omega.dim, diag.size());

  double ser = 1e300, par = 1e300;
  double pairing_ser = 0.0, pairing_par = 0.0;
  for (int r = 0; r < repeats; ++r) {
    ser = std::min(ser, wall_ms([&] {
            pairing_ser =
                solve_diagonalized(problem, omega, diag, Exec::Serial)
                    .trace_pairing();
          }));
    par = std::min(par, wall_ms([&] {
            pairing_par =
                solve_diagonalized(problem, omega, diag, Exec::Parallel)
                    .trace_pairing();
          }));
  }
  std::printf("solve_diagonalized   serial %6.1f ms   openmp %6.1f ms   "
              "speedup %.2fx   results match: %s\n",
              ser, par, ser / par, pairing_ser == pairing_par ? "yes" : "NO");

  // oracle tail energy over many modes (parallel inside; the serial
  // reference pins one thread)
  const SpectralBasis basis = build_basis(problem.domain, 1.0, 0.0, 1024);
  const SpectralFunction f = project_forcing(basis, Forcing::constant(1.0));
  const auto order = make_order(0.3);
  double tail_ser = 1e300, tail_par = 1e300;
  double v_ser = 0.0, v_par = 0.0;
#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
#endif
  for (int r = 0; r < repeats; ++r) {
#ifdef _OPENMP
    omp_set_num_threads(1);
#endif
    tail_ser = std::min(tail_ser, wall_ms([&] {
                 v_ser = tail_energy(basis, f, order, 0.5);
               }));
#ifdef _OPENMP
    omp_set_num_threads(max_threads);
#endif
    tail_par = std::min(tail_par, wall_ms([&] {
                 v_par = tail_energy(basis, f, order, 0.5);
               }));
  }
  std::printf("tail_energy (1024 m) serial %6.1f ms   openmp %6.1f ms   "
              "speedup %.2fx   results match: %s\n",
              tail_ser, tail_par, tail_ser / tail_par,
              v_ser == v_par ? "yes" : "NO");
  return 0;
}
