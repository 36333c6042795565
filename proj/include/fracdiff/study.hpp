#ifndef FRACDIFF_STUDY_HPP
#define FRACDIFF_STUDY_HPP

#include <optional>
#include <string>
#include <vector>

#include "fracdiff/extension_solver.hpp"
#include "fracdiff/problem.hpp"

namespace fracdiff {

// Batch convergence-study driver: configures a problem, runs a method over
// a range of levels, and emits one CSV row per level.

enum class Method { P1Graded, P1Uniform, Sparse, HpInY, HpFull1d };
enum class ReferenceMode { Oracle, FineSolve };

Method method_from_string(const std::string& name);
std::string method_to_string(Method m);

struct StudyOverrides {
  std::optional<double> Y;
  std::optional<double> eta;
  std::optional<double> k;
  std::optional<double> sigma;
  std::optional<int> M;
  std::optional<double> slope;
  std::optional<int> q;
  std::optional<int> layers;
  std::optional<double> sigma_x;
  std::optional<std::vector<double>> beta;
  std::optional<int> oracle_modes;
};

struct StudySpec {
  FractionalProblem problem;
  Method method = Method::P1Uniform;
  int level_min = 2;
  int level_max = 5;
  ReferenceMode reference = ReferenceMode::Oracle;
  std::optional<double> reference_pairing;  // explicit d_s <f,u> override
  StudyOverrides overrides;
  std::string out_path;
  int jobs = 0;  // 0 keeps the runtime default
  std::string dump_matrices_dir;
  std::string export_mesh_path;
};

struct StudyRow {
  int level = 0;
  double h = 0.0;
  int m_elements = 0;  // y-direction elements
  int q = 1;           // base-domain polynomial degree
  long long n_omega = 0;
  long long n_total = 0;
  double energy_error = 0.0;
  double eoc = 0.0;
  double wall_ms = 0.0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  double reference_pairing = 0.0;
  double reference_self_error = 0.0;  // fine-solve mode only
  double oracle_tail_estimate = 0.0;  // oracle mode only
};

StudyResult run_study(const StudySpec& spec);

// CSV with the exact column set
// level,h,M,q,N_omega,N_total,energy_error,eoc,wall_ms
std::string study_csv(const std::vector<StudyRow>& rows);

StudySpec study_from_json(const std::string& text);

// Trace samples near the left endpoint of a 1D solution at the given
// distances, for boundary-singularity slope inspection.
struct ProfilePoint {
  double distance = 0.0;
  double value = 0.0;
};
std::vector<ProfilePoint> boundary_profile(const HpIntervalSpace& space,
                                           const linalg::Vector& trace,
                                           const std::vector<double>& distances);

// One diagonalized solve with the method's per-level defaults; exposed for
// harnesses that need the discrete solution itself rather than CSV rows.
struct SolvedLevel {
  ExtensionSolution solution;
  std::shared_ptr<HpIntervalSpace> interval_space;  // 1D runs
  std::shared_ptr<P1Space> tri_space;               // 2D runs
  double h = 0.0;
  int m_elements = 0;
  int q = 1;
};
SolvedLevel solve_level(const StudySpec& spec, int level);

}  // namespace fracdiff

#endif
