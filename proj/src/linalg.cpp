#include "fracdiff/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fracdiff/errors.hpp"

namespace fracdiff {
namespace linalg {

namespace {
constexpr int kCholeskyCap = 200000;
constexpr double kResidualTarget = 1e-10;
}  // namespace

void SparseSym::add(int i, int j, double v) {
  if (finalized_) throw std::logic_error("SparseSym: add after finalize");
  if (i > j) std::swap(i, j);
  triplets_.emplace_back(i, j, v);
}

void SparseSym::finalize() {
  upper_.resize(n_, n_);
  upper_.setFromTriplets(triplets_.begin(), triplets_.end());
  upper_.prune(0.0);
  upper_.makeCompressed();
  triplets_.clear();
  triplets_.shrink_to_fit();
  finalized_ = true;
}

const Eigen::SparseMatrix<double>& SparseSym::upper() const {
  if (!finalized_) throw std::logic_error("SparseSym: not finalized");
  return upper_;
}

Vector SparseSym::apply(const Vector& x) const {
  return upper().selfadjointView<Eigen::Upper>() * x;
}

SparseSym SparseSym::combine(double a, const SparseSym& x, double b,
                             const SparseSym& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("SparseSym::combine: dimension mismatch");
  SparseSym r(x.size());
  r.upper_ = (a * x.upper() + b * y.upper()).pruned();
  r.upper_.makeCompressed();
  r.finalized_ = true;
  return r;
}

namespace {

Vector cg_jacobi(const Eigen::SparseMatrix<double>& upper, const Vector& b) {
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                           Eigen::Upper, Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(0.1 * kResidualTarget);
  cg.setMaxIterations(20000);
  cg.compute(upper);
  Vector x = cg.solve(b);
  if (cg.info() != Eigen::Success)
    throw IndefiniteMatrixError("spd_solve: conjugate gradient stagnated");
  return x;
}

}  // namespace

Vector spd_solve(const SparseSym& a, const Vector& b) {
  SpdFactor f(a);
  return f.solve(b);
}

SpdFactor::SpdFactor(const SparseSym& a)
    : n_(a.size()), use_cholesky_(a.size() <= kCholeskyCap) {
  if (use_cholesky_) {
    llt_.compute(a.upper().selfadjointView<Eigen::Upper>());
    if (llt_.info() != Eigen::Success)
      throw IndefiniteMatrixError("spd_solve: Cholesky factorization failed");
  } else {
    full_ = a.upper();
  }
}

Vector SpdFactor::solve(const Vector& b) const {
  Vector x = use_cholesky_ ? Vector(llt_.solve(b)) : cg_jacobi(full_, b);
  return x;
}

GenEig gen_sym_eig(const DenseSym& m, const DenseSym& s) {
  const int n = m.size();
  if (n != s.size())
    throw std::invalid_argument("gen_sym_eig: dimension mismatch");
  if (n > 2000)
    throw ResourceError("gen_sym_eig: dense solver capped at n = 2000");
  {
    Eigen::LLT<Eigen::MatrixXd> chol(s.matrix());
    if (chol.info() != Eigen::Success)
      throw IndefiniteMatrixError("gen_sym_eig: S is not positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      m.matrix(), s.matrix(), Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw IndefiniteMatrixError("gen_sym_eig: eigensolver failed");
  GenEig out;
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  // residual contract ||M v - mu S v|| <= 1e-9 (||M|| + mu ||S||)
  const double norm_m = m.matrix().norm();
  const double norm_s = s.matrix().norm();
  for (int i = 0; i < n; ++i) {
    const double mu = out.values(i);
    const double resid =
        (m.matrix() * out.vectors.col(i) - mu * (s.matrix() * out.vectors.col(i)))
            .norm();
    if (!(resid <= 1e-9 * (norm_m + std::abs(mu) * norm_s)))
      throw IndefiniteMatrixError("gen_sym_eig: residual check failed");
  }
  return out;
}

void write_matrix_market(const SparseSym& a, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_matrix_market: cannot open " + path);
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << a.size() << " " << a.size() << " " << a.nonzeros() << "\n";
  const auto& u = a.upper();
  for (int k = 0; k < u.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(u, k); it; ++it)
      // store the lower triangle as required by the symmetric format
      os << (it.col() + 1) << " " << (it.row() + 1) << " " << it.value() << "\n";
  os.close();
}

}  // namespace linalg
}  // namespace fracdiff
