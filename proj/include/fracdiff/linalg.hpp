#ifndef FRACDIFF_LINALG_HPP
#define FRACDIFF_LINALG_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

namespace fracdiff {
namespace linalg {

using Vector = Eigen::VectorXd;

// Sparse symmetric matrix; only the upper triangle is stored. Entries are
// accumulated as triplets and compressed by finalize(), which drops explicit
// zeros.
class SparseSym {
 public:
  SparseSym() = default;
  explicit SparseSym(int n) : n_(n) {}

  int size() const { return n_; }

  // accumulate a(i,j) += v; (i,j) and (j,i) refer to the same entry
  void add(int i, int j, double v);
  void finalize();
  bool finalized() const { return finalized_; }

  Vector apply(const Vector& x) const;
  int nonzeros() const { return static_cast<int>(upper_.nonZeros()); }
  const Eigen::SparseMatrix<double>& upper() const;

  // a*X + b*Y as a finalized matrix (same dimension)
  static SparseSym combine(double a, const SparseSym& x, double b,
                           const SparseSym& y);

 private:
  int n_ = 0;
  bool finalized_ = false;
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::SparseMatrix<double> upper_;
};

// Dense symmetric matrix, symmetry enforced by construction.
class DenseSym {
 public:
  DenseSym() = default;
  explicit DenseSym(int n) : m_(Eigen::MatrixXd::Zero(n, n)) {}

  int size() const { return static_cast<int>(m_.rows()); }
  void add(int i, int j, double v) {
    m_(i, j) += v;
    if (i != j) m_(j, i) += v;
  }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

// Solve A x = b for symmetric positive definite A with relative residual
// <= 1e-10: sparse Cholesky up to n = 2e5, Jacobi-preconditioned CG beyond.
// Throws IndefiniteMatrixError on factorization failure or CG stagnation.
Vector spd_solve(const SparseSym& a, const Vector& b);

// Reusable factorization for repeated right-hand sides on the same matrix.
class SpdFactor {
 public:
  explicit SpdFactor(const SparseSym& a);
  Vector solve(const Vector& b) const;
  int size() const { return n_; }

 private:
  int n_;
  bool use_cholesky_;
  Eigen::SparseMatrix<double> full_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

struct GenEig {
  Vector values;          // ascending
  Eigen::MatrixXd vectors;  // columns v_i with v_i^T S v_j = delta_ij
};

// All eigenpairs of M v = mu S v for symmetric M (positive semidefinite)
// and SPD S, n <= 2000. Eigenvectors are S-orthonormal, so
// v_i^T M v_j = mu_i delta_ij.
GenEig gen_sym_eig(const DenseSym& m, const DenseSym& s);

// Matrix-market export (for debugging); writes the symmetric coordinate
// format.
void write_matrix_market(const SparseSym& a, const std::string& path);

}  // namespace linalg
}  // namespace fracdiff

#endif
