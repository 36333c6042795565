#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <random>

#include "doctest.h"
#include "fracdiff/errors.hpp"
#include "fracdiff/linalg.hpp"

using namespace fracdiff::linalg;

TEST_CASE("spd_solve identity and diagonal") {
  SparseSym eye(3);
  for (int i = 0; i < 3; ++i) eye.add(i, i, 1.0);
  eye.finalize();
  Vector b(3);
  b << 1, 2, 3;
  const Vector x = spd_solve(eye, b);
  CHECK((x - b).norm() < 1e-14);

  SparseSym d(2);
  d.add(0, 0, 2.0);
  d.add(1, 1, 4.0);
  d.finalize();
  Vector b2(2);
  b2 << 2, 8;
  const Vector x2 = spd_solve(d, b2);
  CHECK(x2(0) == doctest::Approx(1.0));
  CHECK(x2(1) == doctest::Approx(2.0));
}

TEST_CASE("spd_solve residual contract on random SPD") {
  std::mt19937 rng(20240901);
  std::normal_distribution<double> dist;
  const int n = 50;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = dist(rng);
  Eigen::MatrixXd spd = g * g.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
  SparseSym a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.add(i, j, spd(i, j));
  a.finalize();
  Vector b(n);
  for (int i = 0; i < n; ++i) b(i) = dist(rng);
  const Vector x = spd_solve(a, b);
  CHECK((a.apply(x) - b).norm() <= 1e-10 * b.norm());
  // determinism
  const Vector x2 = spd_solve(a, b);
  CHECK((x - x2).norm() == 0.0);
}

TEST_CASE("spd_solve rejects indefinite") {
  SparseSym a(2);
  a.add(0, 0, 1.0);
  a.add(1, 1, -1.0);
  a.finalize();
  Vector b(2);
  b << 1, 1;
  CHECK_THROWS_AS(spd_solve(a, b), fracdiff::IndefiniteMatrixError);
}

TEST_CASE("gen_sym_eig diagonal cases") {
  DenseSym m(2), s(2);
  m.add(0, 0, 1.0);
  m.add(1, 1, 2.0);
  s.add(0, 0, 1.0);
  s.add(1, 1, 1.0);
  const auto eig = gen_sym_eig(m, s);
  CHECK(eig.values(0) == doctest::Approx(1.0));
  CHECK(eig.values(1) == doctest::Approx(2.0));
  CHECK(std::abs(std::abs(eig.vectors(0, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(eig.vectors(1, 0)) < 1e-12);

  // n = 1, S-normalization v^T S v = 1
  DenseSym m1(1), s1(1);
  m1.add(0, 0, 1.0);
  s1.add(0, 0, 4.0);
  const auto e1 = gen_sym_eig(m1, s1);
  CHECK(e1.values(0) == doctest::Approx(0.25));
  CHECK(std::abs(e1.vectors(0, 0)) == doctest::Approx(0.5));
}

TEST_CASE("gen_sym_eig reconstruction invariants") {
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  const int n = 40;
  Eigen::MatrixXd gm(n, n), gs(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      gm(i, j) = dist(rng);
      gs(i, j) = dist(rng);
    }
  Eigen::MatrixXd mm = gm * gm.transpose();
  Eigen::MatrixXd ss = gs * gs.transpose() + Eigen::MatrixXd::Identity(n, n);
  DenseSym m(n), s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      m.add(i, j, mm(i, j));
      s.add(i, j, ss(i, j));
    }
  const auto eig = gen_sym_eig(m, s);
  const Eigen::MatrixXd vsv =
      eig.vectors.transpose() * s.matrix() * eig.vectors;
  const Eigen::MatrixXd vmv =
      eig.vectors.transpose() * m.matrix() * eig.vectors;
  const double mu_max = eig.values.maxCoeff();
  CHECK((vsv - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-9);
  Eigen::MatrixXd expected = eig.values.asDiagonal();
  CHECK((vmv - expected).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, mu_max));
  for (int i = 1; i < n; ++i) CHECK(eig.values(i) >= eig.values(i - 1));
}

TEST_CASE("gen_sym_eig rejects non-SPD S") {
  DenseSym m(2), s(2);
  m.add(0, 0, 1.0);
  m.add(1, 1, 1.0);
  s.add(0, 0, 1.0);
  s.add(1, 1, -2.0);
  CHECK_THROWS_AS(gen_sym_eig(m, s), fracdiff::IndefiniteMatrixError);
}

TEST_CASE("matrix market export") {
  SparseSym a(2);
  a.add(0, 0, 1.5);
  a.add(0, 1, -0.5);
  a.add(1, 1, 2.0);
  a.finalize();
  write_matrix_market(a, "test_mm_out.mtx");
  std::ifstream is("test_mm_out.mtx");
  std::string header;
  std::getline(is, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real symmetric");
}
