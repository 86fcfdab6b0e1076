#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fishpc/errors.hpp"
#include "fishpc/matrixcore.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace fishpc;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

void check_standard(const SymMatrix& m, const EigenSolution& e) {
  const Eigen::Index d = m.dim();
  for (Eigen::Index j = 0; j + 1 < d; ++j) CHECK(e.values(j) >= e.values(j + 1));
  for (Eigen::Index j = 0; j < d; ++j) {
    const double resid = (m.matrix() * e.vectors.col(j) - e.values(j) * e.vectors.col(j)).norm();
    CHECK(resid < 1e-8 * (1.0 + std::abs(e.values(j))));
  }
  CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(d, d)).norm() < 1e-8);
  const Matrix rebuilt = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
  CHECK((rebuilt - m.matrix()).norm() < 1e-7 * std::max(m.matrix().norm(), 1e-300));
}

} // namespace

TEST_CASE("sym_eig closed-form cases") {
  SUBCASE("diagonal") {
    const EigenSolution e = sym_eig(SymMatrix(diag({2, 1})));
    CHECK(e.values(0) == doctest::Approx(2.0));
    CHECK(e.values(1) == doctest::Approx(1.0));
    CHECK(e.vectors.cwiseAbs().isApprox(Matrix::Identity(2, 2)));
  }
  SUBCASE("identity") {
    const EigenSolution e = sym_eig(SymMatrix::identity(3));
    CHECK((e.values - Vector::Ones(3)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("swap matrix") {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    const EigenSolution e = sym_eig(SymMatrix(m));
    CHECK(e.values(0) == doctest::Approx(1.0));
    CHECK(e.values(1) == doctest::Approx(-1.0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(r));
    CHECK(e.vectors(0, 0) * e.vectors(1, 0) == doctest::Approx(0.5));
    CHECK(e.vectors(0, 1) * e.vectors(1, 1) == doctest::Approx(-0.5));
  }
}

TEST_CASE("sym_eig sign convention puts the largest-magnitude entry positive") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const EigenSolution e = sym_eig(SymMatrix(oracle::random_symmetric(5, rng)));
    for (Eigen::Index j = 0; j < 5; ++j) {
      Eigen::Index arg;
      e.vectors.col(j).cwiseAbs().maxCoeff(&arg);
      CHECK(e.vectors(arg, j) > 0.0);
    }
  }
}

TEST_CASE("sym_eig residual, orthonormality and reconstruction on random matrices") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 1 + trial % 12;
    const double scale = std::pow(10.0, trial % 7 - 3);
    const SymMatrix m(scale * oracle::random_symmetric(d, rng));
    check_standard(m, sym_eig(m));
  }
}

TEST_CASE("non-symmetric input is rejected") {
  Matrix m(2, 2);
  m << 1, 2, 2.001, 1;
  CHECK_THROWS_AS(SymMatrix{m}, SymmetryError);
  CHECK_THROWS_AS(SymMatrix{Matrix::Ones(2, 3)}, ShapeError);
}

TEST_CASE("gen_eig small cases") {
  SUBCASE("standard problem when m = I") {
    const EigenSolution e = gen_eig(SymMatrix(diag({1, 0})), SymMatrix::identity(2));
    CHECK(e.kind == EigenKind::generalized);
    CHECK(e.values(0) == doctest::Approx(1.0));
    CHECK(std::abs(e.values(1)) < 1e-15);
  }
  SUBCASE("k == m forces every eigenvalue to 1") {
    Rng rng(4);
    const Matrix m = oracle::random_spd(6, rng);
    const EigenSolution e = gen_eig(SymMatrix(m), SymMatrix(m));
    CHECK((e.values - Vector::Ones(6)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("gen_eig matches eigenvalues of m^-1 k from a general dense solver") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix k = oracle::random_spd(4, rng, 0.0);
    const Matrix m = oracle::random_spd(4, rng);
    const EigenSolution e = gen_eig(SymMatrix(k), SymMatrix(m));
    const Vector expected = oracle::inverse_product_eigenvalues(k, m);
    CHECK((e.values - expected).cwiseAbs().maxCoeff() < 1e-8);

    CHECK((e.vectors.transpose() * m * e.vectors - Matrix::Identity(4, 4)).norm() < 1e-8);
    for (Eigen::Index j = 0; j < 4; ++j)
      CHECK((k * e.vectors.col(j) - e.values(j) * m * e.vectors.col(j)).norm() < 1e-8);
  }
}

TEST_CASE("gen_eig rejects a metric that is not positive definite") {
  SUBCASE("singular") {
    try {
      gen_eig(SymMatrix::identity(2), SymMatrix(diag({1, 0})));
      FAIL("expected DefinitenessError");
    } catch (const DefinitenessError& e) {
      CHECK(e.index() == 2);
      CHECK(e.eigenvalue() == doctest::Approx(0.0));
    }
  }
  SUBCASE("indefinite") { CHECK_THROWS_AS(gen_eig(SymMatrix::identity(2), SymMatrix(diag({1, -1}))), DefinitenessError); }
  SUBCASE("below the rank tolerance") {
    CHECK_THROWS_AS(gen_eig(SymMatrix::identity(2), SymMatrix(diag({1, 1e-11}))), DefinitenessError);
    CHECK_NOTHROW(gen_eig(SymMatrix::identity(2), SymMatrix(diag({1, 1e-9}))));
  }
}

TEST_CASE("matrix norms") {
  for (int k = 1; k <= 5; ++k) {
    CHECK(frobenius_norm(Matrix::Identity(k, k)) == doctest::Approx(std::sqrt(k)));
    CHECK(spectral_norm(SymMatrix::identity(k)) == doctest::Approx(1.0));
  }
  CHECK(frobenius_norm(diag({3, -4})) == doctest::Approx(5.0));
  CHECK(spectral_norm(SymMatrix(diag({3, -4}))) == doctest::Approx(4.0));

  Rng rng(17);
  const Labels labels = oracle::balanced_labels(30, 3, rng);
  CHECK(frobenius_norm(HatMatrix(labels, 3).materialize()) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("spectral norm never exceeds Frobenius norm") {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix m = oracle::random_symmetric(1 + trial % 8, rng);
    CHECK(spectral_norm(SymMatrix(m)) <= frobenius_norm(m) * (1.0 + 1e-14));
  }
}

TEST_CASE("centering") {
  Matrix x(2, 2);
  x << 1, 1, 3, 3;
  Matrix expected(2, 2);
  expected << -1, -1, 1, 1;
  CHECK(apply_centering(x).isApprox(expected));

  Rng rng(21);
  Matrix data = oracle::random_matrix(50, 4, rng);
  data.col(2).setConstant(7.5);
  data.col(1).array() += 100.0;
  const Matrix once = apply_centering(data);
  CHECK(once.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
  CHECK(once.col(2).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((apply_centering(once) - once).cwiseAbs().maxCoeff() < 1e-12);

  const CenteringOperator f(50);
  const Matrix fm = f.materialize();
  CHECK(fm(0, 0) == doctest::Approx(1.0 - 1.0 / 50));
  CHECK(fm(0, 1) == doctest::Approx(-1.0 / 50));
  CHECK((fm - fm.transpose()).norm() == 0.0);
  CHECK((fm * fm - fm).norm() < 1e-12);
  CHECK((fm * data - f.apply(data)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(CenteringOperator(0), SizeError);
}

TEST_CASE("hat matrix") {
  SUBCASE("block structure") {
    const HatMatrix h({0, 0, 1, 1}, 2);
    Matrix expected = Matrix::Zero(4, 4);
    expected.block(0, 0, 2, 2).setConstant(0.5);
    expected.block(2, 2, 2, 2).setConstant(0.5);
    CHECK(h.materialize().isApprox(expected));
    CHECK(h.materialize().trace() == doctest::Approx(2.0));
  }
  SUBCASE("projector properties on random balanced labels") {
    Rng rng(31);
    for (int k = 1; k <= 5; ++k) {
      const Labels labels = oracle::balanced_labels(40, k, rng);
      const HatMatrix h(labels, k);
      const Matrix hm = h.materialize();
      CHECK((hm * hm - hm).norm() < 1e-10);
      CHECK((hm - hm.transpose()).norm() == 0.0);
      CHECK(hm.trace() == doctest::Approx(k));
      CHECK((hm - oracle::hat_matrix(labels, k)).norm() < 1e-12);

      const EigenSolution e = sym_eig(SymMatrix(hm));
      for (Eigen::Index j = 0; j < 40; ++j) CHECK(std::abs(e.values(j) - (j < k ? 1.0 : 0.0)) < 1e-10);

      const Matrix x = oracle::random_matrix(40, 3, rng);
      CHECK((h.apply(x) - hm * x).cwiseAbs().maxCoeff() < 1e-12);
      const Vector v = x.col(0);
      CHECK((h.apply(v) - hm * v).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("missing cluster") {
    try {
      HatMatrix({0, 0, 2, 2}, 3);
      FAIL("expected MissingClusterError");
    } catch (const MissingClusterError& e) {
      CHECK(e.label() == 2);
    }
  }
}
