#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fishpc/errors.hpp"
#include "fishpc/kernels.hpp"
#include "fishpc/matrixcore.hpp"
#include "fishpc/mixture.hpp"
#include "fishpc/subspace.hpp"
#include "fishpc/transform.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace fishpc;

namespace {

SubspaceBasis span(std::initializer_list<std::initializer_list<double>> cols) {
  const auto m = static_cast<Eigen::Index>(cols.size());
  const auto d = static_cast<Eigen::Index>(cols.begin()->size());
  Matrix b(d, m);
  Eigen::Index j = 0;
  for (const auto& c : cols) {
    Eigen::Index i = 0;
    for (double v : c) b(i++, j) = v;
    ++j;
  }
  return SubspaceBasis(b);
}

Matrix intermean_basis(const LabeledDataset& ds) {
  const kernels::ClusterSums cs = kernels::cluster_sums(ds.data, ds.labels, ds.k);
  const Vector mean = ds.data.colwise().mean().transpose();
  Matrix b(ds.d(), ds.k - 1);
  for (int l = 0; l + 1 < ds.k; ++l)
    b.col(l) = cs.sums.row(l).transpose() / static_cast<double>(cs.counts[l]) - mean;
  return b;
}

} // namespace

TEST_CASE("sss closed forms") {
  const SubspaceBasis e1 = span({{1, 0, 0}});
  const SubspaceBasis e2 = span({{0, 1, 0}});
  CHECK(std::abs(sss(e1, e1) - 1.0) < 1e-8);
  CHECK(std::abs(sss(e1, e2)) < 1e-8);
  const double t = std::numbers::pi / 6;
  CHECK(std::abs(sss(span({{1, 0}}), span({{std::cos(t), std::sin(t)}})) - 0.75) < 1e-8);
  CHECK(std::abs(sss(span({{1, 0, 0}, {0, 1, 0}}), span({{0, 1, 0}, {0, 0, 1}})) - 0.5) < 1e-8);
}

TEST_CASE("sss shape errors and basis validation") {
  CHECK_THROWS_AS(sss(span({{1, 0, 0}}), span({{1, 0, 0, 0}})), ShapeError);
  CHECK_THROWS_AS(sss(span({{1, 0, 0}}), span({{1, 0, 0}, {0, 1, 0}})), ShapeError);
  CHECK_THROWS_AS(span({{1, 0}, {0, 1}}), ShapeError);
  CHECK_THROWS_AS(span({{1, 0, 0}, {2, 0, 0}}), ShapeError);
  CHECK_THROWS_AS(SubspaceBasis(Matrix(3, 0)), ShapeError);

  const SubspaceBasis near = span({{1, 0, 0}, {1, 1e-8, 0}});
  CHECK(near.ill_conditioned());
  CHECK(sss_detailed(near, span({{1, 0, 0}, {0, 1, 0}})).ill_conditioned);
  CHECK_FALSE(span({{1, 0, 0}, {0, 1, 0}}).ill_conditioned());
}

TEST_CASE("sss properties on random bases") {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + trial % 9;
    const int m = 1 + trial % (d - 1);
    const Matrix v = oracle::random_matrix(d, m, rng);
    const Matrix a = oracle::random_matrix(d, m, rng);
    const SubspaceBasis bv(v), ba(a);
    const double s = sss(bv, ba);
    CHECK(s >= -1e-12);
    CHECK(s <= 1.0 + 1e-12);
    CHECK(std::abs(s - sss(ba, bv)) < 1e-10);

    const Matrix g = oracle::random_matrix(m, m, rng) + 3.0 * Matrix::Identity(m, m);
    CHECK(std::abs(s - sss(SubspaceBasis(v * g), ba)) < 1e-10);
    CHECK(std::abs(s - sss(bv, SubspaceBasis(a * g.transpose()))) < 1e-10);

    if (trial < 100) CHECK(std::abs(s - oracle::canonical_similarity(v, a)) < 1e-8);
  }
}

TEST_CASE("orthonormal basis spans the same subspace") {
  Rng rng(2);
  const Matrix v = oracle::random_matrix(6, 3, rng);
  const SubspaceBasis b(v);
  const Matrix q = b.orthonormal();
  CHECK((q.transpose() * q - Matrix::Identity(3, 3)).norm() < 1e-12);
  CHECK((q * q.transpose() * v - v).norm() < 1e-10);
}

TEST_CASE("principal-component subspace") {
  SUBCASE("known covariance") {
    Rng rng(3);
    Matrix x(100000, 3);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      x(i, 0) = std::sqrt(3.0) * rng.normal();
      x(i, 1) = std::sqrt(2.0) * rng.normal();
      x(i, 2) = rng.normal();
    }
    const SubspaceBasis pc = pc_subspace(apply_centering(x), 2);
    CHECK(sss(pc, span({{1, 0, 0}, {0, 1, 0}})) > 0.999);
    CHECK_FALSE(pc.ambiguous);
    CHECK((pc.columns().transpose() * pc.columns() - Matrix::Identity(2, 2)).norm() < 1e-12);
  }
  SUBCASE("isotropic data has no unique leading direction") {
    Rng rng(4);
    const IsotropicDataset y = isotropize(oracle::random_labeled(200, 4, 2, rng));
    const SubspaceBasis pc = pc_subspace(y.data, 1);
    CHECK(pc.ambiguous);
  }
  SUBCASE("rotation equivariance") {
    Rng rng(5);
    const MixtureSpec spec = make_separation_family(5, 3, 2.0, 1.0, 5);
    const Matrix x = apply_centering(sample(spec, 200, 5).data);
    const Matrix q = random_orthogonal(5, 17);
    const SubspaceBasis base = pc_subspace(x, 2);
    const SubspaceBasis rotated = pc_subspace(x * q.transpose(), 2);
    CHECK(std::abs(sss(rotated, SubspaceBasis(q * base.columns())) - 1.0) < 1e-8);
  }
  SUBCASE("uncentered data is rejected") {
    Rng rng(6);
    Matrix x = oracle::random_matrix(50, 3, rng);
    x.array() += 5.0;
    CHECK_THROWS_AS(pc_subspace(x, 1), ConfigError);
    CHECK_THROWS_AS(pc_subspace(apply_centering(x), 3), ShapeError);
  }
}

TEST_CASE("Fisher subspace") {
  SUBCASE("point masses along e1") {
    const SubspaceBasis f = fisher_subspace(oracle::point_masses_along_e1(3, 20));
    CHECK(std::abs(sss(f, span({{1, 0, 0}})) - 1.0) < 1e-8);
  }
  SUBCASE("isotropic data: Fisher subspace is the intermean subspace") {
    Rng rng(7);
    for (int k = 2; k <= 5; ++k) {
      const IsotropicDataset y = isotropize(oracle::random_labeled(300, 6, k, rng));
      const LabeledDataset ds = y.as_labeled();
      CHECK(sss(fisher_subspace(ds), SubspaceBasis(intermean_basis(ds))) > 1.0 - 1e-6);
    }
  }
  SUBCASE("permuting rows within the dataset leaves the subspace unchanged") {
    Rng rng(8);
    const LabeledDataset ds = oracle::random_labeled(120, 5, 3, rng);
    LabeledDataset shuffled = ds;
    const Eigen::Index n = ds.n();
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index src = (7 * i + 3) % n;
      shuffled.data.row(i) = ds.data.row(src);
      shuffled.labels[static_cast<std::size_t>(i)] = ds.labels[static_cast<std::size_t>(src)];
    }
    CHECK(std::abs(sss(fisher_subspace(ds), fisher_subspace(shuffled)) - 1.0) < 1e-10);
  }
  SUBCASE("renaming clusters leaves the subspace unchanged") {
    Rng rng(9);
    const LabeledDataset ds = oracle::random_labeled(120, 5, 3, rng);
    LabeledDataset renamed = ds;
    for (int& l : renamed.labels) l = (l + 1) % 3;
    CHECK(std::abs(sss(fisher_subspace(ds), fisher_subspace(renamed)) - 1.0) < 1e-10);
  }
}
