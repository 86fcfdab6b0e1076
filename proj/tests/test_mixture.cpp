#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fishpc/errors.hpp"
#include "fishpc/io.hpp"
#include "fishpc/mixture.hpp"
#include "fishpc/structure.hpp"
#include "oracles.hpp"

#include <cmath>
#include <sstream>

using namespace fishpc;

namespace {

MixtureSpec two_d_spec() {
  MixtureSpec spec;
  spec.d = 2;
  spec.k = 1;
  spec.means = {Vector::Zero(2)};
  Matrix cov(2, 2);
  cov << 2.0, 0.6, 0.6, 1.0;
  spec.covariances = {cov};
  return spec;
}

Matrix sample_cov(const Matrix& x) {
  const Matrix c = x.rowwise() - x.colwise().mean();
  return c.transpose() * c / static_cast<double>(x.rows());
}

} // namespace

TEST_CASE("sample moments converge to the specification") {
  const MixtureSpec spec = two_d_spec();
  const LabeledDataset ds = sample(spec, 5000, 7);
  CHECK(ds.n() == 5000);
  CHECK(ds.data.colwise().mean().cwiseAbs().maxCoeff() < 0.05);
  CHECK((sample_cov(ds.data) - spec.covariances[0]).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("sampling is deterministic and balanced") {
  const MixtureSpec spec = make_separation_family(5, 3, 2.0, 1.0, 42);
  const LabeledDataset a = sample(spec, 40, 9);
  const LabeledDataset b = sample(spec, 40, 9);
  const LabeledDataset c = sample(spec, 40, 10);
  CHECK(a.data == b.data);
  CHECK(a.labels == b.labels);
  CHECK(a.data != c.data);
  for (std::size_t count : a.per_cluster_n()) CHECK(count == 40);

  const LabeledDataset larger = sample(spec, 60, 9);
  for (int l = 0; l < 3; ++l)
    CHECK(larger.data.block(l * 60, 0, 40, 5) == a.data.block(l * 40, 0, 40, 5));
}

TEST_CASE("sample size guard") {
  const MixtureSpec spec = make_separation_family(10, 2, 1.0, 1.0, 1);
  CHECK_THROWS_AS(sample(spec, 49, 1), SizeError);
  CHECK_NOTHROW(sample(spec, 50, 1));
}

TEST_CASE("specification validation") {
  MixtureSpec spec = make_separation_family(3, 2, 1.0, 1.0, 1);
  CHECK_NOTHROW(spec.validate());

  MixtureSpec bad_dim = spec;
  bad_dim.means[1] = Vector::Zero(4);
  CHECK_THROWS_AS(bad_dim.validate(), ConfigError);

  MixtureSpec bad_cov = spec;
  bad_cov.covariances[0](0, 0) = -1.0;
  CHECK_THROWS_AS(bad_cov.validate(), CholeskyError);

  MixtureSpec asym = spec;
  asym.covariances[0](0, 1) += 0.5;
  CHECK_THROWS(asym.validate());

  MixtureSpec too_many = spec;
  too_many.k = 4;
  CHECK_THROWS_AS(too_many.validate(), ConfigError);
}

TEST_CASE("population moments") {
  SUBCASE("two symmetric means") {
    MixtureSpec spec;
    spec.d = 2;
    spec.k = 2;
    spec.means = {Vector::Zero(2), Vector::Zero(2)};
    spec.means[0](0) = -1.0;
    spec.means[1](0) = 1.0;
    spec.covariances = {Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
    const MixtureMoments m = population_moments(spec);
    CHECK(m.grand_mean.norm() < 1e-15);
    Matrix expected_between = Matrix::Zero(2, 2);
    expected_between(0, 0) = 1.0;
    CHECK(m.between.isApprox(expected_between));
    CHECK(m.within.isApprox(Matrix::Identity(2, 2)));
    CHECK(m.grand_cov.isApprox(Matrix::Identity(2, 2) + expected_between));
  }
  SUBCASE("large sample agrees with the population covariance") {
    const MixtureSpec spec = make_separation_family(4, 3, 2.0, 1.0, 5);
    const MixtureMoments m = population_moments(spec);
    const LabeledDataset ds = sample(spec, 333334, 3);
    const Matrix cov = sample_cov(ds.data);
    const double scale = m.grand_cov.cwiseAbs().maxCoeff();
    CHECK((cov - m.grand_cov).cwiseAbs().maxCoeff() < 0.02 * scale);
    CHECK((ds.data.colwise().mean().transpose() - m.grand_mean).norm() < 0.02 * std::sqrt(scale));
  }
}

TEST_CASE("separation family geometry") {
  SUBCASE("zero separation gives coincident means") {
    const MixtureSpec spec = make_separation_family(5, 4, 0.0, 1.0, 3);
    for (int l = 1; l < 4; ++l) CHECK((spec.means[l] - spec.means[0]).norm() < 1e-15);
  }
  SUBCASE("pairwise mean distance equals the separation") {
    for (int k = 2; k <= 6; ++k) {
      const MixtureSpec spec = make_separation_family(7, k, 3.0, 1.0, 11);
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) CHECK((spec.means[a] - spec.means[b]).norm() == doctest::Approx(3.0));
    }
  }
  SUBCASE("doubling the separation doubles the between-class spread") {
    const MixtureSpec s1 = make_separation_family(6, 3, 1.5, 1.0, 4);
    const MixtureSpec s2 = make_separation_family(6, 3, 3.0, 1.0, 4);
    CHECK(population_moments(s2).between.isApprox(4.0 * population_moments(s1).between, 1e-12));
    for (int l = 0; l < 3; ++l) CHECK(s1.covariances[l] == s2.covariances[l]);
  }
  SUBCASE("dispersion scales the covariances") {
    const MixtureSpec s1 = make_separation_family(6, 3, 1.5, 1.0, 4);
    const MixtureSpec s2 = make_separation_family(6, 3, 1.5, 2.0, 4);
    for (int l = 0; l < 3; ++l) CHECK(s2.covariances[l].isApprox(4.0 * s1.covariances[l], 1e-12));
  }
  SUBCASE("covariance condition numbers stay within 10") {
    const MixtureSpec spec = make_separation_family(8, 3, 1.0, 1.0, 8);
    for (const Matrix& c : spec.covariances) {
      const Eigen::SelfAdjointEigenSolver<Matrix> es(c);
      CHECK(es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() <= 10.0 + 1e-9);
    }
  }
  SUBCASE("random_orthogonal") {
    const Matrix q = random_orthogonal(6, 77);
    CHECK((q.transpose() * q - Matrix::Identity(6, 6)).norm() < 1e-12);
    CHECK(random_orthogonal(6, 77) == q);
  }
}

TEST_CASE("well separated family exceeds the midpoint-classifier accuracy") {
  // Classifying by the midpoint along the mean difference is one decision
  // rule; the overlap complement is the Bayes accuracy, which can only be higher.
  const MixtureSpec spec = make_separation_family(2, 2, 4.0, 1.0, 21);
  const Vector u = (spec.means[1] - spec.means[0]).normalized();
  const double half = 0.5 * (spec.means[1] - spec.means[0]).norm();
  double accuracy = 0.0;
  for (int l = 0; l < 2; ++l) {
    const double sd = std::sqrt(u.dot(spec.covariances[l] * u));
    accuracy += 0.5 * oracle::normal_cdf(half / sd);
  }
  const SdistEstimate est = sdist_overlap(spec, 100000, 1);
  CHECK(accuracy > 0.95);
  CHECK(est.value > 0.95);
  CHECK(est.value >= accuracy - 3.0 * est.standard_error);
}

TEST_CASE("relabeling components leaves population moments unchanged") {
  const MixtureSpec spec = make_separation_family(5, 4, 2.0, 1.0, 13);
  MixtureSpec perm = spec;
  const std::vector<int> order{2, 0, 3, 1};
  for (int l = 0; l < 4; ++l) {
    perm.means[l] = spec.means[order[l]];
    perm.covariances[l] = spec.covariances[order[l]];
  }
  const MixtureMoments a = population_moments(spec);
  const MixtureMoments b = population_moments(perm);
  CHECK(a.between.isApprox(b.between, 1e-12));
  CHECK(a.within.isApprox(b.within, 1e-12));
  CHECK((a.grand_mean - b.grand_mean).norm() < 1e-12);
}

TEST_CASE("dataset CSV round trip is exact") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    LabeledDataset ds = oracle::random_labeled(30 + trial, 2 + trial % 4, 1 + trial % 3, rng);
    ds.data *= std::pow(10.0, trial - 5);
    std::stringstream ss;
    write_dataset(ss, ds);
    const LabeledDataset back = read_dataset(ss);
    CHECK(back.data == ds.data);
    CHECK(back.labels == ds.labels);
    CHECK(back.k == ds.k);
  }
}

TEST_CASE("dataset CSV header and labels") {
  LabeledDataset ds;
  ds.k = 2;
  ds.data = Matrix(2, 2);
  ds.data << 1.5, -2, 0.25, 3;
  ds.labels = {0, 1};
  std::stringstream ss;
  write_dataset(ss, ds);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "x1,x2,label");
  std::string row;
  std::getline(ss, row);
  CHECK(row == "1.5,-2,1");

  std::stringstream bad("x1,x2,label\n1,2,0\n");
  CHECK_THROWS_AS(read_dataset(bad), ConfigError);
  std::stringstream ragged("x1,x2,label\n1,2\n");
  CHECK_THROWS_AS(read_dataset(ragged), ConfigError);
  std::stringstream words("x1,x2,label\n1,abc,1\n");
  CHECK_THROWS_AS(read_dataset(words), ConfigError);
  CHECK_THROWS_AS(read_dataset(std::string("/nonexistent/dir/file.csv")), IoError);
}

TEST_CASE("mixture JSON round trip is exact") {
  const MixtureSpec spec = make_separation_family(4, 3, 2.5, 0.7, 99);
  const MixtureSpec back = mixture_from_json(nlohmann::json::parse(to_json(spec).dump()));
  CHECK(back.d == spec.d);
  CHECK(back.k == spec.k);
  for (int l = 0; l < 3; ++l) {
    CHECK(back.means[l] == spec.means[l]);
    CHECK(back.covariances[l] == spec.covariances[l]);
  }
  CHECK_THROWS_AS(mixture_from_json(nlohmann::json::parse(R"({"d": 2})")), ConfigError);
}
