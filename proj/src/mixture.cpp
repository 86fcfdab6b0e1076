#include "fishpc/mixture.hpp"

#include "fishpc/errors.hpp"
#include "fishpc/random.hpp"

#include <cmath>

namespace fishpc {

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

namespace {

Matrix cholesky_factor(const Matrix& cov, int component) {
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) throw CholeskyError(component + 1);
  const Matrix l = llt.matrixL();
  if (!(l.diagonal().minCoeff() > 0.0)) throw CholeskyError(component + 1);
  return l;
}

/// Orthonormal basis of the complement of the all-ones vector (k x (k-1)).
Matrix helmert_basis(int k) {
  Matrix h = Matrix::Zero(k, std::max(k - 1, 0));
  for (int j = 1; j < k; ++j) {
    const double norm = std::sqrt(static_cast<double>(j) * (j + 1));
    for (int i = 0; i < j; ++i) h(i, j - 1) = 1.0 / norm;
    h(j, j - 1) = -static_cast<double>(j) / norm;
  }
  return h;
}

} // namespace

void MixtureSpec::validate() const {
  if (d < 1 || k < 1) throw ConfigError("mixture needs d >= 1 and k >= 1");
  if (!(d > k - 1)) throw ConfigError("mixture needs d > k - 1 (d=" + std::to_string(d) + ", k=" + std::to_string(k) + ")");
  validate_components();
}

void MixtureSpec::validate_components() const {
  if (d < 1 || k < 1) throw ConfigError("mixture needs d >= 1 and k >= 1");
  if (static_cast<int>(means.size()) != k || static_cast<int>(covariances.size()) != k)
    throw ShapeError("mixture needs exactly k means and k covariances");
  for (int l = 0; l < k; ++l) {
    if (means[l].size() != d) throw ShapeError("mean " + std::to_string(l + 1) + " has wrong length");
    const Matrix& c = covariances[l];
    if (c.rows() != d || c.cols() != d) throw ShapeError("covariance " + std::to_string(l + 1) + " has wrong shape");
    if (!((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff())))
      throw CholeskyError(l);
    cholesky_factor(c, l);
  }
}

std::vector<std::size_t> LabeledDataset::per_cluster_n() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(k, 0)), 0);
  for (int c : labels) ++counts.at(static_cast<std::size_t>(c));
  return counts;
}

LabeledDataset sample(const MixtureSpec& spec, int n_per_cluster, std::uint64_t seed) {
  spec.validate();
  if (n_per_cluster < 1) throw SizeError("n_per_cluster must be positive");
  const long long n = static_cast<long long>(n_per_cluster) * spec.k;
  if (n < 10LL * spec.d)
    throw SizeError("sample too small: n = " + std::to_string(n) + " < 10 d = " + std::to_string(10 * spec.d));

  LabeledDataset out;
  out.k = spec.k;
  out.data.resize(n, spec.d);
  out.labels.resize(static_cast<std::size_t>(n));

  Vector z(spec.d);
  for (int l = 0; l < spec.k; ++l) {
    const Matrix chol = cholesky_factor(spec.covariances[l], l);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(l)));
    for (int r = 0; r < n_per_cluster; ++r) {
      for (int j = 0; j < spec.d; ++j) z(j) = rng.normal();
      const Eigen::Index row = static_cast<Eigen::Index>(l) * n_per_cluster + r;
      out.data.row(row) = (spec.means[l] + chol.triangularView<Eigen::Lower>() * z).transpose();
      out.labels[static_cast<std::size_t>(row)] = l;
    }
  }
  return out;
}

MixtureMoments population_moments(const MixtureSpec& spec) {
  spec.validate();
  const double w = spec.mixing();
  MixtureMoments m;
  m.grand_mean = Vector::Zero(spec.d);
  for (const Vector& mu : spec.means) m.grand_mean += w * mu;
  m.within = Matrix::Zero(spec.d, spec.d);
  m.between = Matrix::Zero(spec.d, spec.d);
  for (int l = 0; l < spec.k; ++l) {
    m.within += w * spec.covariances[l];
    const Vector dev = spec.means[l] - m.grand_mean;
    m.between += w * dev * dev.transpose();
  }
  m.grand_cov = m.within + m.between;
  return m;
}

Matrix random_orthogonal(int d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

MixtureSpec make_separation_family(int d, int k, double separation, double dispersion, std::uint64_t seed,
                                   double heterogeneity) {
  if (!(d > k - 1) || k < 1) throw ConfigError("separation family needs k >= 1 and d > k - 1");
  if (!(separation >= 0.0)) throw ParameterError("separation must be non-negative");
  if (!(dispersion > 0.0)) throw ParameterError("dispersion must be positive");
  if (!(heterogeneity >= 0.0 && heterogeneity <= 1.0)) throw ParameterError("heterogeneity must lie in [0, 1]");

  MixtureSpec spec;
  spec.d = d;
  spec.k = k;

  const Matrix frame = random_orthogonal(d, derive_seed(seed, 0x6672616dULL)).leftCols(std::max(k - 1, 0));
  const Matrix simplex = helmert_basis(k); // row l: vertex l, pairwise distance sqrt(2)
  const double scale = separation / std::sqrt(2.0);
  for (int l = 0; l < k; ++l) {
    Vector mu = Vector::Zero(d);
    if (k > 1) mu = scale * (frame * simplex.row(l).transpose());
    spec.means.push_back(mu);
  }

  // One random orientation for all components; each spectrum mixes a shared
  // log-uniform draw with a per-component one. Exponents stay in [-1, 0], so
  // every covariance has condition number <= 10.
  const Matrix q = random_orthogonal(d, derive_seed(seed, 0x636f76ULL));
  Rng shared_rng(derive_seed(seed, 0x737065ULL));
  Vector shared(d);
  for (int j = 0; j < d; ++j) shared(j) = shared_rng.uniform();
  for (int l = 0; l < k; ++l) {
    Rng rng(derive_seed(seed, 0x737065ULL, static_cast<std::uint64_t>(l) + 1));
    Vector diag(d);
    for (int j = 0; j < d; ++j)
      diag(j) = std::pow(10.0, -((1.0 - heterogeneity) * shared(j) + heterogeneity * rng.uniform()));
    Matrix cov = dispersion * dispersion * (q.transpose() * diag.asDiagonal() * q);
    spec.covariances.push_back(0.5 * (cov + cov.transpose()));
  }
  return spec;
}

} // namespace fishpc
