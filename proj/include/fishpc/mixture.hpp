#pragma once

// Gaussian mixtures with equal mixing factors 1/k: specification, exact-count
// sampling and population moments.

#include "fishpc/types.hpp"

#include <cstdint>
#include <string>

namespace fishpc {

struct MixtureSpec {
  int d = 0;
  int k = 0;
  std::vector<Vector> means;       // k vectors of length d
  std::vector<Matrix> covariances; // k SPD d x d matrices

  double mixing() const { return 1.0 / static_cast<double>(k); }

  /// Throws ConfigError on shape problems or d <= k-1, CholeskyError on a
  /// covariance that is not SPD.
  void validate() const;

  /// Shape, symmetry and Cholesky checks only; no d > k-1 requirement.
  void validate_components() const;
};

struct LabeledDataset {
  Matrix data; // n x d, row i is observation x_i
  Labels labels;
  int k = 0;

  Eigen::Index n() const noexcept { return data.rows(); }
  Eigen::Index d() const noexcept { return data.cols(); }
  std::vector<std::size_t> per_cluster_n() const;
};

struct MixtureMoments {
  Vector grand_mean;
  Matrix within;   // (1/k) sum Sigma_l
  Matrix between;  // (1/k) sum (mu_l - mu)(mu_l - mu)^T
  Matrix grand_cov; // within + between
};

/// n_per_cluster rows from each component, x = mu_l + L_l z with L_l the
/// Cholesky factor of Sigma_l. Component l draws from its own stream
/// derive_seed(seed, l), so a larger sample extends a smaller one.
/// Requires n_per_cluster * k >= 10 d.
LabeledDataset sample(const MixtureSpec& spec, int n_per_cluster, std::uint64_t seed);

MixtureMoments population_moments(const MixtureSpec& spec);

inline constexpr double kDefaultHeterogeneity = 0.25;

/// k means on a regular simplex with pairwise distance `separation`, placed on
/// a random (k-1)-dimensional orthonormal frame in R^d.
///
/// Covariances are dispersion^2 Q^T D_l Q with one random orthogonal Q shared
/// by all components, so within-cluster elongation is coherent across
/// clusters. D_l has entries 10^-e with e = (1-h) u_j + h u_lj, u uniform on
/// [0, 1): h = 0 gives equal covariances, h = 1 independent spectra.
/// Condition numbers never exceed 10.
///
/// The random draws depend on (d, k, seed, h) only, so varying separation or
/// dispersion with a fixed seed rescales one configuration.
MixtureSpec make_separation_family(int d, int k, double separation, double dispersion, std::uint64_t seed,
                                   double heterogeneity = kDefaultHeterogeneity);

/// Random orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Matrix random_orthogonal(int d, std::uint64_t seed);

} // namespace fishpc
