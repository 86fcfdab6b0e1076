#pragma once

// Isotropization X -> Y and observation weighting Y -> Z_0.

#include "fishpc/mixture.hpp"

#include <string_view>

namespace fishpc {

inline constexpr double kDefaultAlpha = 0.5;

struct IsotropicDataset {
  Matrix data;       // Y, n x d
  Labels labels;
  int k = 0;
  Vector center;     // grand mean of X
  Matrix whitening;  // A L^{-1/2}, so Y = (X - 1 center^T) whitening

  Eigen::Index n() const noexcept { return data.rows(); }
  Eigen::Index d() const noexcept { return data.cols(); }

  /// Applies the stored map to new rows of X.
  Matrix map(const Matrix& x) const;
  LabeledDataset as_labeled() const { return {data, labels, k}; }
};

/// Centers X and whitens with the spectral decomposition of T_{X_0} = X_0^T X_0.
/// Throws RankError when the smallest eigenvalue of T is not above
/// kRankTolerance times the largest.
IsotropicDataset isotropize(const LabeledDataset& x);

enum class WeightScheme { hyperbolic, exponential };

std::string_view to_string(WeightScheme s);
WeightScheme parse_scheme(std::string_view s);

struct WeightVector {
  Vector weights;
  double alpha = kDefaultAlpha;
  WeightScheme scheme = WeightScheme::hyperbolic;
};

/// hyperbolic:  w = sqrt(1 / (1 + |y|^2 / alpha))
/// exponential: w = exp(-|y|^2 / alpha)
double weight_for(double squared_norm, double alpha, WeightScheme scheme);

WeightVector compute_weights(const IsotropicDataset& y, double alpha = kDefaultAlpha,
                             WeightScheme scheme = WeightScheme::hyperbolic);

/// Z_0 = F diag(w) Y.
LabeledDataset apply_weights(const IsotropicDataset& y, const WeightVector& w);

struct TransformResult {
  IsotropicDataset y;
  WeightVector w;
  LabeledDataset z0;
};

TransformResult transform_pipeline(const LabeledDataset& x, double alpha = kDefaultAlpha,
                                   WeightScheme scheme = WeightScheme::hyperbolic);

} // namespace fishpc
