#pragma once

// Principal-component and Fisher subspaces, and their similarity measured as
// the mean squared cosine of the principal angles.

#include "fishpc/mixture.hpp"

namespace fishpc {

/// Columns are normalized before the conditioning check; the smallest
/// singular value of the normalized basis must exceed this.
inline constexpr double kBasisRankTolerance = 1e-10;
/// Smallest normalized singular value below this flags ill conditioning.
inline constexpr double kBasisConditionWarning = 1e-6;
/// Relative gap between eigenvalues m and m+1 below which PC(m) is not unique.
inline constexpr double kPcAmbiguityTolerance = 1e-10;

class SubspaceBasis {
public:
  /// Throws ShapeError unless 0 < m < d and the columns are linearly independent.
  explicit SubspaceBasis(Matrix columns);

  Eigen::Index ambient_dim() const noexcept { return columns_.rows(); }
  Eigen::Index dim() const noexcept { return columns_.cols(); }
  const Matrix& columns() const noexcept { return columns_; }

  /// Smallest singular value of the column-normalized basis.
  double min_singular_value() const noexcept { return min_sv_; }
  bool ill_conditioned() const noexcept { return min_sv_ < kBasisConditionWarning; }

  /// Set by pc_subspace when eigenvalues m and m+1 of the covariance tie.
  bool ambiguous = false;

  /// Orthonormal basis of the same span (thin QR).
  Matrix orthonormal() const;

private:
  Matrix columns_;
  double min_sv_ = 0.0;
};

/// Span of the top-m eigenvectors of the sample covariance of centered data.
SubspaceBasis pc_subspace(const Matrix& centered_data, int m);

/// Span of the k-1 leading generalized eigenvectors of (B, T).
SubspaceBasis fisher_subspace(const LabeledDataset& data);

struct Similarity {
  double value = 0.0;
  bool ill_conditioned = false;
};

/// Mean of the squared cosines of the principal angles between the spans.
Similarity sss_detailed(const SubspaceBasis& v, const SubspaceBasis& a);
double sss(const SubspaceBasis& v, const SubspaceBasis& a);

} // namespace fishpc
