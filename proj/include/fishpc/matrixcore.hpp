#pragma once

// Dense symmetric eigenproblems, matrix norms, and the centering (F) and
// cluster-mean (H) projectors.

#include "fishpc/types.hpp"

#include <optional>

namespace fishpc {

inline constexpr double kSymmetryTolerance = 1e-12;

/// Smallest eigenvalue of a metric must exceed this fraction of the largest.
inline constexpr double kRankTolerance = 1e-10;

/// Symmetric matrix. Construction checks |a_ij - a_ji| <= kSymmetryTolerance
/// relative to max(1, max|a_ij|) and stores the exact symmetric part.
class SymMatrix {
public:
  explicit SymMatrix(const Matrix& m);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  static SymMatrix identity(Eigen::Index dim) { return SymMatrix(Matrix::Identity(dim, dim)); }

private:
  Matrix m_;
};

enum class EigenKind { standard, generalized };

struct EigenSolution {
  Vector values;  // non-increasing
  Matrix vectors; // column j pairs with values(j)
  EigenKind kind = EigenKind::standard;

  Eigen::Index dim() const noexcept { return values.size(); }
};

EigenSolution sym_eig(const SymMatrix& m);

/// Solves k v = lambda m v for symmetric k and symmetric positive definite m.
/// m is whitened with its own spectral decomposition, W = A L^{-1/2}; the
/// standard problem for W^T k W is solved and its eigenvectors mapped back
/// through W, so the returned vectors satisfy V^T m V = I.
EigenSolution gen_eig(const SymMatrix& k_mat, const SymMatrix& m_mat);

/// Spectral decomposition of a symmetric positive definite matrix with the
/// kRankTolerance check applied; throws DefinitenessError otherwise.
EigenSolution spd_eig(const SymMatrix& m);

double frobenius_norm(const Matrix& m);
double spectral_norm(const SymMatrix& m);

/// Fixes the sign of every column so its largest-magnitude entry is positive.
void canonicalize_signs(Matrix& vectors);

/// Centering operator F = I - (1/n) 1 1^T.
class CenteringOperator {
public:
  explicit CenteringOperator(Eigen::Index n);

  Eigen::Index n() const noexcept { return n_; }
  Matrix materialize() const;
  /// F x without forming F.
  Matrix apply(const Matrix& x) const;

private:
  Eigen::Index n_;
};

/// F data: subtracts column means.
Matrix apply_centering(const Matrix& data);

/// Cluster-mean projector H = E (E^T E)^{-1} E^T for 0-based labels.
class HatMatrix {
public:
  /// Throws MissingClusterError when a label in 0..k-1 never occurs.
  HatMatrix(Labels labels, int k);

  Eigen::Index n() const noexcept { return static_cast<Eigen::Index>(labels_.size()); }
  int k() const noexcept { return k_; }
  const Labels& labels() const noexcept { return labels_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }

  Matrix materialize() const;
  /// Replaces each row of x by the mean of its cluster.
  Matrix apply(const Matrix& x) const;
  Vector apply(const Vector& x) const;

private:
  Labels labels_;
  int k_;
  std::vector<std::size_t> counts_;
};

/// Indicator matrix E (n x k).
Matrix indicator_matrix(const Labels& labels, int k);

} // namespace fishpc
