#pragma once

// Row-streaming kernels over n x d data. Every kernel has two versions:
//
//   kernels::serial::*  plain single loop, kept as the reference for tests
//   kernels::*          OpenMP version
//
// Reductions in the OpenMP versions split rows into fixed blocks of
// kBlockRows and combine the per-block partials in block order, so the
// result does not depend on the number of threads.

#include "fishpc/types.hpp"

#include <cstddef>

namespace fishpc::kernels {

inline constexpr Eigen::Index kBlockRows = 512;

Vector column_means(const Matrix& x);

/// (x - 1 mean^T)^T (x - 1 mean^T)
Matrix centered_cross_product(const Matrix& x, const Vector& mean);

/// Per-cluster row sums (k x d) and counts.
struct ClusterSums {
  Matrix sums;
  std::vector<std::size_t> counts;
};
ClusterSums cluster_sums(const Matrix& x, const Labels& labels, int k);

Vector row_squared_norms(const Matrix& x);

/// diag(w) x
Matrix scale_rows(const Matrix& x, const Vector& w);

/// x - 1 mean^T
Matrix subtract_row(const Matrix& x, const Vector& mean);

namespace serial {

Vector column_means(const Matrix& x);
Matrix centered_cross_product(const Matrix& x, const Vector& mean);
ClusterSums cluster_sums(const Matrix& x, const Labels& labels, int k);
Vector row_squared_norms(const Matrix& x);
Matrix scale_rows(const Matrix& x, const Vector& w);
Matrix subtract_row(const Matrix& x, const Vector& mean);

} // namespace serial

} // namespace fishpc::kernels
