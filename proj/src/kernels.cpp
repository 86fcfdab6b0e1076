#include "fishpc/kernels.hpp"

#include "fishpc/errors.hpp"

#include <omp.h>

namespace fishpc::kernels {

namespace {

Eigen::Index block_count(Eigen::Index n) { return (n + kBlockRows - 1) / kBlockRows; }

struct Block {
  Eigen::Index begin;
  Eigen::Index size;
};

Block block_at(Eigen::Index b, Eigen::Index n) {
  const Eigen::Index begin = b * kBlockRows;
  return {begin, std::min(kBlockRows, n - begin)};
}

void check_labels(const Matrix& x, const Labels& labels, int k) {
  if (static_cast<Eigen::Index>(labels.size()) != x.rows())
    throw ShapeError("label count " + std::to_string(labels.size()) + " does not match " +
                     std::to_string(x.rows()) + " rows");
  for (int c : labels)
    if (c < 0 || c >= k) throw ShapeError("label " + std::to_string(c + 1) + " outside 1.." + std::to_string(k));
}

} // namespace

Vector column_means(const Matrix& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index nb = block_count(n);
  Matrix partial = Matrix::Zero(x.cols(), nb);

#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < nb; ++b) {
    const Block blk = block_at(b, n);
    partial.col(b) = x.middleRows(blk.begin, blk.size).colwise().sum().transpose();
  }

  Vector total = Vector::Zero(x.cols());
  for (Eigen::Index b = 0; b < nb; ++b) total += partial.col(b);
  return n > 0 ? Vector(total / static_cast<double>(n)) : total;
}

Matrix centered_cross_product(const Matrix& x, const Vector& mean) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const Eigen::Index nb = block_count(n);
  std::vector<Matrix> partial(static_cast<std::size_t>(nb));

#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < nb; ++b) {
    const Block blk = block_at(b, n);
    const Matrix centered = x.middleRows(blk.begin, blk.size).rowwise() - mean.transpose();
    Matrix p = Matrix::Zero(d, d);
    p.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    partial[static_cast<std::size_t>(b)] = p.selfadjointView<Eigen::Lower>();
  }

  Matrix total = Matrix::Zero(d, d);
  for (const Matrix& p : partial) total += p;
  return total;
}

ClusterSums cluster_sums(const Matrix& x, const Labels& labels, int k) {
  check_labels(x, labels, k);
  const Eigen::Index n = x.rows();
  const Eigen::Index nb = block_count(n);
  std::vector<Matrix> partial(static_cast<std::size_t>(nb));

#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < nb; ++b) {
    const Block blk = block_at(b, n);
    Matrix p = Matrix::Zero(k, x.cols());
    for (Eigen::Index i = blk.begin; i < blk.begin + blk.size; ++i) p.row(labels[i]) += x.row(i);
    partial[static_cast<std::size_t>(b)] = std::move(p);
  }

  ClusterSums out{Matrix::Zero(k, x.cols()), std::vector<std::size_t>(static_cast<std::size_t>(k), 0)};
  for (const Matrix& p : partial) out.sums += p;
  for (int c : labels) ++out.counts[static_cast<std::size_t>(c)];
  return out;
}

Vector row_squared_norms(const Matrix& x) {
  Vector out(x.rows());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = x.row(i).squaredNorm();
  return out;
}

Matrix scale_rows(const Matrix& x, const Vector& w) {
  if (w.size() != x.rows())
    throw ShapeError("weight length " + std::to_string(w.size()) + " does not match " + std::to_string(x.rows()) +
                     " rows");
  Matrix out(x.rows(), x.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < x.rows(); ++i) out.row(i) = w(i) * x.row(i);
  return out;
}

Matrix subtract_row(const Matrix& x, const Vector& mean) {
  Matrix out(x.rows(), x.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < x.rows(); ++i) out.row(i) = x.row(i) - mean.transpose();
  return out;
}

namespace serial {

Vector column_means(const Matrix& x) {
  Vector m = Vector::Zero(x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) m(j) += x(i, j);
  if (x.rows() > 0) m /= static_cast<double>(x.rows());
  return m;
}

Matrix centered_cross_product(const Matrix& x, const Vector& mean) {
  const Eigen::Index d = x.cols();
  Matrix t = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b) t(a, b) += (x(i, a) - mean(a)) * (x(i, b) - mean(b));
  return t;
}

ClusterSums cluster_sums(const Matrix& x, const Labels& labels, int k) {
  check_labels(x, labels, k);
  ClusterSums out{Matrix::Zero(k, x.cols()), std::vector<std::size_t>(static_cast<std::size_t>(k), 0)};
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out.sums(labels[i], j) += x(i, j);
    ++out.counts[static_cast<std::size_t>(labels[i])];
  }
  return out;
}

Vector row_squared_norms(const Matrix& x) {
  Vector out = Vector::Zero(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) out(i) += x(i, j) * x(i, j);
  return out;
}

Matrix scale_rows(const Matrix& x, const Vector& w) {
  if (w.size() != x.rows()) throw ShapeError("weight length does not match row count");
  Matrix out = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) out(i, j) *= w(i);
  return out;
}

Matrix subtract_row(const Matrix& x, const Vector& mean) {
  Matrix out = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) out(i, j) -= mean(j);
  return out;
}

} // namespace serial

} // namespace fishpc::kernels
