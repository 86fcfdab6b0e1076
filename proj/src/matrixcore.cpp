#include "fishpc/matrixcore.hpp"

#include "fishpc/errors.hpp"
#include "fishpc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fishpc {

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols())
    throw ShapeError("symmetric matrix must be square, got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = m.size() ? (m - m.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (!(asym <= kSymmetryTolerance * scale)) throw SymmetryError(asym);
  m_ = 0.5 * (m + m.transpose());
}

void canonicalize_signs(Matrix& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index arg = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

EigenSolution sym_eig(const SymMatrix& m) {
  const Eigen::Index d = m.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");

  // Eigen returns ascending order; reverse with a stable sort so ties keep solver order.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::reverse(order.begin(), order.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return solver.eigenvalues()(a) > solver.eigenvalues()(b); });

  EigenSolution out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    out.values(j) = solver.eigenvalues()(order[static_cast<std::size_t>(j)]);
    out.vectors.col(j) = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
  }
  canonicalize_signs(out.vectors);
  out.kind = EigenKind::standard;
  return out;
}

EigenSolution spd_eig(const SymMatrix& m) {
  EigenSolution e = sym_eig(m);
  const Eigen::Index d = e.dim();
  if (d == 0) return e;
  const double largest = e.values(0);
  const double smallest = e.values(d - 1);
  if (!(largest > 0.0) || !(smallest > kRankTolerance * largest))
    throw DefinitenessError(static_cast<int>(d), smallest, largest);
  return e;
}

EigenSolution gen_eig(const SymMatrix& k_mat, const SymMatrix& m_mat) {
  if (k_mat.dim() != m_mat.dim()) throw ShapeError("generalized eigenproblem matrices differ in size");
  const EigenSolution metric = spd_eig(m_mat);

  // W = A L^{-1/2}; W^T m W = I.
  const Matrix whiten = metric.vectors * metric.values.cwiseSqrt().cwiseInverse().asDiagonal();
  const Matrix reduced = whiten.transpose() * k_mat.matrix() * whiten;
  const EigenSolution inner = sym_eig(SymMatrix(0.5 * (reduced + reduced.transpose())));

  EigenSolution out;
  out.values = inner.values;
  out.vectors = whiten * inner.vectors;
  canonicalize_signs(out.vectors);
  out.kind = EigenKind::generalized;
  return out;
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

double spectral_norm(const SymMatrix& m) {
  if (m.dim() == 0) return 0.0;
  const EigenSolution e = sym_eig(m);
  return std::max(std::abs(e.values(0)), std::abs(e.values(e.dim() - 1)));
}

CenteringOperator::CenteringOperator(Eigen::Index n) : n_(n) {
  if (n < 1) throw SizeError("centering operator needs n >= 1");
}

Matrix CenteringOperator::materialize() const {
  const double inv = 1.0 / static_cast<double>(n_);
  return Matrix::Identity(n_, n_) - Matrix::Constant(n_, n_, inv);
}

Matrix CenteringOperator::apply(const Matrix& x) const {
  if (x.rows() != n_) throw ShapeError("centering operator size does not match data rows");
  return apply_centering(x);
}

Matrix apply_centering(const Matrix& data) {
  if (data.rows() < 1) throw SizeError("centering needs at least one row");
  return kernels::subtract_row(data, kernels::column_means(data));
}

HatMatrix::HatMatrix(Labels labels, int k) : labels_(std::move(labels)), k_(k) {
  if (k < 1) throw ParameterError("cluster count must be positive");
  counts_.assign(static_cast<std::size_t>(k), 0);
  for (int c : labels_) {
    if (c < 0 || c >= k) throw ShapeError("label " + std::to_string(c + 1) + " outside 1.." + std::to_string(k));
    ++counts_[static_cast<std::size_t>(c)];
  }
  for (int c = 0; c < k; ++c)
    if (counts_[static_cast<std::size_t>(c)] == 0) throw MissingClusterError(c + 1);
}

Matrix HatMatrix::materialize() const {
  const Eigen::Index n = this->n();
  Matrix h = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (labels_[i] == labels_[j]) h(i, j) = 1.0 / static_cast<double>(counts_[static_cast<std::size_t>(labels_[i])]);
  return h;
}

Matrix HatMatrix::apply(const Matrix& x) const {
  if (x.rows() != n()) throw ShapeError("hat matrix size does not match data rows");
  kernels::ClusterSums cs = kernels::cluster_sums(x, labels_, k_);
  for (int c = 0; c < k_; ++c) cs.sums.row(c) /= static_cast<double>(cs.counts[static_cast<std::size_t>(c)]);
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out.row(i) = cs.sums.row(labels_[i]);
  return out;
}

Vector HatMatrix::apply(const Vector& x) const {
  const Matrix col = x;
  return apply(col).col(0);
}

Matrix indicator_matrix(const Labels& labels, int k) {
  Matrix e = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), k);
  for (std::size_t i = 0; i < labels.size(); ++i) e(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  return e;
}

} // namespace fishpc
