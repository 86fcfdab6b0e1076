#include "fishpc/subspace.hpp"

#include "fishpc/errors.hpp"
#include "fishpc/kernels.hpp"
#include "fishpc/matrixcore.hpp"
#include "fishpc/structure.hpp"

#include <algorithm>
#include <cmath>

namespace fishpc {

SubspaceBasis::SubspaceBasis(Matrix columns) : columns_(std::move(columns)) {
  const Eigen::Index d = columns_.rows();
  const Eigen::Index m = columns_.cols();
  if (!(m > 0 && m < d))
    throw ShapeError("subspace dimension must satisfy 0 < m < d (m=" + std::to_string(m) + ", d=" + std::to_string(d) + ")");
  Matrix normalized = columns_;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double nrm = normalized.col(j).norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ShapeError("subspace basis has a zero or non-finite column");
    normalized.col(j) /= nrm;
  }
  Eigen::JacobiSVD<Matrix> svd(normalized);
  min_sv_ = svd.singularValues()(m - 1);
  if (!(min_sv_ > kBasisRankTolerance)) throw ShapeError("subspace basis columns are linearly dependent");
}

Matrix SubspaceBasis::orthonormal() const {
  Eigen::HouseholderQR<Matrix> qr(columns_);
  return qr.householderQ() * Matrix::Identity(ambient_dim(), dim());
}

SubspaceBasis pc_subspace(const Matrix& centered_data, int m) {
  const Eigen::Index n = centered_data.rows();
  const Eigen::Index d = centered_data.cols();
  if (n < 1) throw SizeError("pc_subspace needs data");
  if (!(m > 0 && m < d)) throw ShapeError("pc_subspace needs 0 < m < d");
  const Vector mean = kernels::column_means(centered_data);
  const double scale = std::max(1.0, centered_data.cwiseAbs().maxCoeff());
  if (!(mean.cwiseAbs().maxCoeff() < 1e-8 * scale)) throw ConfigError("pc_subspace expects centered data");

  const Matrix cov = kernels::centered_cross_product(centered_data, Vector::Zero(d)) / static_cast<double>(n);
  const EigenSolution e = sym_eig(SymMatrix(cov));
  SubspaceBasis basis(e.vectors.leftCols(m));
  const double gap = e.values(m - 1) - e.values(m);
  basis.ambiguous = std::abs(gap) <= kPcAmbiguityTolerance * std::max(std::abs(e.values(0)), 1e-300);
  return basis;
}

SubspaceBasis fisher_subspace(const LabeledDataset& data) {
  return fisher_solve(scatter_matrices(data), data.k).fisher_basis;
}

Similarity sss_detailed(const SubspaceBasis& v, const SubspaceBasis& a) {
  if (v.ambient_dim() != a.ambient_dim() || v.dim() != a.dim())
    throw ShapeError("subspaces differ in ambient dimension or dimension");
  const Matrix cross = v.orthonormal().transpose() * a.orthonormal();
  const Vector cosines = Eigen::JacobiSVD<Matrix>(cross).singularValues();
  double total = 0.0;
  for (Eigen::Index i = 0; i < cosines.size(); ++i) {
    const double c = std::clamp(cosines(i), 0.0, 1.0);
    total += c * c;
  }
  return {total / static_cast<double>(v.dim()), v.ill_conditioned() || a.ill_conditioned()};
}

double sss(const SubspaceBasis& v, const SubspaceBasis& a) { return sss_detailed(v, a).value; }

} // namespace fishpc
