#include "fishpc/transform.hpp"

#include "fishpc/errors.hpp"
#include "fishpc/kernels.hpp"
#include "fishpc/matrixcore.hpp"

#include <cmath>

namespace fishpc {

Matrix IsotropicDataset::map(const Matrix& x) const {
  if (x.cols() != center.size()) throw ShapeError("data dimension does not match isotropic map");
  return kernels::subtract_row(x, center) * whitening;
}

IsotropicDataset isotropize(const LabeledDataset& x) {
  if (x.n() < 1) throw SizeError("cannot isotropize an empty dataset");
  const Vector mean = kernels::column_means(x.data);
  const Matrix total = kernels::centered_cross_product(x.data, mean);
  const EigenSolution e = sym_eig(SymMatrix(total));

  const Eigen::Index d = e.dim();
  const double largest = e.values(0);
  for (Eigen::Index j = 0; j < d; ++j)
    if (!(largest > 0.0) || !(e.values(j) > kRankTolerance * largest))
      throw RankError(static_cast<int>(j + 1), e.values(j), largest);

  IsotropicDataset y;
  y.center = mean;
  y.whitening = e.vectors * e.values.cwiseSqrt().cwiseInverse().asDiagonal();
  y.data = kernels::subtract_row(x.data, mean) * y.whitening;
  y.labels = x.labels;
  y.k = x.k;
  return y;
}

std::string_view to_string(WeightScheme s) {
  return s == WeightScheme::hyperbolic ? "hyperbolic" : "exponential";
}

WeightScheme parse_scheme(std::string_view s) {
  if (s == "hyperbolic") return WeightScheme::hyperbolic;
  if (s == "exponential") return WeightScheme::exponential;
  throw ConfigError("unknown weighting scheme '" + std::string(s) + "' (expected hyperbolic or exponential)");
}

double weight_for(double squared_norm, double alpha, WeightScheme scheme) {
  if (scheme == WeightScheme::hyperbolic) return std::sqrt(1.0 / (1.0 + squared_norm / alpha));
  return std::exp(-squared_norm / alpha);
}

WeightVector compute_weights(const IsotropicDataset& y, double alpha, WeightScheme scheme) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be a positive finite number");
  const Vector norms = kernels::row_squared_norms(y.data);
  WeightVector w{Vector(norms.size()), alpha, scheme};
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < norms.size(); ++i) w.weights(i) = weight_for(norms(i), alpha, scheme);
  return w;
}

LabeledDataset apply_weights(const IsotropicDataset& y, const WeightVector& w) {
  if (w.weights.size() != y.n())
    throw ShapeError("weight vector has length " + std::to_string(w.weights.size()) + ", expected " +
                     std::to_string(y.n()));
  return {apply_centering(kernels::scale_rows(y.data, w.weights)), y.labels, y.k};
}

TransformResult transform_pipeline(const LabeledDataset& x, double alpha, WeightScheme scheme) {
  TransformResult r;
  r.y = isotropize(x);
  r.w = compute_weights(r.y, alpha, scheme);
  r.z0 = apply_weights(r.y, r.w);
  return r;
}

} // namespace fishpc
