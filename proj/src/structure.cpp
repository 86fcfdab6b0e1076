#include "fishpc/structure.hpp"

#include "fishpc/errors.hpp"
#include "fishpc/io.hpp"
#include "fishpc/kernels.hpp"
#include "fishpc/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace fishpc {

ScatterPair scatter_matrices(const LabeledDataset& data) {
  if (data.k < 1) throw ParameterError("dataset has no clusters");
  const Vector mean = kernels::column_means(data.data);
  const kernels::ClusterSums cs = kernels::cluster_sums(data.data, data.labels, data.k);

  ScatterPair s;
  s.total = kernels::centered_cross_product(data.data, mean);
  s.between = Matrix::Zero(data.d(), data.d());
  for (int l = 0; l < data.k; ++l) {
    const auto nl = cs.counts[static_cast<std::size_t>(l)];
    if (nl == 0) throw MissingClusterError(l + 1);
    const Vector dev = cs.sums.row(l).transpose() / static_cast<double>(nl) - mean;
    s.between.selfadjointView<Eigen::Lower>().rankUpdate(dev, static_cast<double>(nl));
  }
  s.between = s.between.selfadjointView<Eigen::Lower>();
  return s;
}

namespace {

double mean_top(const Vector& values, int count) {
  double total = 0.0;
  for (int j = 0; j < count; ++j) total += values(j);
  return total / static_cast<double>(count);
}

} // namespace

FisherSolution fisher_solve(const ScatterPair& s, int k) {
  if (k < 2) throw ParameterError("Fisher subspace needs k >= 2");
  if (s.total.rows() <= k - 1) throw ShapeError("Fisher subspace needs d > k - 1");
  EigenSolution e = gen_eig(SymMatrix(s.between), SymMatrix(s.total));
  const int m = k - 1;
  const double lambda = std::clamp(mean_top(e.values, m), 0.0, 1.0);
  double min_nonzero = 0.0;
  for (int j = m - 1; j >= 0; --j)
    if (e.values(j) > 1e-8) {
      min_nonzero = e.values(j);
      break;
    }
  SubspaceBasis basis(e.vectors.leftCols(m));
  return FisherSolution{std::move(e), lambda, std::move(basis), min_nonzero};
}

Vector fisher_eigenvalues(const LabeledDataset& data) {
  const ScatterPair s = scatter_matrices(data);
  return gen_eig(SymMatrix(s.between), SymMatrix(s.total)).values;
}

namespace {

struct Component {
  Vector mean;
  Matrix chol;      // lower Cholesky factor
  double log_det_half = 0.0;
};

std::array<Component, 2> prepare_components(const MixtureSpec& spec, std::size_t mc_samples) {
  if (spec.k != 2) throw UnsupportedError("sdist is only defined for k = 2 (got k = " + std::to_string(spec.k) + ")");
  if (mc_samples < 10000) throw ParameterError("sdist needs at least 10^4 Monte-Carlo samples");
  spec.validate_components();
  std::array<Component, 2> comps;
  for (int l = 0; l < 2; ++l) {
    Eigen::LLT<Matrix> llt(spec.covariances[l]);
    if (llt.info() != Eigen::Success) throw CholeskyError(l + 1);
    comps[l].mean = spec.means[l];
    comps[l].chol = llt.matrixL();
    comps[l].log_det_half = comps[l].chol.diagonal().array().log().sum();
  }
  return comps;
}

struct BatchSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

BatchSums run_batch(const std::array<Component, 2>& comps, std::size_t count, std::uint64_t seed) {
  const Eigen::Index d = comps[0].mean.size();
  Rng rng(seed);
  Vector z(d), x(d);
  BatchSums out;
  for (std::size_t s = 0; s < count; ++s) {
    const int l = rng.uniform() < 0.5 ? 0 : 1;
    for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.normal();
    x = comps[l].mean + comps[l].chol.triangularView<Eigen::Lower>() * z;
    double logf[2];
    for (int c = 0; c < 2; ++c) {
      const Vector u = comps[c].chol.triangularView<Eigen::Lower>().solve(x - comps[c].mean);
      logf[c] = -0.5 * u.squaredNorm() - comps[c].log_det_half;
    }
    // min(f1, f2) / (f1 + f2)
    const double r = 1.0 / (1.0 + std::exp(std::abs(logf[0] - logf[1])));
    out.sum += r;
    out.sum_sq += r * r;
  }
  return out;
}

SdistEstimate finish(double sum, double sum_sq, std::size_t n) {
  const double mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean);
  return {std::clamp(1.0 - mean, 0.0, 1.0), std::sqrt(var / static_cast<double>(n)), n};
}

} // namespace

SdistEstimate sdist_overlap(const MixtureSpec& spec, std::size_t mc_samples, std::uint64_t seed) {
  const auto comps = prepare_components(spec, mc_samples);
  const auto batches = static_cast<long long>((mc_samples + kMcBatch - 1) / kMcBatch);
  std::vector<BatchSums> partial(static_cast<std::size_t>(batches));

#pragma omp parallel for schedule(dynamic)
  for (long long b = 0; b < batches; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kMcBatch;
    const std::size_t count = std::min(kMcBatch, mc_samples - begin);
    partial[static_cast<std::size_t>(b)] = run_batch(comps, count, derive_seed(seed, static_cast<std::uint64_t>(b)));
  }

  double sum = 0.0, sum_sq = 0.0;
  for (const BatchSums& p : partial) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  return finish(sum, sum_sq, mc_samples);
}

namespace serial {

SdistEstimate sdist_overlap(const MixtureSpec& spec, std::size_t mc_samples, std::uint64_t seed) {
  const auto comps = prepare_components(spec, mc_samples);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t begin = 0, b = 0; begin < mc_samples; begin += kMcBatch, ++b) {
    const BatchSums p = run_batch(comps, std::min(kMcBatch, mc_samples - begin), derive_seed(seed, b));
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  return finish(sum, sum_sq, mc_samples);
}

} // namespace serial

Vector perturb_eigs_first_order(const PerturbationBase& base, const Matrix& delta_k, const Matrix& delta_m) {
  const Eigen::Index d = base.solution.dim();
  if (delta_k.rows() != d || delta_k.cols() != d || delta_m.rows() != d || delta_m.cols() != d)
    throw ShapeError("perturbation matrices do not match the base problem");
  Vector out(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double lambda = base.solution.values(j);
    const auto a = base.solution.vectors.col(j);
    out(j) = lambda + a.dot((delta_k - lambda * delta_m) * a);
  }
  return out;
}

double proposition1_bound(double n, double d, double k, double alpha, double lambda_bar_x) {
  if (!(n > 0 && d > 0 && k > 0 && alpha > 0)) throw ParameterError("bound arguments must be positive");
  if (!(lambda_bar_x >= 0.0 && lambda_bar_x <= 1.0)) throw ParameterError("lambda_bar_x must lie in [0, 1]");
  return (1.0 / std::sqrt(n)) * ((d / alpha) * (lambda_bar_x + std::sqrt(k)));
}

WeightingPerturbation weighting_perturbation(const IsotropicDataset& y, double alpha, WeightScheme scheme) {
  const double c = scheme == WeightScheme::hyperbolic ? 1.0 / (2.0 * alpha) : 1.0 / alpha;
  const Vector delta = c * kernels::row_squared_norms(y.data);
  const Matrix delta_y = kernels::scale_rows(y.data, delta);
  const Matrix hy = HatMatrix(y.labels, y.k).apply(y.data);

  WeightingPerturbation p;
  const Matrix ydy = y.data.transpose() * delta_y;
  p.delta_total = -(ydy + ydy.transpose());
  const Matrix hdy = hy.transpose() * delta_y;
  p.delta_between = -(hdy + hdy.transpose());
  return p;
}

namespace {

PerturbationReport build_report(const LabeledDataset& x, const IsotropicDataset& y, const LabeledDataset& z0,
                                double alpha, WeightScheme scheme) {
  if (x.labels != z0.labels || x.n() != z0.n()) throw ShapeError("x and z0 must carry the same labels");
  const int k = x.k;

  PerturbationReport r;
  r.n = x.n();
  r.d = x.d();
  r.k = k;
  r.alpha = alpha;
  r.lambda_x = fisher_solve(scatter_matrices(x), k).distinctness;
  r.lambda_z = fisher_solve(scatter_matrices(z0), k).distinctness;
  r.observed_delta = std::abs(r.lambda_z - r.lambda_x);
  r.bound_rhs = proposition1_bound(static_cast<double>(r.n), static_cast<double>(r.d), k, alpha, r.lambda_x);
  r.bound_satisfied = r.observed_delta <= r.bound_rhs;

  const Vector norms = kernels::row_squared_norms(y.data);
  const double mean = norms.mean();
  r.empirical_sd_norm = std::sqrt((norms.array() - mean).square().mean());
  r.sd_assumption_holds = r.empirical_sd_norm <= static_cast<double>(r.d) / static_cast<double>(r.n);

  const ScatterPair sy = scatter_matrices(y.as_labeled());
  PerturbationBase base{sy.between, sy.total, gen_eig(SymMatrix(sy.between), SymMatrix(sy.total))};
  const WeightingPerturbation p = weighting_perturbation(y, alpha, scheme);
  r.predicted_values = perturb_eigs_first_order(base, p.delta_between, p.delta_total);
  Vector sorted = r.predicted_values;
  std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<>());
  r.predicted_lambda_z = mean_top(sorted, k - 1);
  return r;
}

} // namespace

PerturbationReport distinctness_delta_check(const LabeledDataset& x, const TransformResult& t) {
  return build_report(x, t.y, t.z0, t.w.alpha, t.w.scheme);
}

PerturbationReport distinctness_delta_check(const LabeledDataset& x, const LabeledDataset& z0, double alpha,
                                            WeightScheme scheme) {
  return build_report(x, isotropize(x), z0, alpha, scheme);
}

std::string report_csv_header() { return "n,d,k,alpha,lambda_x,lambda_z,delta,bound,satisfied"; }

std::string to_csv_row(const PerturbationReport& r) {
  return std::to_string(r.n) + ',' + std::to_string(r.d) + ',' + std::to_string(r.k) + ',' + format_double(r.alpha) +
         ',' + format_double(r.lambda_x) + ',' + format_double(r.lambda_z) + ',' + format_double(r.observed_delta) +
         ',' + format_double(r.bound_rhs) + ',' + (r.bound_satisfied ? "1" : "0");
}

} // namespace fishpc
