#pragma once

// Scatter matrices, the Fisher eigenproblem and structure distinctness, the
// Monte-Carlo overlap coefficient, and the perturbation machinery relating
// the distinctness of X and of the weighted data Z_0.

#include "fishpc/matrixcore.hpp"
#include "fishpc/mixture.hpp"
#include "fishpc/subspace.hpp"
#include "fishpc/transform.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace fishpc {

struct ScatterPair {
  Matrix total;   // T = X_0^T X_0
  Matrix between; // B = sum_l n_l (mu_l - mu)(mu_l - mu)^T

  Matrix within() const { return total - between; }
};

/// Throws MissingClusterError when one of the labels 1..k is unused.
ScatterPair scatter_matrices(const LabeledDataset& data);

struct FisherSolution {
  EigenSolution eigen;        // of B v = lambda T v
  double distinctness = 0.0;  // mean of the k-1 largest eigenvalues, clamped to [0, 1]
  SubspaceBasis fisher_basis; // k-1 leading generalized eigenvectors

  /// Smallest eigenvalue among the k-1 leading ones that exceeds 1e-8, or 0.
  double min_nonzero_eigenvalue = 0.0;
};

/// Requires k >= 2 and T positive definite (DefinitenessError otherwise).
FisherSolution fisher_solve(const ScatterPair& s, int k);

/// Fisher eigenvalues of a labeled dataset (convenience).
Vector fisher_eigenvalues(const LabeledDataset& data);

struct SdistEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

inline constexpr std::size_t kDefaultMcSamples = 200000;
inline constexpr std::size_t kMcBatch = 4096;

/// 1 - integral of min(f_1/2, f_2/2), estimated by sampling from the mixture
/// and averaging min(f_1, f_2) / (f_1 + f_2). Only k = 2 is supported.
/// Batches of kMcBatch draws use seeds derive_seed(seed, batch) and are
/// summed in batch order.
SdistEstimate sdist_overlap(const MixtureSpec& spec, std::size_t mc_samples = kDefaultMcSamples,
                            std::uint64_t seed = 0);

namespace serial {
SdistEstimate sdist_overlap(const MixtureSpec& spec, std::size_t mc_samples = kDefaultMcSamples,
                            std::uint64_t seed = 0);
} // namespace serial

struct PerturbationBase {
  Matrix k0;
  Matrix m0;
  EigenSolution solution; // gen_eig(k0, m0)
};

/// lambda_j + a_j^T (dK - lambda_j dM) a_j for M-orthonormal a_j.
Vector perturb_eigs_first_order(const PerturbationBase& base, const Matrix& delta_k, const Matrix& delta_m);

/// (1/sqrt(n)) (d/alpha) (lambda_bar_x + sqrt(k))
double proposition1_bound(double n, double d, double k, double alpha, double lambda_bar_x);

/// Linearized weighting perturbation of the isotropic scatter pair:
/// Delta = c diag(|y_i|^2) with c = 1/(2 alpha) (hyperbolic) or 1/alpha
/// (exponential); dT = -2 Y^T Delta Y and dB = -Y^T H Delta Y - Y^T Delta H Y.
struct WeightingPerturbation {
  Matrix delta_total;
  Matrix delta_between;
};
WeightingPerturbation weighting_perturbation(const IsotropicDataset& y, double alpha, WeightScheme scheme);

struct PerturbationReport {
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  int k = 0;
  double alpha = 0.0;
  double lambda_x = 0.0;
  double lambda_z = 0.0;
  double observed_delta = 0.0;
  double bound_rhs = 0.0;
  bool bound_satisfied = false;

  /// sd of |y_i|^2 (population form) and the d/n level it is compared with.
  double empirical_sd_norm = 0.0;
  bool sd_assumption_holds = false;

  /// First-order eigenvalues of (B_{Z_0}, T_{Z_0}) predicted from Y.
  Vector predicted_values;
  double predicted_lambda_z = 0.0;
};

/// Compares distinctness before and after the transformation. A bound
/// violation is recorded in the report, never thrown.
PerturbationReport distinctness_delta_check(const LabeledDataset& x, const TransformResult& t);
PerturbationReport distinctness_delta_check(const LabeledDataset& x, const LabeledDataset& z0, double alpha,
                                            WeightScheme scheme = WeightScheme::hyperbolic);

/// CSV row: n,d,k,alpha,lambda_x,lambda_z,delta,bound,satisfied
std::string report_csv_header();
std::string to_csv_row(const PerturbationReport& r);

} // namespace fishpc
