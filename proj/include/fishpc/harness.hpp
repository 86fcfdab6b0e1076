#pragma once

// Seeded replicate sweeps over (d, k, n, alpha, separation, dispersion) and
// the canned configurations behind the figure reproductions.

#include "fishpc/transform.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fishpc {

struct Grid {
  std::vector<int> d;
  std::vector<int> k;
  std::vector<int> n_per_cluster;
  std::vector<double> alpha;
  std::vector<double> separation;
  std::vector<double> dispersion;
};

/// per_cell: replicate seed = derive_seed(seed, cell index, replicate).
/// paired:   replicate seed = derive_seed(seed, 0, replicate), so every cell
///           sees the same mixture draw for a given replicate and grid
///           points can be compared pairwise.
enum class Pairing { per_cell, paired };

struct ExperimentConfig {
  Grid grid;
  int replicates = 50;
  std::uint64_t seed = 0;
  WeightScheme scheme = WeightScheme::hyperbolic;
  double heterogeneity = kDefaultHeterogeneity;
  std::size_t mc_samples = 0; // > 0 adds sdist columns for k = 2 cells
  Pairing pairing = Pairing::per_cell;
  bool record_timings = false;
  std::string output_path;
  nlohmann::json metadata = nlohmann::json::object();

  /// Throws ConfigError.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig read_config(const std::string& path);
void write_config(const std::string& path, const ExperimentConfig& c);

struct Cell {
  std::size_t index = 0;
  int d = 0;
  int k = 0;
  int n_per_cluster = 0;
  double alpha = 0.0;
  double separation = 0.0;
  double dispersion = 0.0;
};

/// Grid cells in canonical order: d, k, n_per_cluster, alpha, separation,
/// dispersion, last varying fastest.
std::vector<Cell> enumerate_cells(const ExperimentConfig& c);

std::uint64_t replicate_seed(const ExperimentConfig& c, const Cell& cell, int replicate);

struct ExperimentRecord {
  Cell cell;
  int replicate = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string failure;

  double lambda_x = 0.0;
  double lambda_z = 0.0;
  double delta = 0.0;
  double bound_rhs = 0.0;
  bool bound_satisfied = false;
  double sss_x = 0.0; // PC(k-1) of X vs S* of X
  double sss_z = 0.0; // PC(k-1) of Z_0 vs S* of Z_0
  double empirical_sd_norm = 0.0;
  double sd_limit = 0.0; // d / n
  double predicted_lambda_z = 0.0;
  double lambda_min_x = 0.0;
  std::optional<double> sdist;
  std::optional<double> sdist_se;
  double elapsed_ms = 0.0;
};

/// Fills the sss, distinctness and perturbation fields of r from x.
/// Throws on module errors.
void measure_dataset(ExperimentRecord& r, const LabeledDataset& x, double alpha, WeightScheme scheme);

/// One replicate of one cell. Module errors produce a failed record.
ExperimentRecord run_cell(const ExperimentConfig& c, const Cell& cell, int replicate);

struct SweepSummary {
  std::size_t records = 0;
  std::size_t failed = 0;
  std::size_t bound_violations = 0;
  std::size_t violations_with_sd_above_limit = 0;
};

/// Runs every (cell, replicate) concurrently; the result is in canonical
/// order (cell-major, replicate-minor).
std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& c);

SweepSummary summarize(const std::vector<ExperimentRecord>& records);

void write_records(std::ostream& os, const ExperimentConfig& c, const std::vector<ExperimentRecord>& records);

/// Opens c.output_path first (IoError before any computation), runs the
/// sweep and writes the CSV.
SweepSummary run_sweep_to_file(const ExperimentConfig& c);

/// Seed-averaged distinctness the default separation is calibrated to.
inline constexpr double kCalibrationTarget = 0.8;

/// Separation giving mean lambda_bar_x ~ kCalibrationTarget for the default
/// family at d = 7, k = 3, n = 300 per cluster, dispersion 1; found once with
/// calibrate_separation(7, 3, 300, kCalibrationTarget, 50, kRecipeSeed).
inline constexpr double kCalibratedSeparation = 2.67;

inline constexpr std::uint64_t kRecipeSeed = 20141001;

/// Bisection on separation for a target mean distinctness of the sampled
/// data, averaged over `replicates` paired draws.
double calibrate_separation(int d, int k, int n_per_cluster, double target, int replicates, std::uint64_t seed);

std::vector<std::string> recipe_names();
/// Throws ConfigError listing the valid names.
ExperimentConfig recipe(const std::string& name);

} // namespace fishpc
