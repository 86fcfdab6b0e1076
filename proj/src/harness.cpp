#include "fishpc/harness.hpp"

#include "fishpc/errors.hpp"
#include "fishpc/io.hpp"
#include "fishpc/matrixcore.hpp"
#include "fishpc/random.hpp"
#include "fishpc/structure.hpp"
#include "fishpc/subspace.hpp"

#include <chrono>
#include <fstream>
#include <numeric>
#include <ostream>

namespace fishpc {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  for (int d : grid.d)
    if (d < 2) throw ConfigError("every d must be >= 2");
  for (int d : grid.d)
    for (int k : grid.k) {
      if (k < 2) throw ConfigError("every k must be >= 2");
      if (!(d > k - 1)) throw ConfigError("grid pair d=" + std::to_string(d) + ", k=" + std::to_string(k) + " violates d > k - 1");
      if (k > std::min(d, 10))
        throw ConfigError("grid pair d=" + std::to_string(d) + ", k=" + std::to_string(k) + " violates k <= min(d, 10)");
      for (int n : grid.n_per_cluster)
        if (static_cast<long long>(n) * k < 10LL * d)
          throw ConfigError("n_per_cluster=" + std::to_string(n) + " too small for d=" + std::to_string(d) +
                            ", k=" + std::to_string(k) + " (need n k >= 10 d)");
    }
  for (int n : grid.n_per_cluster)
    if (n < 1) throw ConfigError("n_per_cluster must be positive");
  for (double a : grid.alpha)
    if (!(a > 0.0)) throw ConfigError("alpha must be positive");
  for (double s : grid.separation)
    if (!(s >= 0.0)) throw ConfigError("separation must be non-negative");
  for (double w : grid.dispersion)
    if (!(w > 0.0)) throw ConfigError("dispersion must be positive");
  if (!(heterogeneity >= 0.0 && heterogeneity <= 1.0)) throw ConfigError("heterogeneity must lie in [0, 1]");
  if (mc_samples != 0 && mc_samples < 10000) throw ConfigError("mc_samples must be 0 or >= 10000");
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["grid"] = {{"d", c.grid.d},
               {"k", c.grid.k},
               {"n_per_cluster", c.grid.n_per_cluster},
               {"alpha", c.grid.alpha},
               {"separation", c.grid.separation},
               {"dispersion", c.grid.dispersion}};
  j["replicates"] = c.replicates;
  j["seed"] = c.seed;
  j["scheme"] = std::string(to_string(c.scheme));
  j["heterogeneity"] = c.heterogeneity;
  j["mc_samples"] = c.mc_samples;
  j["pairing"] = c.pairing == Pairing::paired ? "paired" : "per_cell";
  j["record_timings"] = c.record_timings;
  j["output_path"] = c.output_path;
  j["metadata"] = c.metadata;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    const json& g = j.at("grid");
    c.grid.d = g.value("d", std::vector<int>{});
    c.grid.k = g.value("k", std::vector<int>{});
    c.grid.n_per_cluster = g.value("n_per_cluster", std::vector<int>{});
    c.grid.alpha = g.value("alpha", std::vector<double>{kDefaultAlpha});
    c.grid.separation = g.value("separation", std::vector<double>{kCalibratedSeparation});
    c.grid.dispersion = g.value("dispersion", std::vector<double>{1.0});
    c.replicates = j.value("replicates", 50);
    c.seed = j.value("seed", std::uint64_t{0});
    c.scheme = parse_scheme(j.value("scheme", std::string("hyperbolic")));
    c.heterogeneity = j.value("heterogeneity", kDefaultHeterogeneity);
    c.mc_samples = j.value("mc_samples", std::size_t{0});
    const std::string pairing = j.value("pairing", std::string("per_cell"));
    if (pairing == "paired")
      c.pairing = Pairing::paired;
    else if (pairing == "per_cell")
      c.pairing = Pairing::per_cell;
    else
      throw ConfigError("unknown pairing '" + pairing + "'");
    c.record_timings = j.value("record_timings", false);
    c.output_path = j.value("output_path", std::string());
    c.metadata = j.value("metadata", json::object());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig read_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void write_config(const std::string& path, const ExperimentConfig& c) {
  auto os = open_output(path);
  os << to_json(c).dump(2) << '\n';
}

std::vector<Cell> enumerate_cells(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (int d : c.grid.d)
    for (int k : c.grid.k)
      for (int n : c.grid.n_per_cluster)
        for (double a : c.grid.alpha)
          for (double s : c.grid.separation)
            for (double w : c.grid.dispersion) cells.push_back(Cell{cells.size(), d, k, n, a, s, w});
  return cells;
}

std::uint64_t replicate_seed(const ExperimentConfig& c, const Cell& cell, int replicate) {
  const std::uint64_t cell_key = c.pairing == Pairing::paired ? 0 : cell.index;
  return derive_seed(c.seed, cell_key, static_cast<std::uint64_t>(replicate));
}

namespace {

double similarity_of(const LabeledDataset& centered, int k) {
  const SubspaceBasis fisher = fisher_subspace(centered);
  const SubspaceBasis pcs = pc_subspace(centered.data, k - 1);
  return sss(fisher, pcs);
}

} // namespace

void measure_dataset(ExperimentRecord& r, const LabeledDataset& x, double alpha, WeightScheme scheme) {
  const LabeledDataset x0{apply_centering(x.data), x.labels, x.k};
  r.sss_x = similarity_of(x0, x.k);

  const TransformResult t = transform_pipeline(x, alpha, scheme);
  r.sss_z = similarity_of(t.z0, x.k);

  const PerturbationReport rep = distinctness_delta_check(x, t);
  r.lambda_x = rep.lambda_x;
  r.lambda_z = rep.lambda_z;
  r.delta = rep.observed_delta;
  r.bound_rhs = rep.bound_rhs;
  r.bound_satisfied = rep.bound_satisfied;
  r.empirical_sd_norm = rep.empirical_sd_norm;
  r.sd_limit = static_cast<double>(rep.d) / static_cast<double>(rep.n);
  r.predicted_lambda_z = rep.predicted_lambda_z;
  r.lambda_min_x = fisher_solve(scatter_matrices(x), x.k).min_nonzero_eigenvalue;
}

ExperimentRecord run_cell(const ExperimentConfig& c, const Cell& cell, int replicate) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentRecord r;
  r.cell = cell;
  r.replicate = replicate;
  r.seed = replicate_seed(c, cell, replicate);
  try {
    const MixtureSpec spec =
        make_separation_family(cell.d, cell.k, cell.separation, cell.dispersion, derive_seed(r.seed, 1), c.heterogeneity);
    const LabeledDataset x = sample(spec, cell.n_per_cluster, derive_seed(r.seed, 2));

    measure_dataset(r, x, cell.alpha, c.scheme);

    if (c.mc_samples > 0 && cell.k == 2) {
      const SdistEstimate s = sdist_overlap(spec, c.mc_samples, derive_seed(r.seed, 3));
      r.sdist = s.value;
      r.sdist_se = s.standard_error;
    }
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.failure = e.what();
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& c) {
  c.validate();
  const std::vector<Cell> cells = enumerate_cells(c);
  const long long reps = c.replicates;
  const long long tasks = static_cast<long long>(cells.size()) * reps;
  std::vector<ExperimentRecord> records(static_cast<std::size_t>(tasks));

#pragma omp parallel for schedule(dynamic, 1)
  for (long long t = 0; t < tasks; ++t)
    records[static_cast<std::size_t>(t)] =
        run_cell(c, cells[static_cast<std::size_t>(t / reps)], static_cast<int>(t % reps));

  return records;
}

SweepSummary summarize(const std::vector<ExperimentRecord>& records) {
  SweepSummary s;
  s.records = records.size();
  for (const ExperimentRecord& r : records) {
    if (!r.ok) {
      ++s.failed;
      continue;
    }
    if (!r.bound_satisfied) {
      ++s.bound_violations;
      if (r.empirical_sd_norm > r.sd_limit) ++s.violations_with_sd_above_limit;
    }
  }
  return s;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

} // namespace

void write_records(std::ostream& os, const ExperimentConfig& c, const std::vector<ExperimentRecord>& records) {
  os << "# schema=1\n";
  os << "# pc_source=z0 scheme=" << to_string(c.scheme) << '\n';
  os << "cell,replicate,seed,d,k,n_per_cluster,n,alpha,separation,dispersion,status,"
        "lambda_x,lambda_z,delta,bound_rhs,bound_satisfied,sss_x,sss_z,empirical_sd_norm,sd_limit,"
        "predicted_lambda_z,lambda_min_x,sdist,sdist_se";
  if (c.record_timings) os << ",elapsed_ms";
  os << ",failure\n";
  for (const ExperimentRecord& r : records) {
    const Cell& cell = r.cell;
    os << cell.index << ',' << r.replicate << ',' << r.seed << ',' << cell.d << ',' << cell.k << ','
       << cell.n_per_cluster << ',' << static_cast<long long>(cell.n_per_cluster) * cell.k << ','
       << format_double(cell.alpha) << ',' << format_double(cell.separation) << ','
       << format_double(cell.dispersion) << ',' << (r.ok ? "ok" : "failed");
    if (r.ok) {
      os << ',' << format_double(r.lambda_x) << ',' << format_double(r.lambda_z) << ',' << format_double(r.delta)
         << ',' << format_double(r.bound_rhs) << ',' << (r.bound_satisfied ? 1 : 0) << ','
         << format_double(r.sss_x) << ',' << format_double(r.sss_z) << ',' << format_double(r.empirical_sd_norm)
         << ',' << format_double(r.sd_limit) << ',' << format_double(r.predicted_lambda_z) << ','
         << format_double(r.lambda_min_x) << ',' << opt(r.sdist) << ',' << opt(r.sdist_se);
    } else {
      for (int i = 0; i < 13; ++i) os << ",NA";
    }
    if (c.record_timings) os << ',' << format_double(r.elapsed_ms);
    std::string reason = r.failure;
    for (char& ch : reason)
      if (ch == ',' || ch == '\n') ch = ';';
    os << ',' << reason << '\n';
  }
}

SweepSummary run_sweep_to_file(const ExperimentConfig& c) {
  if (c.output_path.empty()) throw ConfigError("no output path given");
  auto os = open_output(c.output_path);
  const auto records = run_sweep(c);
  write_records(os, c, records);
  os.flush();
  if (!os) throw IoError("failed writing '" + c.output_path + "'");
  return summarize(records);
}

double calibrate_separation(int d, int k, int n_per_cluster, double target, int replicates, std::uint64_t seed) {
  if (!(target > 0.0 && target < 1.0)) throw ParameterError("target distinctness must lie in (0, 1)");
  const auto mean_lambda = [&](double s) {
    double total = 0.0;
    for (int r = 0; r < replicates; ++r) {
      const std::uint64_t rs = derive_seed(seed, 0, static_cast<std::uint64_t>(r));
      const MixtureSpec spec = make_separation_family(d, k, s, 1.0, derive_seed(rs, 1));
      const LabeledDataset x = sample(spec, n_per_cluster, derive_seed(rs, 2));
      total += fisher_solve(scatter_matrices(x), k).distinctness;
    }
    return total / replicates;
  };
  double lo = 0.0, hi = 1.0;
  while (mean_lambda(hi) < target) hi *= 2.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_lambda(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::string> recipe_names() { return {"fig1", "fig2", "fig3_d7", "fig3_d20", "fig3_d20_large", "prop1"}; }

ExperimentConfig recipe(const std::string& name) {
  ExperimentConfig c;
  c.seed = kRecipeSeed;
  c.scheme = WeightScheme::hyperbolic;
  c.grid.alpha = {kDefaultAlpha};
  c.grid.dispersion = {1.0};
  c.grid.separation = {kCalibratedSeparation};
  c.metadata["recipe"] = name;
  c.metadata["separation_source"] =
      "reconstructed: simplex means, calibrated so mean lambda_bar_x ~ 0.8 at d=7, k=3, n=300/cluster";
  c.metadata["calibration_target"] = kCalibrationTarget;
  c.metadata["calibrated_separation"] = kCalibratedSeparation;
  c.metadata["pc_source"] = "z0";

  if (name == "fig1") {
    c.grid.d = {2};
    c.grid.k = {2};
    c.grid.n_per_cluster = {500};
    c.replicates = 1;
    c.output_path = "fig1.csv";
  } else if (name == "fig2") {
    c.grid.d = {2};
    c.grid.k = {2};
    c.grid.n_per_cluster = {500};
    c.grid.separation.clear();
    c.grid.dispersion.clear();
    for (int i = 0; i < 10; ++i) {
      c.grid.separation.push_back(0.5 * (i + 1));
      c.grid.dispersion.push_back(0.5 + 0.25 * i);
    }
    c.replicates = 20;
    c.mc_samples = 50000;
    c.pairing = Pairing::paired;
    c.metadata["separation_source"] = "reconstructed: 10-point separation x dispersion grid, not stated in source";
    c.output_path = "fig2.csv";
  } else if (name == "fig3_d7" || name == "fig3_d20" || name == "fig3_d20_large") {
    const int d = name == "fig3_d7" ? 7 : 20;
    c.grid.d = {d};
    for (int k = 3; k <= std::min(d, 10); ++k) c.grid.k.push_back(k);
    c.grid.n_per_cluster = name == "fig3_d20_large" ? std::vector<int>{1500, 2000} : std::vector<int>{100, 300, 500};
    c.replicates = 50;
    c.pairing = Pairing::paired;
    c.output_path = name + ".csv";
  } else if (name == "prop1") {
    c.grid.d = {7};
    c.grid.k = {3};
    c.grid.n_per_cluster = {300};
    c.grid.separation = {0.0, kCalibratedSeparation};
    c.replicates = 50;
    c.output_path = "prop1.csv";
  } else {
    std::string valid;
    for (const auto& n : recipe_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("unknown recipe '" + name + "'; valid names: " + valid);
  }
  c.validate();
  return c;
}

} // namespace fishpc
