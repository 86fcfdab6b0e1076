// fishpc: generate mixtures, transform datasets, analyze distinctness and run
// experiment sweeps.

#include "fishpc/errors.hpp"
#include "fishpc/harness.hpp"
#include "fishpc/io.hpp"
#include "fishpc/random.hpp"
#include "fishpc/structure.hpp"
#include "fishpc/subspace.hpp"
#include "fishpc/transform.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <iostream>

using namespace fishpc;
using nlohmann::json;

namespace {

struct Common {
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double alpha = kDefaultAlpha;
  bool alpha_set = false;
  std::string scheme = "hyperbolic";
  bool scheme_set = false;
  std::string out;
};

void add_threads(CLI::App* app, Common& c) {
  app->add_option("--threads", c.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
}

void add_weighting(CLI::App* app, Common& c) {
  app->add_option("--alpha", c.alpha, "weighting parameter alpha > 0")->each([&](const std::string&) { c.alpha_set = true; });
  app->add_option("--scheme", c.scheme, "hyperbolic | exponential")
      ->check(CLI::IsMember({"hyperbolic", "exponential"}))
      ->each([&](const std::string&) { c.scheme_set = true; });
}

json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

int run_generate(const Common& c, const std::string& spec_path, const std::string& spec_out, int d, int k,
                 double separation, double dispersion, double heterogeneity, int n_per_cluster) {
  MixtureSpec spec;
  if (!spec_path.empty()) {
    spec = read_mixture(spec_path);
  } else {
    if (d <= 0 || k <= 0) throw ConfigError("either --spec or both --d and --k are required");
    spec = make_separation_family(d, k, separation, dispersion, derive_seed(c.seed, 1), heterogeneity);
  }
  if (c.out.empty()) throw ConfigError("--out is required");
  auto os = open_output(c.out);
  if (!spec_out.empty()) write_mixture(spec_out, spec);
  const LabeledDataset ds = sample(spec, n_per_cluster, derive_seed(c.seed, 2));
  write_dataset(os, ds);
  return 0;
}

int run_transform(const Common& c, const std::string& in) {
  if (c.out.empty()) throw ConfigError("--out prefix is required");
  const LabeledDataset x = read_dataset(in);
  const TransformResult t = transform_pipeline(x, c.alpha, parse_scheme(c.scheme));
  write_dataset(c.out + "_y.csv", t.y.as_labeled());
  write_dataset(c.out + "_z0.csv", t.z0);
  write_matrix(c.out + "_weights.csv", t.w.weights, {"weight"});

  // Projection bases for plotting: PC(k-1) and S* of X and of Z_0.
  const int m = x.k - 1;
  const LabeledDataset x0{apply_centering(x.data), x.labels, x.k};
  Matrix bases(x.d(), 4 * m);
  bases << pc_subspace(x0.data, m).columns(), fisher_subspace(x0).columns(), pc_subspace(t.z0.data, m).columns(),
      fisher_subspace(t.z0).columns();
  std::vector<std::string> names;
  for (const char* tag : {"pc_x", "fisher_x", "pc_z0", "fisher_z0"})
    for (int j = 1; j <= m; ++j) names.push_back(std::string(tag) + "_" + std::to_string(j));
  write_matrix(c.out + "_bases.csv", bases, names);
  return 0;
}

int run_analyze(const Common& c, const std::string& in, bool csv) {
  const LabeledDataset x = read_dataset(in);
  const TransformResult t = transform_pipeline(x, c.alpha, parse_scheme(c.scheme));
  const PerturbationReport r = distinctness_delta_check(x, t);

  if (csv) {
    std::cout << report_csv_header() << '\n' << to_csv_row(r) << '\n';
    return 0;
  }
  const int m = x.k - 1;
  const LabeledDataset x0{apply_centering(x.data), x.labels, x.k};
  const FisherSolution fx = fisher_solve(scatter_matrices(x), x.k);
  json j;
  j["n"] = r.n;
  j["d"] = r.d;
  j["k"] = r.k;
  j["alpha"] = r.alpha;
  j["scheme"] = c.scheme;
  j["lambda_x"] = r.lambda_x;
  j["lambda_z"] = r.lambda_z;
  j["delta"] = r.observed_delta;
  j["bound"] = r.bound_rhs;
  j["satisfied"] = r.bound_satisfied;
  j["empirical_sd_norm"] = r.empirical_sd_norm;
  j["sd_limit"] = static_cast<double>(r.d) / static_cast<double>(r.n);
  j["predicted_lambda_z"] = r.predicted_lambda_z;
  j["fisher_eigenvalues_x"] = vec_json(fx.eigen.values);
  j["lambda_min_x"] = fx.min_nonzero_eigenvalue;
  j["sss_x"] = sss(fisher_subspace(x0), pc_subspace(x0.data, m));
  j["sss_z"] = sss(fisher_subspace(t.z0), pc_subspace(t.z0.data, m));
  const std::string text = j.dump(2);
  if (c.out.empty()) {
    std::cout << text << '\n';
  } else {
    auto os = open_output(c.out);
    os << text << '\n';
  }
  return 0;
}

int run_sweep_cmd(const Common& c, const std::string& config_path) {
  ExperimentConfig cfg = read_config(config_path);
  if (c.seed_set) cfg.seed = c.seed;
  if (c.alpha_set) cfg.grid.alpha = {c.alpha};
  if (c.scheme_set) cfg.scheme = parse_scheme(c.scheme);
  if (!c.out.empty()) cfg.output_path = c.out;
  cfg.validate();
  const SweepSummary s = run_sweep_to_file(cfg);
  std::cerr << "records=" << s.records << " failed=" << s.failed << " bound_violations=" << s.bound_violations
            << " violations_with_sd_above_d_over_n=" << s.violations_with_sd_above_limit << '\n';
  return 0;
}

int run_recipe(const Common& c, const std::string& name) {
  const ExperimentConfig cfg = recipe(name);
  if (c.out.empty())
    std::cout << to_json(cfg).dump(2) << '\n';
  else
    write_config(c.out, cfg);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distinctness-preserving dimension reduction for Gaussian mixtures"};
  app.require_subcommand(1);
  Common common;

  auto* gen = app.add_subcommand("generate", "sample a labeled dataset from a mixture spec");
  std::string spec_path, spec_out;
  int d = 0, k = 0, n_per_cluster = 0;
  double separation = kCalibratedSeparation, dispersion = 1.0, heterogeneity = kDefaultHeterogeneity;
  gen->add_option("--spec", spec_path, "mixture spec JSON");
  gen->add_option("--d", d, "dimension (separation family)");
  gen->add_option("--k", k, "components (separation family)");
  gen->add_option("--separation", separation, "pairwise mean distance (separation family)");
  gen->add_option("--dispersion", dispersion, "covariance scale (separation family)");
  gen->add_option("--heterogeneity", heterogeneity, "covariance spectrum heterogeneity in [0,1]");
  gen->add_option("--n-per-cluster", n_per_cluster, "observations per component")->required();
  gen->add_option("--spec-out", spec_out, "also write the mixture spec used");
  gen->add_option("--seed", common.seed, "random seed");
  gen->add_option("--out", common.out, "output CSV");
  add_threads(gen, common);

  auto* tr = app.add_subcommand("transform", "isotropize and weight a dataset, writing Y, Z_0, weights and bases");
  std::string in;
  tr->add_option("--in", in, "dataset CSV")->required();
  tr->add_option("--out", common.out, "output prefix");
  add_weighting(tr, common);
  add_threads(tr, common);

  auto* an = app.add_subcommand("analyze", "distinctness and subspace similarity report");
  bool csv = false;
  an->add_option("--in", in, "dataset CSV")->required();
  an->add_option("--out", common.out, "report JSON (default stdout)");
  an->add_flag("--csv", csv, "print the perturbation report as one CSV row");
  add_weighting(an, common);
  add_threads(an, common);

  auto* sw = app.add_subcommand("sweep", "run an experiment config");
  std::string config_path;
  sw->add_option("config", config_path, "experiment config JSON")->required();
  sw->add_option("--seed", common.seed, "override master seed")->each([&](const std::string&) { common.seed_set = true; });
  sw->add_option("--out", common.out, "override output CSV path");
  add_weighting(sw, common);
  add_threads(sw, common);

  auto* rc = app.add_subcommand("recipe", "emit a canned experiment config");
  std::string recipe_name;
  rc->add_option("name", recipe_name, "fig1 | fig2 | fig3_d7 | fig3_d20 | fig3_d20_large | prop1")->required();
  rc->add_option("--out", common.out, "output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc_code = app.exit(e);
    return rc_code == 0 ? 0 : static_cast<int>(ExitCode::config);
  }

  try {
    if (common.threads > 0) omp_set_num_threads(common.threads);
    if (gen->parsed())
      return run_generate(common, spec_path, spec_out, d, k, separation, dispersion, heterogeneity, n_per_cluster);
    if (tr->parsed()) return run_transform(common, in);
    if (an->parsed()) return run_analyze(common, in, csv);
    if (sw->parsed()) return run_sweep_cmd(common, config_path);
    if (rc->parsed()) return run_recipe(common, recipe_name);
  } catch (const Error& e) {
    std::cerr << "fishpc: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "fishpc: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numerical);
  }
  return 0;
}
