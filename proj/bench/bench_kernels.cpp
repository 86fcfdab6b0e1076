// Serial reference kernels vs OpenMP kernels on a synthetic n x d matrix.
//
//   bench_kernels [n] [d] [repeats]

#include "fishpc/kernels.hpp"
#include "fishpc/mixture.hpp"
#include "fishpc/random.hpp"
#include "fishpc/structure.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

using namespace fishpc;

namespace {

double time_ms(const std::function<void()>& fn, int repeats) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double serial_ms, double parallel_ms, double max_diff) {
  std::printf("%-24s %12.3f %12.3f %8.2fx %12.3g\n", name, serial_ms, parallel_ms, serial_ms / parallel_ms, max_diff);
}

} // namespace

int main(int argc, char** argv) {
  const Eigen::Index n = argc > 1 ? std::atol(argv[1]) : 200000;
  const Eigen::Index d = argc > 2 ? std::atol(argv[2]) : 20;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;
  const int k = 4;

  Rng rng(7);
  Matrix x(n, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = rng.normal();
  Labels labels(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(i % k);
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = rng.uniform();

  std::printf("n=%ld d=%ld threads=%d\n", static_cast<long>(n), static_cast<long>(d), omp_get_max_threads());
  std::printf("%-24s %12s %12s %9s %12s\n", "kernel", "serial ms", "omp ms", "speedup", "max |diff|");

  Vector ms, mp;
  const double ts_mean = time_ms([&] { ms = kernels::serial::column_means(x); }, repeats);
  const double tp_mean = time_ms([&] { mp = kernels::column_means(x); }, repeats);
  row("column_means", ts_mean, tp_mean, (ms - mp).cwiseAbs().maxCoeff());

  Matrix cs, cp;
  const double ts_cross = time_ms([&] { cs = kernels::serial::centered_cross_product(x, mp); }, repeats);
  const double tp_cross = time_ms([&] { cp = kernels::centered_cross_product(x, mp); }, repeats);
  row("centered_cross_product", ts_cross, tp_cross, (cs - cp).cwiseAbs().maxCoeff());

  kernels::ClusterSums ss, sp;
  const double ts_cl = time_ms([&] { ss = kernels::serial::cluster_sums(x, labels, k); }, repeats);
  const double tp_cl = time_ms([&] { sp = kernels::cluster_sums(x, labels, k); }, repeats);
  row("cluster_sums", ts_cl, tp_cl, (ss.sums - sp.sums).cwiseAbs().maxCoeff());

  Vector ns, np;
  const double ts_norm = time_ms([&] { ns = kernels::serial::row_squared_norms(x); }, repeats);
  const double tp_norm = time_ms([&] { np = kernels::row_squared_norms(x); }, repeats);
  row("row_squared_norms", ts_norm, tp_norm, (ns - np).cwiseAbs().maxCoeff());

  Matrix rs, rp;
  const double ts_scale = time_ms([&] { rs = kernels::serial::scale_rows(x, w); }, repeats);
  const double tp_scale = time_ms([&] { rp = kernels::scale_rows(x, w); }, repeats);
  row("scale_rows", ts_scale, tp_scale, (rs - rp).cwiseAbs().maxCoeff());

  const MixtureSpec spec = make_separation_family(5, 2, 3.0, 1.0, 11);
  SdistEstimate es, ep;
  const double ts_sd = time_ms([&] { es = serial::sdist_overlap(spec, 400000, 3); }, repeats);
  const double tp_sd = time_ms([&] { ep = sdist_overlap(spec, 400000, 3); }, repeats);
  row("sdist_overlap (400k)", ts_sd, tp_sd, std::abs(es.value - ep.value));
  return 0;
}
