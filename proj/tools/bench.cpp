#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tdoa/harness.hpp"
#include "tdoa/signal.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Correlation curves are summed into a checksum so the compiler cannot drop
// the work, and so serial/parallel agreement is visible in the output.
double checksum(const std::vector<double>& curve) {
  double acc = 0.0;
  for (double v : curve) acc += v;
  return acc;
}

void bench_ncc(int num_samples, int repeats) {
  std::mt19937_64 rng(2024);
  const auto waveform = tdoa::make_waveform(tdoa::WaveformKind::band_limited,
                                            num_samples, rng);
  const auto rx_a = tdoa::synthesize_received(waveform, 40, {0.9, 0.3}, 0.05, rng);
  const auto rx_b = tdoa::synthesize_received(waveform, 55, {1.1, -0.2}, 0.05, rng);
  const auto a = tdoa::equalize(rx_a);
  const auto b = tdoa::equalize(rx_b);
  const int max_lag = num_samples - 1;

  double serial_sum = 0.0;
  auto t0 = Clock::now();
  for (int r = 0; r < repeats; ++r) {
    serial_sum += checksum(tdoa::ncc_curve_serial(a, b, max_lag));
  }
  const double serial_s = seconds_since(t0);

  double parallel_sum = 0.0;
  t0 = Clock::now();
  for (int r = 0; r < repeats; ++r) {
    parallel_sum += checksum(tdoa::ncc_curve(a, b, max_lag));
  }
  const double parallel_s = seconds_since(t0);

  std::printf("ncc curve, n=%d, %d repeats\n", num_samples, repeats);
  std::printf("  serial   %8.3f ms/curve  checksum %.17g\n",
              1e3 * serial_s / repeats, serial_sum);
  std::printf("  parallel %8.3f ms/curve  checksum %.17g\n",
              1e3 * parallel_s / repeats, parallel_sum);
  std::printf("  speedup  %8.2fx  checksums %s\n",
              parallel_s > 0.0 ? serial_s / parallel_s : 0.0,
              serial_sum == parallel_sum ? "identical" : "DIFFER");
}

void bench_suite(int seed_count) {
  const std::vector<tdoa::Scenario> scenarios = {
      tdoa::preset_by_name("scenario1"), tdoa::preset_by_name("scenario2")};
  std::vector<tdoa::OptimizerConfig> configs;
  for (tdoa::Algorithm a : tdoa::all_algorithms()) {
    tdoa::OptimizerConfig c;
    c.algorithm = a;
    configs.push_back(c);
  }
  std::vector<std::uint64_t> seeds;
  for (int s = 1; s <= seed_count; ++s) seeds.push_back(s);

  const auto t0 = Clock::now();
  const tdoa::SuiteSummary summary = tdoa::run_suite(scenarios, configs, seeds);
  const double elapsed = seconds_since(t0);
  const long runs = static_cast<long>(scenarios.size()) *
                    static_cast<long>(configs.size()) *
                    static_cast<long>(seeds.size());
  std::printf("suite, %zu scenarios x %zu algorithms x %d seeds (%ld runs)\n",
              scenarios.size(), configs.size(), seed_count, runs);
  std::printf("  total    %8.3f s  (%.3f ms/run)\n", elapsed,
              1e3 * elapsed / static_cast<double>(runs));
  std::printf("  cells    %zu\n", summary.cells.size());
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n\n");
#endif
  bench_ncc(1024, 20);
  std::printf("\n");
  bench_ncc(4096, 5);
  std::printf("\n");
  bench_suite(30);
  return 0;
}
