// Wall-clock comparison of the serial reference Monte Carlo driver and the
// OpenMP driver on the same configuration; also checks the records agree.
//
//   bench_montecarlo [trials] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "semiloc/montecarlo.hpp"

int main(int argc, char** argv) {
  using clock = std::chrono::steady_clock;
  semiloc::SimulationConfig cfg;
  cfg.case_spec = semiloc::Case1{{1.0, 3.0, 10.0}};
  cfg.trials = argc > 1 ? static_cast<std::size_t>(std::atol(argv[1])) : 5000;
  cfg.threads = argc > 2 ? std::atoi(argv[2]) : 0;

  const auto t0 = clock::now();
  const auto serial = semiloc::run_simulation(cfg, semiloc::Execution::Serial);
  const auto t1 = clock::now();
  const auto parallel = semiloc::run_simulation(cfg, semiloc::Execution::Parallel);
  const auto t2 = clock::now();

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i) {
    identical = serial[i].mse == parallel[i].mse && serial[i].failures == parallel[i].failures;
  }

  const double ts = std::chrono::duration<double>(t1 - t0).count();
  const double tp = std::chrono::duration<double>(t2 - t1).count();
  std::printf("trials/grid-point=%zu grid-points=3 threads=%d\n", cfg.trials, semiloc::resolve_threads(cfg.threads));
  std::printf("serial   %.3f s\n", ts);
  std::printf("parallel %.3f s  (speedup %.2fx)\n", tp, ts / tp);
  std::printf("records identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
