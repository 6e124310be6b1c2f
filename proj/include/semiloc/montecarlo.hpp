#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "semiloc/distributions.hpp"
#include "semiloc/scores.hpp"

namespace semiloc {

enum class EstimatorKind { Mean, Median, OsConsistent, OsRobust };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Mean;
  double h = 1.0;  // OsConsistent only

  std::string name() const;  // mean | median | os-c | os-r
};

std::vector<EstimatorSpec> all_estimators(double h = 1.0);

/// Student-t data, sweeping nu.
struct Case1 {
  std::vector<double> nu_grid;
};
/// Generalized Gaussian data with fixed scale b, sweeping the shape s.
struct Case2 {
  std::vector<double> s_grid;
  double b = 0.1;
};
/// eps * t_nu + (1 - eps) * GG(s, b), sweeping eps.
struct Case3 {
  std::vector<double> eps_grid;
  double nu = 10.0;
  double s = 0.9;
  double b = 10.0;
};
struct CustomCase {
  std::string label = "custom";
  std::vector<double> params;
  std::vector<SymmetricDensity> densities;
};
using CaseSpec = std::variant<Case1, Case2, Case3, CustomCase>;

Case1 default_case1();
Case2 default_case2();
Case3 default_case3();

struct GridPoint {
  double param;
  SymmetricDensity density;
};

std::string case_label(const CaseSpec& spec);
std::vector<GridPoint> expand_grid(const CaseSpec& spec);

struct SimulationConfig {
  CaseSpec case_spec = default_case1();
  std::size_t n = 100;
  double theta0 = 6.0;
  std::size_t trials = 5000;
  std::uint64_t seed = 42;
  std::vector<EstimatorSpec> estimators = all_estimators();
  RankScoreFunction score = RankScoreFunction::gaussian();
  /// 0: OpenMP default, capped by SEMILOC_THREADS when that is set.
  int threads = 0;
};

void validate(const SimulationConfig& cfg);

struct SimulationRecord {
  std::string case_label;
  double grid_param = 0.0;
  std::string estimator;
  std::size_t n = 0;
  std::size_t trials = 0;
  double mse = 0.0;
  double crb = 0.0;
  double fisher = 0.0;
  std::size_t failures = 0;
  /// sqrt((E[e^4] - mse^2) / successes), from the squared errors.
  double mse_stderr = 0.0;
  /// More than 1% of trials failed.
  bool flagged = false;
};

enum class Execution { Serial, Parallel };

/// One record per (grid point, estimator), followed by an estimator = "crb"
/// record per grid point. Trial t of grid point g draws from
/// Rng::derive(seed, g * trials + t) and results are reduced in trial order,
/// so serial and parallel runs produce identical records.
std::vector<SimulationRecord> run_simulation(const SimulationConfig& cfg,
                                             Execution execution = Execution::Parallel);

double crb_curve(const SymmetricDensity& density, std::size_t n);

/// Thread count a parallel run would use for `requested` (see SimulationConfig::threads).
int resolve_threads(int requested);

}  // namespace semiloc
