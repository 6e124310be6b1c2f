#include "semiloc/montecarlo.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "semiloc/estimators.hpp"
#include "semiloc/numerics.hpp"

namespace semiloc {

std::string EstimatorSpec::name() const {
  switch (kind) {
    case EstimatorKind::Mean: return "mean";
    case EstimatorKind::Median: return "median";
    case EstimatorKind::OsConsistent: return "os-c";
    case EstimatorKind::OsRobust: return "os-r";
  }
  return "unknown";
}

std::vector<EstimatorSpec> all_estimators(double h) {
  return {{EstimatorKind::Mean, h}, {EstimatorKind::Median, h}, {EstimatorKind::OsConsistent, h},
          {EstimatorKind::OsRobust, h}};
}

Case1 default_case1() { return {{0.5, 1, 2, 3, 5, 10, 20, 50, 100}}; }
Case2 default_case2() { return {{0.3, 0.5, 0.7, 0.9, 1, 1.5, 2, 3}, 0.1}; }
Case3 default_case3() { return {{0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1}, 10.0, 0.9, 10.0}; }

std::string case_label(const CaseSpec& spec) {
  switch (spec.index()) {
    case 0: return "1";
    case 1: return "2";
    case 2: return "3";
    default: return std::get<CustomCase>(spec).label;
  }
}

std::vector<GridPoint> expand_grid(const CaseSpec& spec) {
  std::vector<GridPoint> out;
  if (const auto* c1 = std::get_if<Case1>(&spec)) {
    for (double nu : c1->nu_grid) out.push_back({nu, SymmetricDensity::student_t(nu)});
  } else if (const auto* c2 = std::get_if<Case2>(&spec)) {
    for (double s : c2->s_grid) out.push_back({s, SymmetricDensity::generalized_gaussian(s, c2->b)});
  } else if (const auto* c3 = std::get_if<Case3>(&spec)) {
    const auto nominal = SymmetricDensity::student_t(c3->nu);
    const auto contaminant = SymmetricDensity::generalized_gaussian(c3->s, c3->b);
    for (double eps : c3->eps_grid) {
      out.push_back({eps, SymmetricDensity::contaminated(eps, nominal, contaminant)});
    }
  } else {
    const auto& custom = std::get<CustomCase>(spec);
    if (custom.params.size() != custom.densities.size()) {
      throw std::invalid_argument("CustomCase: params and densities differ in length");
    }
    for (std::size_t i = 0; i < custom.params.size(); ++i) out.push_back({custom.params[i], custom.densities[i]});
  }
  return out;
}

void validate(const SimulationConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("simulation: trials must be >= 1");
  if (cfg.n < 2) throw std::invalid_argument("simulation: n must be >= 2");
  if (cfg.estimators.empty()) throw std::invalid_argument("simulation: no estimators selected");
  for (const auto& e : cfg.estimators) {
    if (e.kind == EstimatorKind::OsConsistent && (e.h == 0.0 || !std::isfinite(e.h))) {
      throw std::invalid_argument("simulation: os-c needs a finite non-zero h");
    }
  }
  const bool empty = std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Case1>) return c.nu_grid.empty();
        else if constexpr (std::is_same_v<T, Case2>) return c.s_grid.empty();
        else if constexpr (std::is_same_v<T, Case3>) return c.eps_grid.empty();
        else return c.params.empty();
      },
      cfg.case_spec);
  if (empty) throw std::invalid_argument("simulation: grid must be non-empty");
}

double crb_curve(const SymmetricDensity& density, std::size_t n) {
  if (n < 1) throw std::invalid_argument("crb_curve: n must be >= 1");
  return 1.0 / (static_cast<double>(n) * density.fisher_information());
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  int threads = omp_get_max_threads();
  if (const char* env = std::getenv("SEMILOC_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0 && cap < threads) threads = cap;
  }
  return threads;
}

namespace {

constexpr double kFailed = std::numeric_limits<double>::quiet_NaN();

// Per-trial kernel shared by the serial and the parallel driver. Writes one
// squared error per estimator into `out` (NaN marks a failed estimate).
void run_trial(const SimulationConfig& cfg, const GridPoint& point, const ScoreTable& table,
               std::uint64_t stream, std::vector<double>& sample, double* out) {
  Rng rng = Rng::derive(cfg.seed, stream);
  point.density.sample_into(rng, cfg.theta0, sample);
  for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
    const auto& spec = cfg.estimators[e];
    double estimate = kFailed;
    try {
      switch (spec.kind) {
        case EstimatorKind::Mean: estimate = sample_mean(sample); break;
        case EstimatorKind::Median: estimate = sample_median(sample); break;
        case EstimatorKind::OsConsistent: {
          const OsConfig os{cfg.score, ConsistentPsi{spec.h}, MedianPreliminary{}};
          estimate = one_step_estimate(sample, os, table).theta_hat;
          break;
        }
        case EstimatorKind::OsRobust: {
          const OsConfig os{cfg.score, RobustPsi{}, MedianPreliminary{}};
          estimate = one_step_estimate(sample, os, table).theta_hat;
          break;
        }
      }
    } catch (const NumericalError&) {
      estimate = kFailed;
    }
    const double err = estimate - cfg.theta0;
    out[e] = std::isnan(err) ? kFailed : err * err;
  }
}

void run_grid_point_serial(const SimulationConfig& cfg, const GridPoint& point, const ScoreTable& table,
                           std::uint64_t first_stream, std::vector<double>& sq_err) {
  const std::size_t width = cfg.estimators.size();
  std::vector<double> sample(cfg.n);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    run_trial(cfg, point, table, first_stream + t, sample, &sq_err[t * width]);
  }
}

void run_grid_point_parallel(const SimulationConfig& cfg, const GridPoint& point, const ScoreTable& table,
                             std::uint64_t first_stream, std::vector<double>& sq_err) {
  const std::size_t width = cfg.estimators.size();
  const auto trials = static_cast<std::int64_t>(cfg.trials);
  std::exception_ptr failure;
#pragma omp parallel num_threads(resolve_threads(cfg.threads))
  {
    std::vector<double> sample(cfg.n);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t t = 0; t < trials; ++t) {
      try {
        const auto idx = static_cast<std::size_t>(t);
        run_trial(cfg, point, table, first_stream + idx, sample, &sq_err[idx * width]);
      } catch (...) {
#pragma omp critical(semiloc_mc_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<SimulationRecord> run_simulation(const SimulationConfig& cfg, Execution execution) {
  validate(cfg);
  const auto grid = expand_grid(cfg.case_spec);
  const std::string label = case_label(cfg.case_spec);
  const ScoreTable table(cfg.score, cfg.n);
  const std::size_t width = cfg.estimators.size();

  std::vector<SimulationRecord> records;
  std::vector<double> sq_err(cfg.trials * width);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& point = grid[g];
    const double fisher = point.density.fisher_information();
    const double crb = 1.0 / (static_cast<double>(cfg.n) * fisher);
    const std::uint64_t first_stream = static_cast<std::uint64_t>(g) * cfg.trials;

    if (execution == Execution::Serial) {
      run_grid_point_serial(cfg, point, table, first_stream, sq_err);
    } else {
      run_grid_point_parallel(cfg, point, table, first_stream, sq_err);
    }

    for (std::size_t e = 0; e < width; ++e) {
      double sum = 0.0;
      double sum_sq = 0.0;
      std::size_t ok = 0;
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        const double v = sq_err[t * width + e];
        if (std::isnan(v)) continue;
        sum += v;
        sum_sq += v * v;
        ++ok;
      }
      SimulationRecord rec;
      rec.case_label = label;
      rec.grid_param = point.param;
      rec.estimator = cfg.estimators[e].name();
      rec.n = cfg.n;
      rec.trials = cfg.trials;
      rec.crb = crb;
      rec.fisher = fisher;
      rec.failures = cfg.trials - ok;
      rec.flagged = 100 * rec.failures > cfg.trials;
      if (ok > 0) {
        const double m = static_cast<double>(ok);
        rec.mse = sum / m;
        const double fourth = sum_sq / m;
        rec.mse_stderr = std::sqrt(std::max(0.0, fourth - rec.mse * rec.mse) / m);
      } else {
        rec.mse = kFailed;
        rec.mse_stderr = kFailed;
      }
      records.push_back(std::move(rec));
    }
    SimulationRecord bound;
    bound.case_label = label;
    bound.grid_param = point.param;
    bound.estimator = "crb";
    bound.n = cfg.n;
    bound.trials = cfg.trials;
    bound.mse = crb;
    bound.crb = crb;
    bound.fisher = fisher;
    records.push_back(std::move(bound));
  }
  return records;
}

}  // namespace semiloc
