#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "semiloc/montecarlo.hpp"
#include "semiloc/scores.hpp"

namespace semiloc::cli {

inline constexpr const char* kSimulationCsvHeader = "case,param,estimator,n,trials,mse,crb,fisher,failures";

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2 };

/// Entry point shared by the executable and the tests. argv[0] is ignored.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Locale-free number formatting. The default (significant <= 0) is the
/// shortest string that parses back to the same double, so never more than
/// 17 significant digits; a positive count rounds to that many digits.
std::string format_number(double v, int significant = 0);

void write_simulation_csv(std::ostream& out, const std::vector<SimulationRecord>& records, std::uint64_t seed);
/// Reads back what write_simulation_csv produced; '#' lines are skipped.
std::vector<SimulationRecord> parse_simulation_csv(std::istream& in);

class DataFileError : public std::runtime_error {
 public:
  DataFileError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// One real per line; blank lines and lines starting with '#' are skipped.
std::vector<double> parse_data_file(std::istream& in);

/// gaussian | t:<nu> | gg:<s>,<b>
RankScoreFunction parse_score_spec(const std::string& spec);

}  // namespace semiloc::cli
