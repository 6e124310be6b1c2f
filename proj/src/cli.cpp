#include "semiloc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "semiloc/distributions.hpp"
#include "semiloc/estimators.hpp"
#include "semiloc/numerics.hpp"

namespace semiloc::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || begin == end) return std::nullopt;
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double require_number(const std::string& text, const std::string& what) {
  const auto v = parse_double(trim(text));
  if (!v) throw std::invalid_argument("cannot parse " + what + " '" + text + "'");
  return *v;
}

void write_gnuplot_script(const std::string& script_path, const std::string& csv_path) {
  std::ofstream gp(script_path);
  if (!gp) throw std::invalid_argument("cannot open gnuplot script path " + script_path);
  gp << "set datafile separator ','\n"
     << "set logscale y\n"
     << "set key outside right\n"
     << "set xlabel 'grid parameter'\n"
     << "set ylabel 'MSE'\n"
     << "plot for [est in \"mean median os-c os-r crb\"] '" << csv_path
     << "' using 2:(strcol(3) eq est ? $6 : 1/0) with linespoints title est\n";
}

int cmd_simulate(const CLI::App& sub, std::ostream& out, std::ostream& err, int case_id,
                 const std::vector<double>& grid, std::size_t n, double theta0, std::size_t trials,
                 std::uint64_t seed, const std::vector<std::string>& estimators, double h,
                 const std::string& out_path, const std::string& gnuplot_path, const std::string& score_spec,
                 int threads) {
  SimulationConfig cfg;
  switch (case_id) {
    case 1: {
      auto c = default_case1();
      if (!grid.empty()) c.nu_grid = grid;
      cfg.case_spec = c;
      break;
    }
    case 2: {
      auto c = default_case2();
      if (!grid.empty()) c.s_grid = grid;
      if (sub.count("--b")) c.b = sub.get_option("--b")->as<double>();
      cfg.case_spec = c;
      break;
    }
    default: {
      auto c = default_case3();
      if (!grid.empty()) c.eps_grid = grid;
      if (sub.count("--nu")) c.nu = sub.get_option("--nu")->as<double>();
      if (sub.count("--s")) c.s = sub.get_option("--s")->as<double>();
      if (sub.count("--b")) c.b = sub.get_option("--b")->as<double>();
      cfg.case_spec = c;
      break;
    }
  }
  cfg.n = n;
  cfg.theta0 = theta0;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.score = parse_score_spec(score_spec);
  cfg.estimators.clear();
  for (const auto& name : estimators) {
    if (name == "mean") cfg.estimators.push_back({EstimatorKind::Mean, h});
    else if (name == "median") cfg.estimators.push_back({EstimatorKind::Median, h});
    else if (name == "os-c") cfg.estimators.push_back({EstimatorKind::OsConsistent, h});
    else if (name == "os-r") cfg.estimators.push_back({EstimatorKind::OsRobust, h});
    else throw std::invalid_argument("unknown estimator '" + name + "'");
  }
  validate(cfg);

  const auto records = run_simulation(cfg);
  if (out_path.empty()) {
    write_simulation_csv(out, records, seed);
  } else {
    std::ofstream file(out_path);
    if (!file) throw std::invalid_argument("cannot open output path " + out_path);
    write_simulation_csv(file, records, seed);
  }
  if (!gnuplot_path.empty()) {
    write_gnuplot_script(gnuplot_path, out_path.empty() ? "simulation.csv" : out_path);
  }
  for (const auto& r : records) {
    if (r.flagged) {
      err << "warning: " << r.estimator << " at param=" << format_number(r.grid_param) << " failed in "
          << r.failures << " of " << r.trials << " trials\n";
    }
  }
  return kOk;
}

int cmd_estimate(std::ostream& out, const std::string& input, const std::string& method, double h,
                 std::optional<double> theta_star, const std::string& score_spec, bool csv) {
  std::ifstream file(input);
  if (!file) throw std::invalid_argument("cannot open input file " + input);
  const auto x = parse_data_file(file);
  if (x.empty()) throw std::invalid_argument("input file contains no observations");

  EstimatorResult r;
  if (method == "mean" || method == "median") {
    r.theta_hat = method == "mean" ? sample_mean(x) : sample_median(x);
    r.theta_star = r.theta_hat;
    r.delta_tilde = 0.0;
    r.psi_hat = std::nan("");
    r.variant = method;
  } else {
    OsConfig cfg;
    cfg.score = parse_score_spec(score_spec);
    if (method == "os-c") cfg.psi = ConsistentPsi{h};
    else cfg.psi = RobustPsi{};
    if (theta_star) cfg.preliminary = FixedPreliminary{*theta_star};
    r = one_step_estimate(x, cfg);
  }
  out << "method=" << method << " n=" << x.size() << " theta_hat=" << format_number(r.theta_hat)
      << " theta_star=" << format_number(r.theta_star) << " delta_tilde=" << format_number(r.delta_tilde)
      << " psi_hat=" << format_number(r.psi_hat) << "\n";
  if (csv) {
    out << "method,n,theta_hat,theta_star,delta_tilde,psi_hat\n"
        << method << ',' << x.size() << ',' << format_number(r.theta_hat) << ',' << format_number(r.theta_star)
        << ',' << format_number(r.delta_tilde) << ',' << format_number(r.psi_hat) << "\n";
  }
  return kOk;
}

int cmd_fisher(const CLI::App& sub, std::ostream& out, const std::string& dist, bool numeric) {
  auto need = [&](const char* flag) {
    if (!sub.count(flag)) throw std::invalid_argument(std::string("--dist ") + dist + " requires " + flag);
    return sub.get_option(flag)->as<double>();
  };
  std::optional<SymmetricDensity> d;
  if (dist == "t") {
    d = SymmetricDensity::student_t(need("--nu"));
  } else if (dist == "gg") {
    d = SymmetricDensity::generalized_gaussian(need("--s"), need("--b"));
  } else {
    d = SymmetricDensity::contaminated(need("--eps"), SymmetricDensity::student_t(need("--nu")),
                                       SymmetricDensity::generalized_gaussian(need("--s"), need("--b")));
  }
  const double value = d->fisher_information();
  out << format_number(value, 10) << "\n";
  if (numeric) {
    const double quad = d->fisher_information_numeric();
    out << "numeric=" << format_number(quad, 10) << " abs_diff=" << format_number(std::abs(value - quad), 3)
        << "\n";
  }
  return kOk;
}

int cmd_score_table(std::ostream& out, const std::string& score_spec, std::size_t points) {
  if (points < 1) throw std::invalid_argument("--points must be >= 1");
  const auto score = parse_score_spec(score_spec);
  const auto values = score.table(points);
  out << "q,K\n";
  for (std::size_t i = 0; i < points; ++i) {
    const double q = static_cast<double>(i + 1) / static_cast<double>(points + 1);
    out << format_number(q) << ',' << format_number(values[i]) << "\n";
  }
  return kOk;
}

}  // namespace

std::string format_number(double v, int significant) {
  char buf[64];
  if (significant <= 0) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  }
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, significant);
  std::string s(buf, res.ptr);
  // to_chars keeps trailing zeros in the fraction for 'general' with a
  // precision; strip them so 0.5 prints as 0.5.
  const auto epos = s.find_first_of("eE");
  std::string mantissa = s.substr(0, epos);
  const std::string exponent = epos == std::string::npos ? "" : s.substr(epos);
  if (mantissa.find('.') != std::string::npos) {
    while (!mantissa.empty() && mantissa.back() == '0') mantissa.pop_back();
    if (!mantissa.empty() && mantissa.back() == '.') mantissa.pop_back();
  }
  return mantissa + exponent;
}

void write_simulation_csv(std::ostream& out, const std::vector<SimulationRecord>& records, std::uint64_t seed) {
  out << "# seed=" << seed << "\n" << kSimulationCsvHeader << "\n";
  for (const auto& r : records) {
    out << r.case_label << ',' << format_number(r.grid_param) << ',' << r.estimator << ',' << r.n << ','
        << r.trials << ',' << format_number(r.mse) << ',' << format_number(r.crb) << ','
        << format_number(r.fisher) << ',' << r.failures << "\n";
  }
}

std::vector<SimulationRecord> parse_simulation_csv(std::istream& in) {
  std::vector<SimulationRecord> records;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kSimulationCsvHeader) throw std::invalid_argument("unexpected CSV header: " + line);
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 9) throw std::invalid_argument("malformed CSV row: " + line);
    SimulationRecord r;
    r.case_label = f[0];
    r.grid_param = require_number(f[1], "param");
    r.estimator = f[2];
    r.n = static_cast<std::size_t>(require_number(f[3], "n"));
    r.trials = static_cast<std::size_t>(require_number(f[4], "trials"));
    r.mse = require_number(f[5], "mse");
    r.crb = require_number(f[6], "crb");
    r.fisher = require_number(f[7], "fisher");
    r.failures = static_cast<std::size_t>(require_number(f[8], "failures"));
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<double> parse_data_file(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto v = parse_double(t);
    if (!v || !std::isfinite(*v)) {
      throw DataFileError("line " + std::to_string(number) + ": cannot parse '" + t + "' as a real number",
                          number);
    }
    values.push_back(*v);
  }
  return values;
}

RankScoreFunction parse_score_spec(const std::string& spec) {
  if (spec == "gaussian") return RankScoreFunction::gaussian();
  if (spec.rfind("t:", 0) == 0) {
    return RankScoreFunction::from_density(
        SymmetricDensity::student_t(require_number(spec.substr(2), "score nu")));
  }
  if (spec.rfind("gg:", 0) == 0) {
    const auto parts = split(spec.substr(3), ',');
    if (parts.size() != 2) throw std::invalid_argument("gg score expects gg:<s>,<b>");
    return RankScoreFunction::from_density(SymmetricDensity::generalized_gaussian(
        require_number(parts[0], "score s"), require_number(parts[1], "score b")));
  }
  throw std::invalid_argument("unknown score spec '" + spec + "' (gaussian | t:<nu> | gg:<s>,<b>)");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-based one-step location estimation and Monte Carlo benchmarks", "semiloc"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo MSE sweep of the four location estimators");
  int case_id = 1;
  std::vector<double> grid;
  std::size_t n = 100;
  double theta0 = 6.0;
  std::size_t trials = 5000;
  std::uint64_t seed = 42;
  std::vector<std::string> estimators{"mean", "median", "os-c", "os-r"};
  double h = 1.0;
  std::string out_path;
  std::string gnuplot_path;
  std::string score_spec = "gaussian";
  int threads = 0;
  double unused = 0.0;
  sim->add_option("--case", case_id, "1: Student-t, 2: generalized Gaussian, 3: contaminated t")
      ->required()
      ->check(CLI::IsMember({1, 2, 3}));
  sim->add_option("--grid", grid, "Comma-separated sweep values (nu, s or eps)")->delimiter(',');
  sim->add_option("--n", n, "Sample size")->capture_default_str();
  sim->add_option("--theta0", theta0, "True location")->capture_default_str();
  sim->add_option("--trials", trials, "Replications per grid point")->capture_default_str();
  sim->add_option("--seed", seed, "Master seed")->capture_default_str();
  sim->add_option("--estimators", estimators, "Subset of mean,median,os-c,os-r")
      ->delimiter(',')
      ->check(CLI::IsMember({"mean", "median", "os-c", "os-r"}));
  sim->add_option("--h", h, "Perturbation for the consistent slope estimate")->capture_default_str();
  sim->add_option("--score", score_spec, "Rank score: gaussian | t:<nu> | gg:<s>,<b>")->capture_default_str();
  sim->add_option("--nu", unused, "Case 3: nominal t degrees of freedom");
  sim->add_option("--s", unused, "Case 3: contaminant GG shape");
  sim->add_option("--b", unused, "Case 2/3: GG scale");
  sim->add_option("--out", out_path, "Write CSV here instead of stdout");
  sim->add_option("--gnuplot", gnuplot_path, "Also write a gnuplot script to this path");
  sim->add_option("--threads", threads, "Worker threads (0: OpenMP default / SEMILOC_THREADS)");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the location of a data file");
  std::string input;
  std::string method;
  double est_h = 1.0;
  double theta_star_value = 0.0;
  std::string est_score = "gaussian";
  bool est_csv = false;
  est->add_option("--input", input, "Text file, one real per line, '#' comments")->required();
  est->add_option("--method", method, "mean | median | os-c | os-r")
      ->required()
      ->check(CLI::IsMember({"mean", "median", "os-c", "os-r"}));
  est->add_option("--h", est_h, "Perturbation for os-c")->capture_default_str();
  auto* theta_star_opt = est->add_option("--theta-star", theta_star_value, "Fixed preliminary estimate");
  est->add_option("--score", est_score, "Rank score: gaussian | t:<nu> | gg:<s>,<b>")->capture_default_str();
  est->add_flag("--csv", est_csv, "Also print a CSV row");

  // fisher
  auto* fis = app.add_subcommand("fisher", "Fisher information of a stock density");
  std::string dist;
  bool numeric = false;
  double fis_unused = 0.0;
  fis->add_option("--dist", dist, "t | gg | mix")->required()->check(CLI::IsMember({"t", "gg", "mix"}));
  fis->add_option("--nu", fis_unused, "Student-t degrees of freedom");
  fis->add_option("--s", fis_unused, "GG shape");
  fis->add_option("--b", fis_unused, "GG scale");
  fis->add_option("--eps", fis_unused, "Mixture weight of the t component");
  fis->add_flag("--numeric", numeric, "Also evaluate by quadrature and print the difference");

  // score-table
  auto* tab = app.add_subcommand("score-table", "Tabulate a rank score function as CSV");
  std::string tab_score = "gaussian";
  std::size_t points = 99;
  tab->add_option("--score", tab_score, "gaussian | t:<nu> | gg:<s>,<b>")->capture_default_str();
  tab->add_option("--points", points, "Number of interior points m")->capture_default_str();

  std::vector<std::string> reversed;
  if (args.size() > 1) reversed.assign(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* shown = &app;
    for (const auto* s : app.get_subcommands()) shown = s;
    err << shown->help();
    return kUsage;
  }

  try {
    if (*sim) {
      return cmd_simulate(*sim, out, err, case_id, grid, n, theta0, trials, seed, estimators, h, out_path,
                          gnuplot_path, score_spec, threads);
    }
    if (*est) {
      std::optional<double> ts;
      if (theta_star_opt->count()) ts = theta_star_value;
      return cmd_estimate(out, input, method, est_h, ts, est_score, est_csv);
    }
    if (*fis) return cmd_fisher(*fis, out, dist, numeric);
    return cmd_score_table(out, tab_score, points);
  } catch (const DataFileError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace semiloc::cli
