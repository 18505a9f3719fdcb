#include "spinstar/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace spinstar::cli {

namespace {

using nlohmann::json;

void fail(const std::string& what) { throw Error(ErrorCode::Domain, what); }

std::string bool_token(bool v) { return v ? "true" : "false"; }

// Flags as given on the command line; unset ones leave the config alone.
struct Flags {
  std::optional<int> n_bath;
  std::optional<int> k;
  std::optional<std::string> k_range;
  std::optional<int> m_s;
  std::optional<double> alpha;
  std::optional<double> omega;
  std::optional<double> t_max;
  std::optional<int> n_points;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> config_path;
  std::optional<double> tolerance;

  std::vector<double> values;
  bool symmetric = false;
  bool measured = false;
  double c_imag = 0.0;

  double perturbation = 0.0;
  bool collective_only = false;
};

OutputFormat parse_format(const std::string& text) {
  if (text == "csv" || text == "CSV") return OutputFormat::Csv;
  if (text == "json" || text == "JSON") return OutputFormat::Json;
  fail("unknown format '" + text + "' (expected csv or json)");
  return OutputFormat::Csv;
}

void add_run_options(CLI::App* sub, Flags& f) {
  sub->add_option("--n-bath", f.n_bath, "number of bath spins N");
  sub->add_option("--k", f.k, "bath excitations, M_J = -N/2 + k");
  sub->add_option("--k-range", f.k_range, "inclusive k range A..B");
  sub->add_option("--ms", f.m_s, "central triplet projection (-1, 0, 1)");
  sub->add_option("--alpha", f.alpha, "coupling alpha");
  sub->add_option("--omega", f.omega, "free frequency omega");
  sub->add_option("--t-max", f.t_max, "end of the grid in units of 1/alpha");
  sub->add_option("--points", f.n_points, "number of grid points");
  sub->add_option("--out", f.out, "output file (default: stdout)");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_option("--config", f.config_path, "JSON configuration file");
  sub->add_option("--tolerance", f.tolerance, "validation tolerance");
}

RunConfig resolve_config(const Flags& f, RunConfig config) {
  if (f.config_path) {
    std::ifstream in(*f.config_path);
    if (!in) fail("cannot read config file " + *f.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    apply_json_config(buf.str(), config);
  }
  if (f.n_bath) config.n_bath = *f.n_bath;
  if (f.k) config.k = *f.k;
  if (f.k_range) config.k_range = parse_k_range(*f.k_range);
  if (f.m_s) config.m_s = *f.m_s;
  if (f.alpha) config.alpha = *f.alpha;
  if (f.omega) config.omega = *f.omega;
  if (f.t_max) config.t_max = *f.t_max;
  if (f.n_points) config.n_points = *f.n_points;
  if (f.out) config.output_path = *f.out;
  if (f.format) config.format = parse_format(*f.format);
  if (f.tolerance) config.validation_tol = *f.tolerance;
  validate_config(config);
  return config;
}

// Runs body against the configured output file or `fallback`.
template <typename Body>
void with_output(const std::string& path, std::ostream& fallback, Body&& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    fallback.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::ios_base::failure("cannot open " + path + " for writing");
  body(file);
  file.flush();
  if (!file) throw std::ios_base::failure("write to " + path + " failed");
}

void print_windows(std::ostream& out, double b) {
  const WindowResult w = entanglement_windows(b);
  if (std::holds_alternative<AlwaysEntangled>(w)) {
    out << "sz_windows: always entangled (b > 1/4)\n";
  } else if (std::holds_alternative<NeverEntangled>(w)) {
    out << "sz_windows: never entangled (b = 0)\n";
  } else {
    const auto& win = std::get<SzWindow>(w);
    out << "sz_windows: [" << format_real(-win.outer) << ", " << format_real(-win.inner)
        << ") U (" << format_real(win.inner) << ", " << format_real(win.outer) << "]\n";
  }
}

void print_symmetric_report(std::ostream& out, const SymmetricXState& s) {
  const XState x = s.to_xstate();
  const SzMoments mom = sz_moments(x);
  const VarianceBound bound = necessary_variance_bound(x);
  const CriterionVerdict v = ns_criterion(s);
  out << "state: symmetric a=" << format_real(s.a) << " b=" << format_real(s.b)
      << " e=" << format_real(s.e) << "\n"
      << "validation: ok\n"
      << "concurrence: " << format_real(v.concurrence_value) << "\n"
      << "mean_sz: " << format_real(mom.mean) << "\n"
      << "second_moment_sz: " << format_real(mom.second_moment) << "\n"
      << "var_sz: " << format_real(mom.variance) << "\n"
      << "two_b: " << format_real(2.0 * s.b) << "\n"
      << "variance_bound: " << format_real(bound.bound) << " ("
      << (bound.passes ? "passes" : "fails") << ")\n"
      << "rule: " << to_string(v.rule_applied) << "\n";
  if (s.b <= 0.25) print_windows(out, s.b);
  if (v.near_boundary) out << "note: verdict lies on the criterion boundary\n";
  out << "verdict: " << (v.entangled ? "entangled" : "not entangled") << "\n";
}

int cmd_check(const Flags& f, std::ostream& out, std::ostream& err) {
  const double tol = f.tolerance.value_or(kDefaultValidationTol);
  try {
    if (f.measured) {
      if (f.values.size() != 2) fail("--measured expects two values: <mean_sz> <b>");
      const SymmetricXState s = reconstruct_symmetric(f.values[0], f.values[1], tol);
      out << "reconstructed from <S_z> = " << format_real(f.values[0]) << "\n";
      print_symmetric_report(out, s);
      return kSuccess;
    }
    if (f.symmetric) {
      if (f.values.size() != 3) fail("--sym expects three values: <a> <b> <e>");
      const SymmetricXState s{f.values[0], f.values[1], f.values[2]};
      validate_symmetric(s, tol);
      print_symmetric_report(out, s);
      return kSuccess;
    }
    if (f.values.size() != 5) fail("check expects five values <a> <b> <c> <d> <e>, or --sym <a> <b> <e>");
    const XState s{f.values[0], f.values[1], {f.values[2], f.c_imag}, f.values[3], f.values[4]};
    validate_xstate(s, tol);
    const SzMoments mom = sz_moments(s);
    const VarianceBound bound = necessary_variance_bound(s);
    const double conc = concurrence_x(s);
    out << "state: a=" << format_real(s.a) << " b=" << format_real(s.b)
        << " c=" << format_real(s.c.real()) << (s.c.imag() < 0 ? "-" : "+")
        << format_real(std::abs(s.c.imag())) << "i d=" << format_real(s.d)
        << " e=" << format_real(s.e) << "\n"
        << "validation: ok\n"
        << "concurrence: " << format_real(conc) << "\n"
        << "mean_sz: " << format_real(mom.mean) << "\n"
        << "second_moment_sz: " << format_real(mom.second_moment) << "\n"
        << "var_sz: " << format_real(mom.variance) << "\n"
        << "variance_bound: " << format_real(bound.bound) << " ("
        << (bound.passes ? "passes" : "fails") << ")\n"
        << "verdict: " << (conc > 0.0 ? "entangled" : "not entangled") << "\n";
    return kSuccess;
  } catch (const Error& e) {
    err << "invalid state: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace

KRange parse_k_range(const std::string& text) {
  const auto sep = text.find("..");
  if (sep == std::string::npos) fail("k range '" + text + "' is not of the form A..B");
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string lhs = text.substr(0, sep);
    const std::string rhs = text.substr(sep + 2);
    KRange r{std::stoi(lhs, &used_a), std::stoi(rhs, &used_b)};
    if (used_a != lhs.size() || used_b != rhs.size()) throw std::invalid_argument(text);
    if (r.first > r.last) fail("k range '" + text + "' is decreasing");
    return r;
  } catch (const std::logic_error&) {
    fail("k range '" + text + "' is not of the form A..B");
  }
  return {};
}

SpinStarParams RunConfig::params(int k_value) const {
  return SpinStarParams{n_bath, k_value, m_s, alpha, omega};
}

std::vector<double> RunConfig::alpha_grid() const { return uniform_grid(t_max, n_points); }

void validate_config(const RunConfig& c) {
  std::ostringstream os;
  if (c.n_bath < 1) {
    os << "n_bath must be positive";
  } else if (c.k < 0 || c.k > c.n_bath) {
    os << "k = " << c.k << " outside [0, " << c.n_bath << "]";
  } else if (c.k_range && (c.k_range->first < 0 || c.k_range->last > c.n_bath)) {
    os << "k range outside [0, " << c.n_bath << "]";
  } else if (c.m_s < -1 || c.m_s > 1) {
    os << "ms must be -1, 0 or 1";
  } else if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) {
    os << "alpha must be positive (time is reported as alpha t)";
  } else if (!std::isfinite(c.omega)) {
    os << "omega must be finite";
  } else if (!(c.t_max > 0.0) || !std::isfinite(c.t_max)) {
    os << "t_max must be positive";
  } else if (c.n_points < 1) {
    os << "points must be at least 1";
  } else if (!(c.validation_tol >= 0.0)) {
    os << "tolerance must be non-negative";
  } else {
    return;
  }
  fail(os.str());
}

void apply_json_config(const std::string& json_text, RunConfig& config) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "n_bath") config.n_bath = value.get<int>();
      else if (key == "k") config.k = value.get<int>();
      else if (key == "k_range") {
        if (value.is_string()) {
          config.k_range = parse_k_range(value.get<std::string>());
        } else {
          const auto pair = value.get<std::vector<int>>();
          if (pair.size() != 2 || pair[0] > pair[1]) fail("k_range must be [first, last]");
          config.k_range = KRange{pair[0], pair[1]};
        }
      }
      else if (key == "ms") config.m_s = value.get<int>();
      else if (key == "alpha") config.alpha = value.get<double>();
      else if (key == "omega") config.omega = value.get<double>();
      else if (key == "t_max") config.t_max = value.get<double>();
      else if (key == "points") config.n_points = value.get<int>();
      else if (key == "out") config.output_path = value.get<std::string>();
      else if (key == "format") config.format = parse_format(value.get<std::string>());
      else if (key == "tolerance") config.validation_tol = value.get<double>();
      else fail("unknown config key '" + key + "'");
    }
  } catch (const json::type_error& e) {
    fail(std::string("config value has the wrong type: ") + e.what());
  }
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

void write_series(std::ostream& os, const std::vector<TimeSeriesRecord>& records, double alpha,
                  OutputFormat format) {
  if (format == OutputFormat::Json) {
    json arr = json::array();
    for (const auto& r : records) {
      arr.push_back({{"alpha_t", alpha * r.t}, {"a", r.a}, {"b", r.b}, {"e", r.e},
                     {"mean_sz", r.mean_sz}, {"var_sz", r.variance_sz}, {"two_b", r.two_b},
                     {"concurrence", r.concurrence}, {"entangled", r.entangled}});
    }
    os << arr.dump(1) << "\n";
    return;
  }
  os << kSeriesHeader << "\n";
  for (const auto& r : records) {
    os << format_real(alpha * r.t) << ',' << format_real(r.a) << ',' << format_real(r.b) << ','
       << format_real(r.e) << ',' << format_real(r.mean_sz) << ',' << format_real(r.variance_sz)
       << ',' << format_real(r.two_b) << ',' << format_real(r.concurrence) << ','
       << bool_token(r.entangled) << "\n";
  }
}

std::vector<ScanRow> scan(const RunConfig& config, KRange range) {
  validate_config(config);
  if (range.first < 0 || range.last > config.n_bath || range.first > range.last) {
    fail("k range outside [0, n_bath]");
  }
  const std::vector<double> grid = config.alpha_grid();
  std::vector<double> times;
  for (double x : grid) times.push_back(x / config.alpha);

  std::vector<ScanRow> rows;
  rows.reserve(grid.size() * static_cast<std::size_t>(range.last - range.first + 1));
  for (int k = range.first; k <= range.last; ++k) {
    const auto series = time_series(config.params(k), times);
    for (std::size_t i = 0; i < series.size(); ++i) {
      rows.push_back({k, grid[i], series[i].concurrence});
    }
  }
  return rows;
}

void write_scan(std::ostream& os, const std::vector<ScanRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"k", r.k}, {"alpha_t", r.alpha_t}, {"concurrence", r.concurrence}});
    }
    os << arr.dump(1) << "\n";
    return;
  }
  os << kScanHeader << "\n";
  for (const auto& r : rows) {
    os << r.k << ',' << format_real(r.alpha_t) << ',' << format_real(r.concurrence) << "\n";
  }
}

void write_report(std::ostream& os, const verify::VerificationReport& report) {
  for (const auto& c : report.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << " max_deviation=" << format_real(c.max_deviation)
       << " tolerance=" << format_real(c.tolerance) << "\n";
  }
  os << "overall: " << (report.passed() ? "PASS" : "FAIL") << "\n";
}

void write_figures(const std::filesystem::path& dir, const RunConfig& config) {
  validate_config(config);
  std::filesystem::create_directories(dir);
  RunConfig fig = config;
  fig.n_bath = 100;
  fig.m_s = 1;
  const std::vector<double> grid = fig.alpha_grid();
  std::vector<double> times;
  for (double x : grid) times.push_back(x / fig.alpha);

  for (auto [name, k] : {std::pair{"fig1.csv", 2}, std::pair{"fig2.csv", 98}}) {
    const auto series = time_series(fig.params(k), times);
    with_output((dir / name).string(), std::cout, [&](std::ostream& os) {
      os << "alpha_t,var_sz,two_b\n";
      for (std::size_t i = 0; i < series.size(); ++i) {
        os << format_real(grid[i]) << ',' << format_real(series[i].variance_sz) << ','
           << format_real(series[i].two_b) << "\n";
      }
    });
  }
  for (auto [name, range] : {std::pair{"fig3.csv", KRange{0, 100}}, std::pair{"fig4.csv", KRange{97, 99}}}) {
    const auto rows = scan(fig, range);
    with_output((dir / name).string(), std::cout,
                [&](std::ostream& os) { write_scan(os, rows, OutputFormat::Csv); });
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement of the central pair of a spin star"};
  app.require_subcommand(1);
  Flags f;

  auto* check = app.add_subcommand("check", "criterion report for a supplied X state");
  check->add_option("values", f.values, "a b c d e | --sym a b e | --measured mean_sz b");
  check->add_flag("--sym", f.symmetric, "symmetric state given as a b e");
  check->add_flag("--measured", f.measured, "state given by measured <S_z> and b");
  check->add_option("--c-imag", f.c_imag, "imaginary part of the coherence c");
  check->add_option("--tolerance", f.tolerance, "validation tolerance");

  auto* evolve = app.add_subcommand("evolve", "time series of the reduced central state");
  add_run_options(evolve, f);
  auto* scan_cmd = app.add_subcommand("scan", "concurrence surface over k and alpha t");
  add_run_options(scan_cmd, f);
  auto* verify_cmd = app.add_subcommand("verify", "closed form against brute-force oracles");
  add_run_options(verify_cmd, f);
  verify_cmd->add_option("--perturb", f.perturbation, "offset injected into the closed form (self-test)");
  verify_cmd->add_flag("--collective-only", f.collective_only, "skip the full tensor-product oracle");
  auto* figures = app.add_subcommand("figures", "write fig1.csv .. fig4.csv");
  add_run_options(figures, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInvalidInput;
  }

  try {
    if (check->parsed()) return cmd_check(f, out, err);

    if (evolve->parsed()) {
      const RunConfig c = resolve_config(f, RunConfig{});
      std::vector<double> times;
      for (double x : c.alpha_grid()) times.push_back(x / c.alpha);
      const auto records = time_series(c.params(c.k), times);
      with_output(c.output_path, out, [&](std::ostream& os) { write_series(os, records, c.alpha, c.format); });
      return kSuccess;
    }

    if (scan_cmd->parsed()) {
      const RunConfig c = resolve_config(f, RunConfig{});
      const auto rows = scan(c, c.k_range.value_or(KRange{c.k, c.k}));
      with_output(c.output_path, out, [&](std::ostream& os) { write_scan(os, rows, c.format); });
      return kSuccess;
    }

    if (verify_cmd->parsed()) {
      RunConfig defaults;
      defaults.n_bath = 6;
      defaults.n_points = 50;
      const RunConfig c = resolve_config(f, defaults);
      verify::VerifyOptions opts;
      opts.n_bath = c.n_bath;
      opts.n_points = c.n_points;
      opts.t_max_alpha = c.t_max;
      opts.alpha = c.alpha;
      opts.omega = c.omega;
      opts.run_full = !f.collective_only;
      opts.perturbation = f.perturbation;
      const auto report = verify::run_verification(opts);
      with_output(c.output_path, out, [&](std::ostream& os) { write_report(os, report); });
      return report.passed() ? kSuccess : kVerificationFailed;
    }

    if (figures->parsed()) {
      RunConfig c = resolve_config(f, RunConfig{});
      const std::string dir = c.output_path.empty() ? "." : c.output_path;
      write_figures(dir, c);
      out << "wrote fig1.csv fig2.csv fig3.csv fig4.csv to " << dir << "\n";
      return kSuccess;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::ios_base::failure& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  }
  return kInvalidInput;
}

}  // namespace spinstar::cli
