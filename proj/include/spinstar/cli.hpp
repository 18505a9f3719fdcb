#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinstar/closed_form.hpp"
#include "spinstar/verify.hpp"

namespace spinstar::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kInvalidInput = 2,
  kIoError = 3,
};

enum class OutputFormat { Csv, Json };

struct KRange {
  int first = 0;
  int last = 0;  // inclusive
};

/// Parses "A..B" (inclusive); throws Error(Domain) on malformed input.
KRange parse_k_range(const std::string& text);

struct RunConfig {
  int n_bath = 100;
  int k = 2;
  std::optional<KRange> k_range;
  int m_s = 1;
  double alpha = 1.0;
  double omega = 0.0;
  double t_max = kDefaultAlphaTMax;  // in units of 1/alpha
  int n_points = kDefaultGridPoints;
  std::string output_path;  // empty or "-" means standard output
  OutputFormat format = OutputFormat::Csv;
  double validation_tol = kDefaultValidationTol;

  SpinStarParams params(int k_value) const;
  /// Grid in units of 1/alpha.
  std::vector<double> alpha_grid() const;
};

/// Throws Error(Domain) describing the first violated constraint.
void validate_config(const RunConfig& config);

/// Overlays keys present in a JSON object onto config. Keys mirror the flag
/// names with underscores: n_bath, k, k_range, ms, alpha, omega, t_max,
/// points, out, format, tolerance.
void apply_json_config(const std::string& json_text, RunConfig& config);

/// Full-precision scientific notation (17 significant digits).
std::string format_real(double x);

inline constexpr const char* kSeriesHeader =
    "alpha_t,a,b,e,mean_sz,var_sz,two_b,concurrence,entangled";
inline constexpr const char* kScanHeader = "k,alpha_t,concurrence";

void write_series(std::ostream& os, const std::vector<TimeSeriesRecord>& records, double alpha,
                  OutputFormat format);

struct ScanRow {
  int k = 0;
  double alpha_t = 0.0;
  double concurrence = 0.0;
};

std::vector<ScanRow> scan(const RunConfig& config, KRange range);
void write_scan(std::ostream& os, const std::vector<ScanRow>& rows, OutputFormat format);

void write_report(std::ostream& os, const verify::VerificationReport& report);

/// Writes fig1.csv .. fig4.csv into dir using config's grid settings.
void write_figures(const std::filesystem::path& dir, const RunConfig& config);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinstar::cli
