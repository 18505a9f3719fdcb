#pragma once

// Agreement checks between the closed-form dynamics and the brute-force
// oracles. Each comparison returns the largest absolute deviation seen.

#include <random>
#include <span>
#include <string>
#include <vector>

#include "spinstar/closed_form.hpp"
#include "spinstar/oracle.hpp"

namespace spinstar::verify {

inline constexpr double kOracleTol = 1e-9;
inline constexpr double kConcurrenceTol = 1e-10;
inline constexpr double kNormalizationTol = 1e-12;

struct Deviation {
  double amplitudes = 0.0;  // branch amplitudes vs propagated vector
  double reduced = 0.0;     // reduced 4x4 entries
};

struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  void add(std::string name, double deviation, double tolerance);
};

/// Closed form embedded in the collective basis.
Eigen::VectorXcd closed_form_vector(const SpinStarParams& params, double t);

/// Closed form against propagation with a prebuilt collective propagator for
/// J = n_bath / 2 and the same alpha, omega. `perturbation` is added to the
/// closed-form populations (harness self-test).
Deviation closed_vs_collective(const SpinStarParams& params, std::span<const double> times,
                               const oracle::Propagator& collective, double perturbation = 0.0);

/// Reduced pair matrices from the collective and full tensor-product oracles.
double collective_vs_full(const SpinStarParams& params, std::span<const double> times,
                          const oracle::Propagator& collective, const oracle::Propagator& full);

/// max |A|^2+|B|^2+|C|^2+|D|^2+|E|^2 - 1| and |a + 2b + e - 1| over times.
double normalization_defect(const SpinStarParams& params, std::span<const double> times);

/// Dirichlet-distributed populations, |c| uniform in [0, sqrt(bd)] with a
/// uniform phase.
XState random_xstate(std::mt19937_64& rng);
SymmetricXState random_symmetric(std::mt19937_64& rng);

/// max |concurrence_x - wootters_concurrence| over `samples` random valid X
/// states drawn from a fixed seed.
double random_concurrence_defect(int samples, unsigned long long seed);

struct VerifyOptions {
  int n_bath = 6;
  int n_points = 50;
  double t_max_alpha = kDefaultAlphaTMax;
  double alpha = 1.0;
  double omega = 0.0;
  bool run_full = true;  // ignored when n_bath exceeds oracle::kMaxFullBath
  int concurrence_samples = 2000;
  double perturbation = 0.0;
};

VerificationReport run_verification(const VerifyOptions& opts);

}  // namespace spinstar::verify
