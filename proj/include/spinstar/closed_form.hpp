#pragma once

// Exact evolution of the central pair of a spin star,
//
//   H = w (S_z + J_z) + alpha (S_+ J_- + S_- J_+),
//
// starting from |1, m_s> (x) |J = N/2, M_J = -N/2 + k>. Because S^2, J^2 and
// S_z + J_z are conserved, the interaction only mixes at most three product
// states and every amplitude is a trigonometric function of time.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "spinstar/xstate.hpp"

namespace spinstar {

/// A value n/2 with integer n, used for angular-momentum quantum numbers.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  static constexpr HalfInteger from_twice(int twice) { return HalfInteger(twice); }
  static constexpr HalfInteger from_int(int n) { return HalfInteger(2 * n); }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }

  constexpr HalfInteger operator+(int n) const { return HalfInteger(twice_ + 2 * n); }
  constexpr HalfInteger operator-(int n) const { return HalfInteger(twice_ - 2 * n); }
  constexpr HalfInteger operator-() const { return HalfInteger(-twice_); }
  constexpr auto operator<=>(const HalfInteger&) const = default;

 private:
  constexpr explicit HalfInteger(int twice) : twice_(twice) {}
  int twice_ = 0;
};

struct SpinStarParams {
  int n_bath = 1;    // number of outer spins N
  int k = 0;         // bath excitations, M_J = -N/2 + k
  int m_s = 1;       // central triplet projection
  double alpha = 1.0;
  double omega = 0.0;

  HalfInteger bath_j() const { return HalfInteger::from_twice(n_bath); }
  HalfInteger bath_mj() const { return HalfInteger::from_twice(2 * k - n_bath); }
};

/// Throws Error(Domain) when the parameters are out of range.
void validate_params(const SpinStarParams& params);

/// p(s) = sqrt(J(J+1) - M(M+s)), r(s) = sqrt(J(J+1) - (M+s)(M+2s)) for
/// s = +-1, with p(0) = 1 and r(0) = 0. Negative radicands map to 0.
struct LadderCoeffs {
  std::array<double, 3> p_values{0.0, 1.0, 0.0};  // indexed by s + 1
  std::array<double, 3> r_values{0.0, 0.0, 0.0};

  double p(int s) const { return p_values.at(static_cast<std::size_t>(s + 1)); }
  double r(int s) const { return r_values.at(static_cast<std::size_t>(s + 1)); }
};

LadderCoeffs ladder_coeffs(HalfInteger j, HalfInteger m_j);

struct AmplitudeSet {
  std::complex<double> A{1.0, 0.0};
  std::complex<double> B{0.0, 0.0};
  std::complex<double> C{0.0, 0.0};
  std::complex<double> D{0.0, 0.0};
  std::complex<double> E{0.0, 0.0};
  std::complex<double> global_phase{1.0, 0.0};  // exp(-i w (m_s + M_J) t)
};

AmplitudeSet amplitudes(const SpinStarParams& params, double t);

/// One component |1, central_m> (x) |J, bath_mj> of the evolved state.
struct Branch {
  int central_m = 0;
  HalfInteger bath_mj;
  std::complex<double> amplitude;
};

/// Nonzero components of the evolved state, including the -i factors and the
/// global phase.
std::vector<Branch> evolved_state(const SpinStarParams& params, double t);

/// Reduced state of the central pair. b is the |ud><ud| matrix element, i.e.
/// half the population of |1,0>, so that a + 2b + e = 1.
SymmetricXState reduced_density(const SpinStarParams& params, double t);

/// Constant reduced state of the central singlet |0,0>.
XState singlet_reduced();

struct TimeSeriesRecord {
  double t = 0.0;
  double a = 0.0;
  double b = 0.0;
  double e = 0.0;
  double mean_sz = 0.0;
  double variance_sz = 0.0;
  double two_b = 0.0;
  double concurrence = 0.0;
  bool entangled = false;
};

TimeSeriesRecord evaluate_record(const SpinStarParams& params, double t);

/// t_grid must be nonempty, non-negative and strictly increasing.
std::vector<TimeSeriesRecord> time_series(const SpinStarParams& params,
                                          std::span<const double> t_grid);

/// n_points uniform times (in units of 1/alpha) covering [0, t_max].
std::vector<double> uniform_grid(double t_max, int n_points);

inline constexpr double kDefaultAlphaTMax = 5.0;
inline constexpr int kDefaultGridPoints = 1000;

}  // namespace spinstar
