#pragma once

// Entanglement test for two qubits whose density matrix, in the basis
// {|uu>, |ud>, |du>, |dd>}, has the X shape
//
//     | a  0  0  0 |
//     | 0  b  c  0 |
//     | 0  c* d  0 |
//     | 0  0  0  e |
//
// The symmetric special case (d = c = b, real) admits a necessary and
// sufficient criterion in terms of the first two moments of the collective
// S_z only: the pair is entangled iff Var(S_z) < 2b, iff <S_z>^2 > 1 - 4b.

#include <complex>
#include <optional>
#include <variant>

#include "spinstar/error.hpp"

namespace spinstar {

inline constexpr double kDefaultValidationTol = 1e-9;

// Verdicts whose defining gap is below this are flagged as near-boundary.
inline constexpr double kBoundaryFlagTol = 1e-12;

struct XState {
  double a = 0.0;  // population of |uu>
  double b = 0.0;  // population of |ud>
  std::complex<double> c{0.0, 0.0};  // coherence <ud|rho|du>
  double d = 0.0;  // population of |du>
  double e = 0.0;  // population of |dd>
};

struct SymmetricXState {
  double a = 0.0;
  double b = 0.0;  // both middle populations and the (real) coherence
  double e = 0.0;

  XState to_xstate() const { return XState{a, b, {b, 0.0}, b, e}; }
};

enum class CriterionRule {
  BGreaterThanQuarter,
  WindowTest,
  BoundaryNotEntangled,
};

std::string_view to_string(CriterionRule rule);

struct CriterionVerdict {
  bool entangled = false;
  CriterionRule rule_applied = CriterionRule::WindowTest;
  double concurrence_value = 0.0;
  // |<S_z>^2 - (1 - 4b)| fell below kBoundaryFlagTol; the verdict is then
  // decided by rounding and should be read as "on the boundary".
  bool near_boundary = false;
};

struct SzMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
};

struct VarianceBound {
  double bound = 0.0;
  bool passes = false;
};

// Half-open/closed intervals of <S_z> for which a symmetric state with
// middle population b is entangled:
//   negative: [-|2b-1|, -sqrt(1-4b))    positive: (sqrt(1-4b), |2b-1|]
struct SzWindow {
  double inner = 0.0;  // sqrt(1 - 4b), excluded
  double outer = 0.0;  // |2b - 1|, included

  bool contains(double mean_sz) const;
  bool empty() const { return inner >= outer; }
};

struct AlwaysEntangled {};
struct NeverEntangled {};

using WindowResult = std::variant<SzWindow, AlwaysEntangled, NeverEntangled>;

/// Returns std::nullopt when s is a physical state within tol, otherwise the
/// first failed invariant.
std::optional<Error> check_xstate(const XState& s, double tol = kDefaultValidationTol);

/// Throws the error reported by check_xstate.
void validate_xstate(const XState& s, double tol = kDefaultValidationTol);
void validate_symmetric(const SymmetricXState& s, double tol = kDefaultValidationTol);

/// max[0, 2(|c| - sqrt(a e))]
double concurrence_x(const XState& s);

SzMoments sz_moments(const XState& s);
inline SzMoments sz_moments(const SymmetricXState& s) { return sz_moments(s.to_xstate()); }

/// Upper limit on Var(S_z) implied by sqrt(ae) < |c| <= sqrt(bd). Passing is
/// necessary, not sufficient, for entanglement of a general X state.
VarianceBound necessary_variance_bound(const XState& s);

CriterionVerdict ns_criterion(const SymmetricXState& s);

WindowResult entanglement_windows(double b);

/// Verdict from the two measured quantities <S_z> and b. The populations a and
/// e are recovered from normalization; small negative values (within tol) are
/// clamped to zero.
CriterionVerdict classify_from_measurements(double mean_sz, double b,
                                            double tol = kDefaultValidationTol);

/// Symmetric state reconstructed from (<S_z>, b) by the same rule
/// classify_from_measurements uses.
SymmetricXState reconstruct_symmetric(double mean_sz, double b,
                                      double tol = kDefaultValidationTol);

}  // namespace spinstar
