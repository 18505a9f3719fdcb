#include "spinstar/xstate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spinstar {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativePopulation: return "NEGATIVE_POPULATION";
    case ErrorCode::TraceNotOne: return "TRACE_NOT_ONE";
    case ErrorCode::LandauViolation: return "LANDAU_VIOLATION";
    case ErrorCode::InconsistentInput: return "INCONSISTENT_INPUT";
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::EmptyGrid: return "EMPTY_GRID";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::NotAState: return "NOT_A_STATE";
  }
  return "UNKNOWN";
}

std::string_view to_string(CriterionRule rule) {
  switch (rule) {
    case CriterionRule::BGreaterThanQuarter: return "B_GT_QUARTER";
    case CriterionRule::WindowTest: return "WINDOW_TEST";
    case CriterionRule::BoundaryNotEntangled: return "BOUNDARY_NOT_ENTANGLED";
  }
  return "UNKNOWN";
}

namespace {

double safe_sqrt(double x) { return std::sqrt(std::max(x, 0.0)); }

}  // namespace

bool SzWindow::contains(double mean_sz) const {
  const double m = std::abs(mean_sz);
  // the outer edge is reached exactly when a or e vanishes; allow rounding
  return m > inner && m <= outer + kBoundaryFlagTol;
}

std::optional<Error> check_xstate(const XState& s, double tol) {
  const double pops[] = {s.a, s.b, s.d, s.e};
  const char* names[] = {"a", "b", "d", "e"};
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(pops[i]) || pops[i] < -tol) {
      std::ostringstream os;
      os << "population " << names[i] << " = " << pops[i] << " is negative";
      return Error(ErrorCode::NegativePopulation, os.str());
    }
  }
  const double trace = s.a + s.b + s.d + s.e;
  if (std::abs(trace - 1.0) > tol) {
    std::ostringstream os;
    os << "a + b + d + e = " << trace;
    return Error(ErrorCode::TraceNotOne, os.str());
  }
  const double mag = std::abs(s.c);
  const double limit = safe_sqrt(s.b * s.d);
  if (!std::isfinite(mag) || mag > limit + tol) {
    std::ostringstream os;
    os << "|c| = " << mag << " exceeds sqrt(b d) = " << limit;
    return Error(ErrorCode::LandauViolation, os.str());
  }
  return std::nullopt;
}

void validate_xstate(const XState& s, double tol) {
  if (auto err = check_xstate(s, tol)) throw *err;
}

void validate_symmetric(const SymmetricXState& s, double tol) {
  validate_xstate(s.to_xstate(), tol);
}

double concurrence_x(const XState& s) {
  return std::max(0.0, 2.0 * (std::abs(s.c) - safe_sqrt(s.a * s.e)));
}

SzMoments sz_moments(const XState& s) {
  const double mean = s.a - s.e;
  const double second = s.a + s.e;
  return {mean, second, second - mean * mean};
}

VarianceBound necessary_variance_bound(const XState& s) {
  const double mid = s.b + s.d;
  const double bound = 4.0 * s.b * s.d - mid * (mid - 1.0);
  return {bound, sz_moments(s).variance < bound};
}

CriterionVerdict ns_criterion(const SymmetricXState& s) {
  validate_symmetric(s);

  const double mean = s.a - s.e;
  const double gap = mean * mean - (1.0 - 4.0 * s.b);
  const double conc = concurrence_x(s.to_xstate());

  CriterionVerdict v;
  v.near_boundary = std::abs(gap) <= kBoundaryFlagTol;
  if (s.b > 0.25) {
    v.entangled = true;
    v.rule_applied = CriterionRule::BGreaterThanQuarter;
  } else {
    v.entangled = gap > 0.0;
    v.rule_applied = gap == 0.0 ? CriterionRule::BoundaryNotEntangled : CriterionRule::WindowTest;
  }
  v.concurrence_value = v.entangled ? conc : 0.0;

  // The moment test and the concurrence formula can only disagree through
  // rounding at the boundary.
  if (v.entangled != (conc > 0.0)) {
    v.entangled = false;
    v.rule_applied = CriterionRule::BoundaryNotEntangled;
    v.concurrence_value = 0.0;
    v.near_boundary = true;
  }
  return v;
}

WindowResult entanglement_windows(double b) {
  if (!(b >= 0.0 && b <= 0.5)) {
    std::ostringstream os;
    os << "b = " << b << " outside [0, 1/2]";
    throw Error(ErrorCode::Domain, os.str());
  }
  if (b > 0.25) return AlwaysEntangled{};
  if (b == 0.0) return NeverEntangled{};
  return SzWindow{std::sqrt(1.0 - 4.0 * b), std::abs(2.0 * b - 1.0)};
}

SymmetricXState reconstruct_symmetric(double mean_sz, double b, double tol) {
  if (!(std::abs(mean_sz) <= 1.0 + tol) || !(b >= -tol && b <= 0.5 + tol)) {
    std::ostringstream os;
    os << "<S_z> = " << mean_sz << ", b = " << b << " outside the physical range";
    throw Error(ErrorCode::Domain, os.str());
  }
  b = std::clamp(b, 0.0, 0.5);
  double a = 0.5 * (1.0 - 2.0 * b + mean_sz);
  double e = 0.5 * (1.0 - 2.0 * b - mean_sz);
  if (a < -tol || e < -tol) {
    std::ostringstream os;
    os << "recovered populations a = " << a << ", e = " << e;
    throw Error(ErrorCode::InconsistentInput, os.str());
  }
  a = std::max(a, 0.0);
  e = std::max(e, 0.0);
  return {a, b, e};
}

CriterionVerdict classify_from_measurements(double mean_sz, double b, double tol) {
  return ns_criterion(reconstruct_symmetric(mean_sz, b, tol));
}

}  // namespace spinstar
