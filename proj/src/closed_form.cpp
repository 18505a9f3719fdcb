#include "spinstar/closed_form.hpp"

#include <cmath>
#include <sstream>

namespace spinstar {

namespace {

constexpr std::complex<double> kMinusI{0.0, -1.0};

// J(J+1) - m1 m2 evaluated exactly on doubled integers, then clamped.
double ladder_root(HalfInteger j, HalfInteger m1, HalfInteger m2) {
  const long long tj = j.twice();
  const long long radicand4 = tj * (tj + 2) - static_cast<long long>(m1.twice()) * m2.twice();
  return radicand4 > 0 ? 0.5 * std::sqrt(static_cast<double>(radicand4)) : 0.0;
}

}  // namespace

void validate_params(const SpinStarParams& params) {
  std::ostringstream os;
  if (params.n_bath < 1) {
    os << "n_bath = " << params.n_bath << " must be positive";
  } else if (params.k < 0 || params.k > params.n_bath) {
    os << "k = " << params.k << " outside [0, " << params.n_bath << "]";
  } else if (params.m_s < -1 || params.m_s > 1) {
    os << "m_s = " << params.m_s << " not in {-1, 0, +1}";
  } else if (!std::isfinite(params.alpha) || !std::isfinite(params.omega)) {
    os << "couplings must be finite";
  } else {
    return;
  }
  throw Error(ErrorCode::Domain, os.str());
}

LadderCoeffs ladder_coeffs(HalfInteger j, HalfInteger m_j) {
  if (j.twice() < 0 || std::abs(m_j.twice()) > j.twice() ||
      (j.twice() - m_j.twice()) % 2 != 0) {
    std::ostringstream os;
    os << "M_J = " << m_j.value() << " is not a projection of J = " << j.value();
    throw Error(ErrorCode::Domain, os.str());
  }
  LadderCoeffs c;
  for (int s : {-1, 1}) {
    const auto idx = static_cast<std::size_t>(s + 1);
    c.p_values[idx] = ladder_root(j, m_j, m_j + s);
    c.r_values[idx] = ladder_root(j, m_j + s, m_j + 2 * s);
  }
  return c;
}

AmplitudeSet amplitudes(const SpinStarParams& params, double t) {
  validate_params(params);
  const LadderCoeffs coeffs = ladder_coeffs(params.bath_j(), params.bath_mj());

  AmplitudeSet out;
  const double total_m = params.m_s + params.bath_mj().value();
  out.global_phase = std::exp(kMinusI * (params.omega * total_m * t));

  if (params.m_s != 0) {
    const double p = coeffs.p(params.m_s);
    const double r = coeffs.r(params.m_s);
    const double sum = p * p + r * r;
    if (sum == 0.0) return out;  // annihilated by the interaction
    const double phase = params.alpha * std::sqrt(2.0 * sum) * t;
    const double cs = std::cos(phase);
    out.A = (p * p * cs + r * r) / sum;
    out.B = p * r * (cs - 1.0) / sum;
    out.C = p * std::sin(phase) / std::sqrt(sum);
  } else {
    const double lower = coeffs.p(-1);
    const double upper = coeffs.p(1);
    const double sum = lower * lower + upper * upper;
    if (sum == 0.0) return out;
    // |1,0> couples to both |1,+1> and |1,-1>; the three-level star rotates
    // at sqrt(2 (p_-^2 + p_+^2)) alpha.
    const double phase = params.alpha * std::sqrt(2.0 * sum) * t;
    const double sn = std::sin(phase) / std::sqrt(sum);
    out.A = std::cos(phase);
    out.D = lower * sn;
    out.E = upper * sn;
  }
  return out;
}

std::vector<Branch> evolved_state(const SpinStarParams& params, double t) {
  const AmplitudeSet amp = amplitudes(params, t);
  const HalfInteger mj = params.bath_mj();
  const int ms = params.m_s;

  std::vector<Branch> candidates;
  if (ms != 0) {
    candidates = {
        {ms, mj, amp.A},
        {-ms, mj + 2 * ms, amp.B},
        {0, mj + ms, kMinusI * amp.C},
    };
  } else {
    candidates = {
        {0, mj, amp.A},
        {1, mj - 1, kMinusI * amp.D},
        {-1, mj + 1, kMinusI * amp.E},
    };
  }

  std::vector<Branch> out;
  const int tj = params.bath_j().twice();
  for (auto& br : candidates) {
    // edge branches carry a clamped (zero) ladder coefficient
    if (br.amplitude == 0.0 || std::abs(br.bath_mj.twice()) > tj) continue;
    br.amplitude *= amp.global_phase;
    out.push_back(br);
  }
  return out;
}

SymmetricXState reduced_density(const SpinStarParams& params, double t) {
  const AmplitudeSet amp = amplitudes(params, t);
  switch (params.m_s) {
    case 1: return {std::norm(amp.A), 0.5 * std::norm(amp.C), std::norm(amp.B)};
    case -1: return {std::norm(amp.B), 0.5 * std::norm(amp.C), std::norm(amp.A)};
    default: return {std::norm(amp.D), 0.5 * std::norm(amp.A), std::norm(amp.E)};
  }
}

XState singlet_reduced() { return XState{0.0, 0.5, {-0.5, 0.0}, 0.5, 0.0}; }

TimeSeriesRecord evaluate_record(const SpinStarParams& params, double t) {
  const SymmetricXState rho = reduced_density(params, t);
  const SzMoments mom = sz_moments(rho);
  const CriterionVerdict verdict = ns_criterion(rho);

  TimeSeriesRecord rec;
  rec.t = t;
  rec.a = rho.a;
  rec.b = rho.b;
  rec.e = rho.e;
  rec.mean_sz = mom.mean;
  rec.variance_sz = mom.variance;
  rec.two_b = 2.0 * rho.b;
  rec.concurrence = verdict.concurrence_value;
  rec.entangled = verdict.entangled;
  return rec;
}

std::vector<TimeSeriesRecord> time_series(const SpinStarParams& params,
                                          std::span<const double> t_grid) {
  if (t_grid.empty()) throw Error(ErrorCode::EmptyGrid, "time grid has no points");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw Error(ErrorCode::Domain, "time grid must be non-negative and strictly increasing");
    }
  }
  validate_params(params);

  std::vector<TimeSeriesRecord> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(evaluate_record(params, t));
  return out;
}

std::vector<double> uniform_grid(double t_max, int n_points) {
  if (n_points < 1 || !(t_max > 0.0)) {
    throw Error(ErrorCode::Domain, "grid needs n_points >= 1 and t_max > 0");
  }
  std::vector<double> grid(static_cast<std::size_t>(n_points), 0.0);
  if (n_points == 1) return grid;
  const double step = t_max / (n_points - 1);
  for (int i = 0; i < n_points; ++i) grid[static_cast<std::size_t>(i)] = step * i;
  grid.back() = t_max;
  return grid;
}

}  // namespace spinstar
