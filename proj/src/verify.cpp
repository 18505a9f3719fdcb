#include "spinstar/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spinstar::verify {

namespace {

std::array<double, 3> dirichlet3(std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::array<double, 3> x{expo(rng), expo(rng), expo(rng)};
  const double sum = x[0] + x[1] + x[2];
  for (double& v : x) v /= sum;
  return x;
}

}  // namespace

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void VerificationReport::add(std::string name, double deviation, double tolerance) {
  checks.push_back({std::move(name), deviation, tolerance, deviation < tolerance});
}

Eigen::VectorXcd closed_form_vector(const SpinStarParams& params, double t) {
  const HalfInteger j = params.bath_j();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(oracle::collective_dimension(j));
  for (const Branch& br : evolved_state(params, t)) {
    v(oracle::collective_index(j, br.central_m, br.bath_mj)) += br.amplitude;
  }
  return v;
}

Deviation closed_vs_collective(const SpinStarParams& params, std::span<const double> times,
                               const oracle::Propagator& collective, double perturbation) {
  const HalfInteger j = params.bath_j();
  const auto psi0 = oracle::collective_product_state(j, params.m_s, params.bath_mj());
  Deviation dev;
  for (double t : times) {
    const oracle::PureStateVector psi = collective.evolve(psi0, t);
    Eigen::VectorXcd closed = closed_form_vector(params, t);
    SymmetricXState rho = reduced_density(params, t);
    rho.a += perturbation;
    closed(oracle::collective_index(j, params.m_s, params.bath_mj())) += perturbation;

    dev.amplitudes = std::max(dev.amplitudes, (closed - psi.amplitudes()).cwiseAbs().maxCoeff());
    const Eigen::Matrix4cd ref = oracle::collective_reduce_to_pair(psi, j).entries();
    dev.reduced = std::max(dev.reduced, (oracle::pair_matrix(rho) - ref).cwiseAbs().maxCoeff());
  }
  return dev;
}

double collective_vs_full(const SpinStarParams& params, std::span<const double> times,
                          const oracle::Propagator& collective, const oracle::Propagator& full) {
  const HalfInteger j = params.bath_j();
  const auto psi0 = oracle::collective_product_state(j, params.m_s, params.bath_mj());
  const auto full0 = oracle::full_product_state(oracle::central_pair_state(1, params.m_s),
                                                oracle::dicke_state(params.n_bath, params.k));
  double worst = 0.0;
  for (double t : times) {
    const Eigen::Matrix4cd lhs =
        oracle::collective_reduce_to_pair(collective.evolve(psi0, t), j).entries();
    const Eigen::Matrix4cd rhs =
        oracle::partial_trace_to_pair(full.evolve(full0, t), params.n_bath).entries();
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

double normalization_defect(const SpinStarParams& params, std::span<const double> times) {
  double worst = 0.0;
  for (double t : times) {
    const AmplitudeSet amp = amplitudes(params, t);
    const double norm = std::norm(amp.A) + std::norm(amp.B) + std::norm(amp.C) +
                        std::norm(amp.D) + std::norm(amp.E);
    const SymmetricXState rho = reduced_density(params, t);
    worst = std::max({worst, std::abs(norm - 1.0), std::abs(rho.a + 2.0 * rho.b + rho.e - 1.0)});
  }
  return worst;
}

XState random_xstate(std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double pops[4];
  double sum = 0.0;
  for (double& p : pops) sum += (p = expo(rng));
  for (double& p : pops) p /= sum;
  const double mag = unit(rng) * std::sqrt(pops[1] * pops[2]);
  const double phase = 2.0 * std::numbers::pi * unit(rng);
  return XState{pops[0], pops[1], std::polar(mag, phase), pops[2], pops[3]};
}

SymmetricXState random_symmetric(std::mt19937_64& rng) {
  const auto x = dirichlet3(rng);
  return SymmetricXState{x[0], 0.5 * x[1], x[2]};
}

double random_concurrence_defect(int samples, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const XState s = random_xstate(rng);
    const double ref = oracle::wootters_concurrence(oracle::PairDensityMatrix(oracle::pair_matrix(s)));
    worst = std::max(worst, std::abs(concurrence_x(s) - ref));
  }
  return worst;
}

VerificationReport run_verification(const VerifyOptions& opts) {
  VerificationReport report;
  const std::vector<double> grid_alpha = uniform_grid(opts.t_max_alpha, opts.n_points);
  std::vector<double> times;
  times.reserve(grid_alpha.size());
  for (double x : grid_alpha) times.push_back(x / opts.alpha);

  SpinStarParams base{opts.n_bath, 0, 1, opts.alpha, opts.omega};
  validate_params(base);
  const HalfInteger j = base.bath_j();
  const oracle::Propagator collective(oracle::build_collective_hamiltonian(j, opts.omega, opts.alpha));

  Deviation closed;
  double norm = 0.0;
  for (int ms : {1, 0, -1}) {
    for (int k = 0; k <= opts.n_bath; ++k) {
      SpinStarParams p = base;
      p.m_s = ms;
      p.k = k;
      const Deviation d = closed_vs_collective(p, times, collective, opts.perturbation);
      closed.amplitudes = std::max(closed.amplitudes, d.amplitudes);
      closed.reduced = std::max(closed.reduced, d.reduced);
      norm = std::max(norm, normalization_defect(p, times));
    }
  }
  report.add("closed_form_vs_collective_amplitudes", closed.amplitudes, kOracleTol);
  report.add("closed_form_vs_collective_reduced", closed.reduced, kOracleTol);
  report.add("normalization", norm, kNormalizationTol);
  report.add("collective_eigen_residual", collective.relative_residual(), kOracleTol);

  if (opts.run_full && opts.n_bath <= oracle::kMaxFullBath) {
    const oracle::Propagator full(oracle::build_full_hamiltonian(opts.n_bath, opts.omega, opts.alpha));
    double worst = 0.0;
    for (int ms : {1, 0, -1}) {
      for (int k = 0; k <= opts.n_bath; ++k) {
        SpinStarParams p = base;
        p.m_s = ms;
        p.k = k;
        worst = std::max(worst, collective_vs_full(p, times, collective, full));
      }
    }
    report.add("collective_vs_full_reduced", worst, kOracleTol);
    report.add("full_eigen_residual", full.relative_residual(), kOracleTol);
  }

  double conc = random_concurrence_defect(opts.concurrence_samples, 20240601ULL);
  for (int ms : {1, 0, -1}) {
    for (int k = 0; k <= opts.n_bath; ++k) {
      SpinStarParams p = base;
      p.m_s = ms;
      p.k = k;
      for (double t : times) {
        const SymmetricXState rho = reduced_density(p, t);
        const double ref = oracle::wootters_concurrence(oracle::PairDensityMatrix(oracle::pair_matrix(rho)));
        conc = std::max(conc, std::abs(concurrence_x(rho.to_xstate()) - ref));
      }
    }
  }
  report.add("concurrence_formula_vs_wootters", conc, kConcurrenceTol);
  return report;
}

}  // namespace spinstar::verify
