#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "spinstar/oracle.hpp"
#include "spinstar/verify.hpp"
#include "spinstar/xstate.hpp"

using namespace spinstar;

namespace {

double wootters(const XState& s) {
  return oracle::wootters_concurrence(oracle::PairDensityMatrix(oracle::pair_matrix(s)));
}

// Collective S_z on the pair basis {uu, ud, du, dd}.
Eigen::Matrix4cd pair_sz() {
  Eigen::Matrix4cd sz = Eigen::Matrix4cd::Zero();
  sz(0, 0) = 1.0;
  sz(3, 3) = -1.0;
  return sz;
}

ErrorCode error_of(const XState& s) {
  auto err = check_xstate(s);
  REQUIRE(err.has_value());
  return err->code();
}

}  // namespace

TEST_CASE("validate_xstate accepts physical states") {
  CHECK_FALSE(check_xstate({0.25, 0.25, {0.0, 0.0}, 0.25, 0.25}).has_value());

  const XState s{0.1, 0.4, {0.3, 0.0}, 0.4, 0.1};
  CHECK_FALSE(check_xstate(s).has_value());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(oracle::pair_matrix(s));
  CHECK(es.eigenvalues().minCoeff() >= 0.0);
}

TEST_CASE("validate_xstate names the failed invariant") {
  CHECK(error_of({0.25, 0.25, {0.3, 0.0}, 0.25, 0.25}) == ErrorCode::LandauViolation);
  CHECK(error_of({-0.1, 0.5, {0.0, 0.0}, 0.3, 0.3}) == ErrorCode::NegativePopulation);
  CHECK(error_of({0.3, 0.3, {0.0, 0.0}, 0.3, 0.3}) == ErrorCode::TraceNotOne);
  CHECK_THROWS_AS(validate_xstate({0.25, 0.25, {0.0, 0.3}, 0.25, 0.25}), Error);

  // within tolerance
  CHECK_FALSE(check_xstate({0.25 + 1e-11, 0.25, {0.25 + 1e-11, 0.0}, 0.25, 0.25}).has_value());
  CHECK(check_xstate({0.25 + 1e-6, 0.25, {0.0, 0.0}, 0.25, 0.25}, 1e-9).has_value());
  CHECK_FALSE(check_xstate({0.25 + 1e-6, 0.25, {0.0, 0.0}, 0.25, 0.25}, 1e-5).has_value());
}

TEST_CASE("concurrence_x") {
  CHECK(concurrence_x({0.0, 0.5, {0.5, 0.0}, 0.5, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(concurrence_x({0.25, 0.25, {0.0, 0.0}, 0.25, 0.25}) == 0.0);

  const XState s{0.1, 0.4, {0.3, 0.0}, 0.4, 0.1};
  const double ref = wootters(s);
  CHECK(std::abs(ref - 0.4) < 1e-12);
  CHECK(std::abs(concurrence_x(s) - ref) < 1e-12);

  // only |c| enters
  CHECK(concurrence_x({0.1, 0.4, std::polar(0.3, 2.0), 0.4, 0.1}) ==
        doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("sz_moments match traces with explicit S_z") {
  auto m = sz_moments(XState{0.1, 0.4, {0.0, 0.0}, 0.4, 0.1});
  CHECK(m.mean == 0.0);
  CHECK(m.second_moment == doctest::Approx(0.2));
  CHECK(m.variance == doctest::Approx(0.2));

  m = sz_moments(XState{1.0, 0.0, {0.0, 0.0}, 0.0, 0.0});
  CHECK(m.mean == 1.0);
  CHECK(m.variance == 0.0);

  const XState s{0.3, 0.3, {0.1, 0.0}, 0.3, 0.1};
  const Eigen::Matrix4cd rho = oracle::pair_matrix(s);
  const Eigen::Matrix4cd sz = pair_sz();
  const double mean = (rho * sz).trace().real();
  const double second = (rho * sz * sz).trace().real();
  m = sz_moments(s);
  CHECK(m.mean == doctest::Approx(mean).epsilon(1e-15));
  CHECK(m.second_moment == doctest::Approx(second).epsilon(1e-15));
  CHECK(m.variance == doctest::Approx(second - mean * mean).epsilon(1e-15));
  CHECK(m.variance == doctest::Approx(0.36).epsilon(1e-15));
}

TEST_CASE("necessary_variance_bound") {
  auto v = necessary_variance_bound({0.0, 0.5, {0.5, 0.0}, 0.5, 0.0});
  CHECK(v.bound == doctest::Approx(1.0));
  CHECK(v.passes);

  v = necessary_variance_bound({1.0, 0.0, {0.0, 0.0}, 0.0, 0.0});
  CHECK(v.bound == 0.0);
  CHECK_FALSE(v.passes);

  const XState s{0.1, 0.4, {0.3, 0.0}, 0.4, 0.1};
  v = necessary_variance_bound(s);
  CHECK(v.bound == doctest::Approx(0.8));
  CHECK(sz_moments(s).variance == doctest::Approx(0.2));
  CHECK(v.passes);
  CHECK(wootters(s) > 0.0);
}

TEST_CASE("ns_criterion examples") {
  for (double a : {0.0, 0.1, 0.25, 0.4}) {
    const auto v = ns_criterion({a, 0.3, 0.4 - a});
    CHECK(v.entangled);
    CHECK(v.rule_applied == CriterionRule::BGreaterThanQuarter);
    CHECK(v.concurrence_value > 0.0);
  }

  auto v = ns_criterion({0.3, 0.2, 0.3});
  CHECK_FALSE(v.entangled);
  CHECK(v.rule_applied == CriterionRule::WindowTest);
  CHECK(v.concurrence_value == 0.0);

  const SymmetricXState s{0.55, 0.2, 0.05};
  v = ns_criterion(s);
  CHECK(v.entangled);
  CHECK(v.rule_applied == CriterionRule::WindowTest);
  const double expected = 2.0 * (0.2 - std::sqrt(0.55 * 0.05));
  CHECK(v.concurrence_value == doctest::Approx(expected).epsilon(1e-14));
  CHECK(v.concurrence_value == doctest::Approx(0.0683375).epsilon(1e-6));
  CHECK(std::abs(v.concurrence_value - wootters(s.to_xstate())) < 1e-12);

  CHECK_THROWS_AS(ns_criterion({0.5, 0.3, 0.5}), Error);
}

TEST_CASE("ns_criterion boundary is not entangled") {
  // sqrt(a) + sqrt(e) = 1 with a = 0.25, e = 0.25 -> b = 0.25, mean 0:
  // variance 0.5 equals 2b exactly
  auto v = ns_criterion({0.25, 0.25, 0.25});
  CHECK_FALSE(v.entangled);
  CHECK(v.rule_applied == CriterionRule::BoundaryNotEntangled);
  CHECK(v.near_boundary);
  CHECK(v.concurrence_value == 0.0);

  // pure |uu>: b = 0 and <S_z>^2 = 1 = 1 - 4b
  v = ns_criterion({1.0, 0.0, 0.0});
  CHECK_FALSE(v.entangled);
  CHECK(v.near_boundary);
}

TEST_CASE("entanglement_windows") {
  CHECK(std::holds_alternative<AlwaysEntangled>(entanglement_windows(0.3)));
  CHECK(std::holds_alternative<NeverEntangled>(entanglement_windows(0.0)));
  CHECK_THROWS_AS(entanglement_windows(0.6), Error);
  CHECK_THROWS_AS(entanglement_windows(-0.1), Error);

  const auto w = std::get<SzWindow>(entanglement_windows(0.2));
  CHECK(w.inner == doctest::Approx(std::sqrt(0.2)));
  CHECK(w.outer == doctest::Approx(0.6));
  CHECK_FALSE(w.empty());
  CHECK(w.contains(0.6));
  CHECK(w.contains(-0.6));
  CHECK_FALSE(w.contains(w.inner));
  CHECK_FALSE(w.contains(-w.inner));
  CHECK_FALSE(w.contains(0.0));

  // sweep <S_z> over the admissible range; membership must match the
  // concurrence of the reconstructed state
  const double b = 0.2;
  const int steps = 20000;
  int agree = 0, tested = 0;
  for (int i = 0; i <= steps; ++i) {
    const double mean = -0.6 + 1.2 * i / steps;
    const double a = std::max(0.0, 0.5 * (1.0 - 2.0 * b + mean));
    const double e = std::max(0.0, 0.5 * (1.0 - 2.0 * b - mean));
    if (std::abs(std::abs(mean) - w.inner) < 1e-9) continue;
    ++tested;
    const double conc = wootters(SymmetricXState{a, b, e}.to_xstate());
    agree += (w.contains(mean) == (conc > 1e-12)) ? 1 : 0;
  }
  CHECK(agree == tested);
}

TEST_CASE("classify_from_measurements") {
  auto v = classify_from_measurements(0.5, 0.2);
  CHECK(v.entangled);
  CHECK(v.concurrence_value == doctest::Approx(ns_criterion({0.55, 0.2, 0.05}).concurrence_value));

  CHECK_FALSE(classify_from_measurements(0.0, 0.2).entangled);

  try {
    classify_from_measurements(0.9, 0.2);
    FAIL("expected INCONSISTENT_INPUT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentInput);
  }

  // tiny negative recovered population is clamped
  const auto s = reconstruct_symmetric(0.6 + 1e-12, 0.2);
  CHECK(s.e == 0.0);
  CHECK(s.a == doctest::Approx(0.6));
}

TEST_CASE("property: ns_criterion agrees with concurrence on random symmetric states") {
  std::mt19937_64 rng(7);
  int disagreements = 0;
  int checked = 0;
  for (int i = 0; i < 20000; ++i) {
    const SymmetricXState s = verify::random_symmetric(rng);
    const SzMoments m = sz_moments(s);
    const auto v = ns_criterion(s);
    CHECK(v.entangled == (v.concurrence_value > 0.0));
    if (std::abs(m.variance - 2.0 * s.b) <= 1e-9) continue;
    ++checked;
    if (v.entangled != (concurrence_x(s.to_xstate()) > 0.0)) ++disagreements;

    // the four equivalent forms
    const bool by_variance = m.variance < 2.0 * s.b;
    const bool by_populations = 2.0 * (s.a + s.e) - (s.a - s.e) * (s.a - s.e) < 1.0;
    const bool by_roots = std::sqrt(s.a) + std::sqrt(s.e) < 1.0;
    const bool by_concurrence = concurrence_x(s.to_xstate()) > 0.0;
    CHECK(by_variance == by_populations);
    CHECK(by_variance == by_roots);
    CHECK(by_variance == by_concurrence);

    // window membership matches when b <= 1/4
    if (s.b <= 0.25 && s.b > 0.0) {
      const auto w = std::get<SzWindow>(entanglement_windows(s.b));
      CHECK(w.contains(m.mean) == v.entangled);
    }
    // measurement route reproduces the verdict
    CHECK(classify_from_measurements(m.mean, s.b).entangled == v.entangled);
  }
  CHECK(checked > 19000);
  CHECK(disagreements == 0);
}

TEST_CASE("property: the variance bound never rejects an entangled X state") {
  std::mt19937_64 rng(11);
  int entangled = 0;
  for (int i = 0; i < 100000; ++i) {
    const XState s = verify::random_xstate(rng);
    REQUIRE_FALSE(check_xstate(s).has_value());
    if (concurrence_x(s) > 0.0) {
      ++entangled;
      if (!necessary_variance_bound(s).passes) FAIL("necessity violated");
    }
  }
  CHECK(entangled > 1000);
}

TEST_CASE("property: concurrence_x equals the Wootters construction") {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const XState s = verify::random_xstate(rng);
    worst = std::max(worst, std::abs(concurrence_x(s) - wootters(s)));
  }
  CHECK(worst < 1e-10);
}
