#include "doctest.h"
#include "llhmm/error.hpp"
#include "llhmm/experiments.hpp"

#include <cmath>

using namespace llhmm;

TEST_CASE("slope fitting") {
  CHECK(fit_slope({{0.1, 0.01}, {0.01, 0.001}}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit_slope({{0.1, 1e-2}, {0.01, 1e-4}}) == doctest::Approx(2.0).epsilon(1e-12));
  std::vector<std::pair<double, double>> pts;
  for (double x : {0.5, 0.2, 0.1, 0.05, 0.01}) pts.emplace_back(x, 3.0 * std::pow(x, 1.5));
  CHECK(std::fabs(fit_slope(pts) - 1.5) <= 1e-12);
  try {
    fit_slope({{0.1, 0.0}, {0.01, 1e-3}});
    FAIL("expected NON_POSITIVE_DATA");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveData);
  }
  CHECK_THROWS_AS(fit_slope({{-0.1, 1.0}, {0.2, 1.0}}), Error);
  CHECK_THROWS_AS(fit_slope({{0.1, 1.0}}), Error);
}

TEST_CASE("error tables sort rows by descending parameter") {
  ErrorTable t;
  t.columns = {"e"};
  t.rows = {{0.01, {1e-4}}, {0.1, {1e-2}}, {0.03, {9e-4}}};
  t.finalize();
  CHECK(t.rows[0].param == 0.1);
  CHECK(t.rows[2].param == 0.01);
  CHECK(t.slopes.size() == 1);
  CHECK(t.column(0)[1] == 9e-4);
}

TEST_CASE("tail sweep errors are positive and decreasing") {
  TailOptions o;
  o.eps_list = {1e-1, 1e-2, 1e-3};
  o.dt = 1e-3;
  const auto t = exp_tail(o);
  for (std::size_t c = 0; c < 2; ++c) {
    const auto col = t.column(c);
    for (std::size_t i = 0; i < col.size(); ++i) {
      CHECK(col[i] > 0.0);
      if (i > 0) CHECK(col[i] < col[i - 1]);
    }
  }
  CHECK(t.slopes[0] == doctest::Approx(1.0).epsilon(0.15));
  CHECK(t.slopes[1] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("upscaling sweep respects the consistency bound") {
  UpscalingOptions o;
  o.eps_list = {1e-2, 5e-3};
  o.q_list = {0, 4};
  const auto t = exp_upscaling(o);
  for (const auto& r : t.rows) {
    const double tau = 5.3 * r.param;
    CHECK(r.errors[0] <= 10 * (tau + std::pow(r.param / tau, 2)));
    CHECK(r.errors[1] <= 10 * (tau + std::pow(r.param / tau, 6)));
    CHECK(r.errors[1] < r.errors[0]);
  }
  o.mode = UpscalingMode::Fixed;
  const auto f = exp_upscaling(o);
  CHECK(f.name == "upscaling_fixed");
  for (const auto& r : f.rows) CHECK(r.errors[1] <= 10 * (0.1 + std::pow(r.param / 0.1, 6)));
}

TEST_CASE("full solution tables align on the macro grid") {
  FullSolutionOptions o;
  o.T = 0.6283185307179586;
  o.steps = 2;
  const auto s = exp_full_solution(o);
  CHECK(s.times.size() == 3);
  CHECK(s.hmm.size() == 3);
  CHECK(s.dns.size() == 3);
  CHECK(s.effective.size() == 3);
  CHECK(s.dns[0] == o.m0);
  CHECK(s.max_hmm_vs_effective() <= 0.05);
  CHECK(s.hmm_evals > 0);
}

TEST_CASE("amplitude drift is present and small") {
  AmplitudeOptions o;
  o.eps_list = {1e-2, 5e-3};
  o.trace_T = 0.6283185307179586;
  o.trace_steps = 2;
  const auto a = exp_amplitude(o);
  CHECK(a.trace_norms.front() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(a.trace_norms.back() - 1.0) > 1e-6);
  for (const auto& r : a.sweep.rows) {
    const double tau = 5.3 * r.param;
    CHECK(r.errors[0] <= 10 * (tau + std::pow(r.param / tau, 9)));
  }
}

TEST_CASE("sweeps are deterministic across thread counts") {
  HmmErrorOptions o;
  o.eps_list = {1e-2, 5e-3};
  const auto a = exp_hmm_error(o);
  o.threads = 2;
  const auto b = exp_hmm_error(o);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].errors == b.rows[i].errors);
}

TEST_CASE("uniform chain: multiscale and direct agree per cell") {
  ChainConfig c = chain_experiment_config();
  c.initial = [](double) { return Vec3{0.6, 0.0, 0.8}; };
  c.T = 0.3;
  const auto cmp = exp_chain(c, {0.0, 0.3}, c.eps / 20);
  CHECK(cmp.max_difference(0) <= 1e-12);
  // every cell carries the same value, and the averaged direct solution tracks it
  for (const auto& M : cmp.hmm[1]) CHECK(distance(M, cmp.hmm[1][0]) <= 1e-12);
  CHECK(cmp.max_difference(1) <= 1e-2);
}

TEST_CASE("aligned direct step") {
  CHECK(aligned_dns_dt(0.1, 0.01) == doctest::Approx(5e-4).epsilon(1e-12));
  const double dt = aligned_dns_dt(0.3141592653589793, 0.01);
  CHECK(dt <= 5e-4);
  CHECK(std::fabs(0.3141592653589793 / dt - std::round(0.3141592653589793 / dt)) <= 1e-9);
}
