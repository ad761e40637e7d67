#include "doctest.h"
#include "llhmm/error.hpp"
#include "llhmm/kernel.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace llhmm;

namespace {

// Composite Simpson rule on [-1/2, 1/2]; independent of the library's
// Gauss-Legendre moments.
double simpson_moment(const KernelSpec& k, int r, int panels = 20000) {
  const double h = 1.0 / panels;
  double s = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double t = -0.5 + i * h;
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * eval(k, t) * std::pow(t, r);
  }
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("constant and parabolic kernels") {
  const KernelSpec c = build_kernel(1, -1);
  CHECK(eval(c, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eval(c, 0.49) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eval_scaled(c, 0.1, 0.0) == doctest::Approx(10.0).epsilon(1e-13));
  const KernelSpec p = build_kernel(1, 0);
  for (double t : {0.0, 0.1, 0.3, 0.45}) {
    CHECK(eval(p, t) == doctest::Approx(1.5 * (1 - 4 * t * t)).epsilon(1e-13));
  }
}

TEST_CASE("support and symmetry") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (auto [p, q] : {std::pair{1, -1}, {1, 0}, {1, 7}, {5, 4}, {3, 2}}) {
    const KernelSpec k = build_kernel(p, q);
    CHECK(eval(k, 0.6) == 0.0);
    CHECK(eval(k, -0.6) == 0.0);
    CHECK(eval_scaled(k, 0.1, 0.06) == 0.0);
    for (int i = 0; i < 200; ++i) {
      const double t = u(rng);
      CHECK(eval(k, t) == eval(k, -t));
    }
  }
}

TEST_CASE("moments against an independent Simpson oracle") {
  for (auto [p, q] : {std::pair{1, -1}, {1, 0}, {1, 7}, {5, 4}, {3, 1}, {7, 2}}) {
    CAPTURE(p);
    CAPTURE(q);
    const KernelSpec k = build_kernel(p, q);
    CHECK(std::fabs(moment(k, 0) - 1.0) <= 1e-10);
    CHECK(std::fabs(simpson_moment(k, 0) - 1.0) <= 1e-10);
    CHECK(std::fabs(moment(k, 1)) <= 1e-12);
    for (int r = 1; r <= p; ++r) {
      CHECK(std::fabs(moment(k, r)) <= 1e-10);
      CHECK(std::fabs(simpson_moment(k, r)) <= 1e-10);
    }
  }
  // An odd p kernel built for p = 5 carries a nonzero sixth moment.
  CHECK(std::fabs(moment(build_kernel(5, 4), 6)) > 1e-6);
}

TEST_CASE("scaled kernel integrates to one") {
  for (auto [p, q] : {std::pair{1, -1}, {1, 7}, {5, 4}}) {
    const KernelSpec k = build_kernel(p, q);
    const double tau = 0.1;
    const int n = 20000;
    const double h = tau / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * eval_scaled(k, tau, -tau / 2 + i * h);
    }
    CHECK(std::fabs(s * h / 3.0 - 1.0) <= 1e-10);
    const ScaledKernel sk(k, tau);
    CHECK(sk(0.01) == eval_scaled(k, tau, 0.01));
  }
}

TEST_CASE("window factor vanishes to order q at the support end") {
  for (int q : {-1, 0, 2, 4, 7}) {
    CAPTURE(q);
    const KernelSpec k = build_kernel(5, q);
    // K(1/2 - s) ~ c s^(q+1) with c != 0
    const auto scaled = [&](double s) { return eval(k, 0.5 - s) / std::pow(s, q + 1); };
    const double a = scaled(1e-3);
    const double b = scaled(5e-4);
    CHECK(std::fabs(a) > 0.0);
    CHECK(std::fabs(b / a - 1.0) <= 0.05);
    CHECK(std::fabs(scaled(1e-4) / a - 1.0) <= 0.05);
    if (q >= 0) {
      CHECK(eval(k, 0.5) == 0.0);
      CHECK(eval(k, -0.5) == 0.0);
    }
  }
}

TEST_CASE("invalid kernel parameters") {
  CHECK_THROWS_AS(build_kernel(0, 1), Error);
  CHECK_THROWS_AS(build_kernel(1, -2), Error);
  CHECK_THROWS_AS(eval_scaled(build_kernel(1, 0), 0.0, 0.0), Error);
  CHECK_THROWS_AS(eval_scaled(build_kernel(1, 0), -1.0, 0.0), Error);
}

TEST_CASE("window weights and grid checks") {
  const KernelSpec k = build_kernel(1, 7);
  CHECK(half_window_steps(0.1, 0.001) == 50);
  CHECK_THROWS_AS(half_window_steps(0.1, 0.003), Error);
  const auto w = window_weights(k, 0.1, 0.001);
  REQUIRE(w.size() == 101);
  double s = 0.0;
  for (double v : w) s += v;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(w.front() == 0.0);
  CHECK(w[30] == w[70]);
}

TEST_CASE("weighted averages") {
  const double tau = 0.1;
  const KernelSpec k4 = build_kernel(1, 4);
  const KernelSpec k0 = build_kernel(1, -1);
  CHECK(weighted_average(k4, tau, [](double) { return 2.5; }, 0.3, 1e-4) ==
        doctest::Approx(2.5).epsilon(1e-12));
  const double eps = 1e-2;
  const auto f = [eps](double s) { return std::cos(2 * std::numbers::pi * s / eps); };
  const double a4 = std::fabs(weighted_average(k4, tau, f, 0.0, eps / 100));
  CHECK(a4 <= 10 * std::pow(eps / tau, 6));
  // off-integer ratio so the constant kernel error does not vanish by accident
  const double eps2 = tau / 100.25;
  const auto g = [eps2](double s) { return std::cos(2 * std::numbers::pi * s / eps2); };
  const double a0 = std::fabs(weighted_average(k0, tau, g, 0.0, tau / 2 / 5000));
  const double a4b = std::fabs(weighted_average(k4, tau, g, 0.0, tau / 2 / 5000));
  CHECK(a0 <= 10 * eps2 / tau);
  CHECK(a0 > a4b);
}

TEST_CASE("constant kernel average vanishes for an integer number of periods") {
  const double tau = 0.1;
  const double eps = tau / 8;
  const auto f = [eps](double s) { return std::cos(2 * std::numbers::pi * s / eps); };
  CHECK(std::fabs(weighted_average(build_kernel(1, -1), tau, f, 0.0, eps / 100)) <= 1e-12);
}
