#include "doctest.h"
#include "llhmm/error.hpp"
#include "llhmm/hmm_chain.hpp"
#include "llhmm/hmm_single.hpp"
#include "llhmm/reference.hpp"

#include <cmath>
#include <numbers>

using namespace llhmm;

namespace {
bool close(const Vec3& a, const Vec3& b, double tol) { return max_abs(a - b) <= tol; }

// Small periodic chain: 4 cells of r + ell = 4 spins.
ChainConfig small_chain() {
  ChainConfig c;
  c.N = 16;
  c.L = 4;
  c.r = 2;
  c.ell = 2;
  c.dx = 1.0 / 16;
  c.eps = 0.01;
  c.tau = 0.05;
  c.macro_dt = 0.1;
  c.micro_dt = 5e-4;
  c.T = 0.3;
  c.initial = [](double x) {
    return Vec3{std::sin(2 * std::numbers::pi * x), std::cos(2 * std::numbers::pi * x), 0.5} /
           std::sqrt(1.25);
  };
  return c;
}
}  // namespace

TEST_CASE("exchange field") {
  ChainConfig c = small_chain();
  c.field = make_field(NamedField::Constant, {0, 0, 0});
  c.J = 1.5;
  const Vec3 u = Vec3{1, 2, 2} / 3.0;
  const ChainState uniform(16, u);
  CHECK(close(exchange_field(uniform, 0, 0.0, c), 3.0 * u, 1e-15));
  CHECK(close(exchange_field(uniform, 15, 0.0, c), 3.0 * u, 1e-15));
  ChainState alt(16);
  for (long i = 0; i < 16; ++i) alt[i] = (i % 2 ? -1.0 : 1.0) * u;
  for (long i = 0; i < 16; ++i) CHECK(close(exchange_field(alt, i, 0.0, c), -3.0 * alt[i], 1e-15));
  c.J = 0.0;
  c.field = make_field(NamedField::Circular);
  CHECK(close(exchange_field(alt, 3, 0.0, c), {0, 1, 1}, 1e-15));
}

TEST_CASE("normalized quadratic interpolation") {
  const ChainConfig c = small_chain();
  const Vec3 u = Vec3{1, 2, 2} / 3.0;
  for (double x : {0.25, 0.2, 0.3, 0.37}) CHECK(close(interpolate_macro(u, u, u, 1, x, c), u, 1e-15));
  const Vec3 a{0.1, 0.2, 0.9}, b{0.3, 0.1, 0.5}, d{-0.2, 0.4, 0.6};
  CHECK(close(interpolate_macro(a, b, d, 2, 0.5, c), b / norm(b), 1e-15));
  const Vec3 w{0.3, -0.4, 1.2};
  for (double x : {0.15, 0.25, 0.35}) {
    const Vec3 v = interpolate_macro(0.9 * w, w, 1.1 * w, 1, x, c);
    CHECK(std::fabs(norm(v) - 1.0) <= 1e-15);
    CHECK(close(v, w / norm(w), 1e-15));
  }
  // periodic unwrapping: cell 0 seen from the right end of the chain
  CHECK(close(interpolate_macro(a, b, d, 0, 0.98, c), interpolate_macro(a, b, d, 0, -0.02, c), 1e-14));
  try {
    interpolate_macro({1, 0, 0}, {0, 0, 0}, {-1, 0, 0}, 1, 0.25, c);
    FAIL("expected DEGENERATE_INTERPOLANT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateInterpolant);
  }
}

TEST_CASE("spatial weights and spatial averages") {
  ChainConfig c = small_chain();
  c.N = 100;
  c.L = 10;
  c.r = 5;
  c.ell = 5;
  c.dx = 0.01;
  const auto w = spatial_weights(c);
  double s = 0.0;
  for (double v : w) s += v;
  CHECK(std::fabs(s - 1.0) <= 1e-10);
  CHECK(w.front() == 0.0);
  CHECK(w[3] == w[7]);

  const Vec3 u{0.6, 0, 0.8};
  CHECK(close(macro_average(ChainState(100, u), 3, c), u, 1e-10));
  // linear in space: odd terms cancel around the cell centre
  ChainState lin(100);
  for (long i = 0; i < 100; ++i) lin[i] = Vec3{1.0 + 0.3 * (i - 40) * c.dx, 0, 0};
  CHECK(std::fabs(macro_average(lin, 4, c).x - 1.0) <= 1e-12);
}

TEST_CASE("space-time average of sampled data") {
  ChainConfig c = small_chain();
  ChainTrajectory tr;
  const double h = 5e-4;
  const ChainState s0 = initial_chain(c);
  for (int k = 0; k <= 200; ++k) {
    tr.times.push_back(k * h);
    tr.states.push_back(s0);
  }
  double wsum = 0.0;
  for (double w : window_weights(c.kernel_time, c.tau, h)) wsum += w;
  CHECK(std::fabs(wsum - 1.0) <= 1e-6);
  for (long I = 0; I < c.L; ++I) {
    CHECK(close(macro_average(tr, I, 0.05, c), wsum * macro_average(s0, I, c), 1e-13));
  }
  CHECK_THROWS_AS(macro_average(tr, 0, 0.01, c), Error);
  try {
    macro_average(tr, 0, 0.09, c);
    FAIL("expected WINDOW_OUT_OF_RANGE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowOutOfRange);
  }
}

TEST_CASE("micro patch: aligned state, frozen ends, norm conservation") {
  ChainConfig c = small_chain();
  c.field = make_field(NamedField::Constant, {0, 0, 2});
  const MacroChainState up(4, Vec3{0, 0, 1});
  const auto tr = chain_micro_solve(1, 0.2, up, c);
  REQUIRE(tr.size() == 101);
  for (const auto& s : tr.states) {
    for (const auto& m : s) CHECK(m == Vec3{0, 0, 1});
  }
  CHECK(max_abs(chain_upscale(tr, 1, 0.2, c)) <= 1e-12);

  c.field = make_field(NamedField::ChainPulse);
  const MacroChainState M{{1, 0, 0.2}, {0.5, 0.5, 0.5}, {0, 1, 0.3}, {-0.3, 0.2, 0.9}};
  const auto t2 = chain_micro_solve(2, 0.4, M, c);
  const auto& first = t2.states.front();
  const auto& start = t2.states[50];
  for (const auto& s : t2.states) {
    CHECK(s.front() == start.front());
    CHECK(s.back() == start.back());
    for (std::size_t j = 1; j + 1 < s.size(); ++j) {
      CHECK(std::fabs(norm(s[j]) - 1.0) <= 1e-10);
    }
  }
  CHECK(first.size() == 5);
  CHECK(close(start[2], M[2] / norm(M[2]), 1e-15));
}

TEST_CASE("decoupled patch reproduces single-spin micro problems") {
  ChainConfig c = small_chain();
  c.J = 0.0;
  c.field = make_field(NamedField::Circular);
  const MacroChainState M{{1, 0, 0.2}, {0.5, 0.5, 0.5}, {0, 1, 0.3}, {-0.3, 0.2, 0.9}};
  const auto tr = chain_micro_solve(1, 0.17, M, c);
  HmmConfig h;
  h.eps = c.eps;
  h.tau = c.tau;
  h.micro_dt = c.micro_dt;
  h.field = c.field;
  for (std::size_t j = 1; j + 1 < tr.states[0].size(); ++j) {
    const auto single = micro_solve(0.17, tr.states[50][j], h);
    for (std::size_t i = 0; i < single.size(); ++i) {
      CHECK(close(tr.states[i][j], single.states[i], 1e-12));
    }
  }
  const MacroChainState same(4, M[1]);
  const auto tu = chain_micro_solve(2, 0.17, same, c);
  h.normalize_micro_init = true;
  h.kernel = c.kernel_time;
  CHECK(close(chain_upscale(tu, 2, 0.17, c), hmm_flux(0.17, M[1], h), 1e-10));
}

TEST_CASE("uniform chains: constant macro states and identical cells") {
  ChainConfig c = small_chain();
  c.field = make_field(NamedField::Constant, {0, 0, 1});
  c.initial = [](double) { return Vec3{0, 0, 1}; };
  const auto r = chain_run(c);
  for (const auto& s : r.states) {
    for (const auto& M : s) CHECK(close(M, {0, 0, 1}, 1e-10));
  }

  c.field = make_field(NamedField::ChainPulse);
  c.initial = [](double) { return Vec3{0.6, 0, 0.8}; };
  const auto u = chain_run(c);
  for (const auto& s : u.states) {
    for (const auto& M : s) CHECK(close(M, s[0], 1e-12));
  }
}

TEST_CASE("flux is invariant under index rotation") {
  ChainConfig c = small_chain();
  c.field = make_field(NamedField::ChainPulse);
  const MacroChainState M{{1, 0, 0.2}, {0.5, 0.5, 0.5}, {0, 1, 0.3}, {-0.3, 0.2, 0.9}};
  MacroChainState R{M[3], M[0], M[1], M[2]};
  const auto F = chain_flux(0.3, M, c);
  const auto G = chain_flux(0.3, R, c);
  for (long I = 0; I < 4; ++I) CHECK(close(G[(I + 1) % 4], F[I], 1e-15));
}

TEST_CASE("rotating the initial chain by one cell rotates the solution") {
  ChainConfig c = small_chain();
  c.field = make_field(NamedField::ChainPulse);
  c.gamma = 1.0;
  const auto base = chain_run(c);
  ChainConfig s = c;
  const double shift = c.macro_spacing();
  s.initial = [init = c.initial, shift](double x) { return init(x - shift); };
  const auto moved = chain_run(s);
  for (std::size_t n = 0; n < base.states.size(); ++n) {
    for (long I = 0; I < c.L; ++I) {
      CHECK(close(moved.states[n][(I + 1) % c.L], base.states[n][I], 1e-9));
    }
  }
}

TEST_CASE("thread count does not change results") {
  ChainConfig c = small_chain();
  c.field = make_field(NamedField::ChainPulse);
  const auto a = chain_run(c);
  c.threads = 3;
  const auto b = chain_run(c);
  for (std::size_t n = 0; n < a.states.size(); ++n) {
    for (long I = 0; I < c.L; ++I) {
      CHECK(a.states[n][I] == b.states[n][I]);
    }
  }
  CHECK(a.micro_rhs_evals == b.micro_rhs_evals);
}

TEST_CASE("direct chain simulation") {
  ChainConfig c = small_chain();
  c.field = make_field(NamedField::Constant, {0, 0, 1});
  c.initial = [](double) { return Vec3{0, 0, 1}; };
  const auto aligned = dns_chain(c, 5e-4, 0.1);
  for (const auto& s : aligned.states) {
    for (const auto& m : s) CHECK(m == Vec3{0, 0, 1});
  }

  c = small_chain();
  c.J = 0.0;
  c.field = make_field(NamedField::Circular);
  const auto d = dns_chain(c, 5e-4, 0.1);
  const auto init = initial_chain(c);
  for (long i = 0; i < c.N; i += 5) {
    DnsConfig s;
    s.eps = c.eps;
    s.gamma = c.gamma;
    s.T = 0.1;
    s.dt = 5e-4;
    s.field = c.field;
    s.m0 = init[i];
    const auto ref = dns_single(s);
    CHECK(close(d.states.back()[i], ref.states.back(), 1e-10));
  }
  const auto strided = dns_chain(c, 5e-4, 0.1, 30);
  CHECK(strided.size() == 8);  // 0, 30, ..., 180, 200
  CHECK(strided.times.back() == 0.1);
  CHECK_THROWS_AS(dns_chain(c, 1e-3, 0.1), Error);
}

TEST_CASE("chain configuration invariants") {
  ChainConfig c = small_chain();
  CHECK_NOTHROW(c.validate());
  c.N = 17;
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_chain();
  c.tau = 0.005;
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_chain();
  c.r = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_chain();
  CHECK(c.eta() == doctest::Approx(4.0 / 16));
  CHECK(c.wrap(-1) == 15);
  CHECK(c.wrap(16) == 0);
  CHECK(c.center_index(3) == 12);
}
