#pragma once

#include "llhmm/error.hpp"
#include "llhmm/vec3.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace llhmm {

struct MidpointConfig {
  double dt = 1e-3;
  double fp_tol = 1e-12;
  int fp_max_iter = 100;

  void validate() const;
};

/// Sampled solution. `times` is strictly monotone (descending for backward
/// runs); `rhs_evals` counts right-hand-side calls spent producing it.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec3> states;
  long rhs_evals = 0;

  [[nodiscard]] std::size_t size() const { return times.size(); }
};

using Rhs = std::function<Vec3(double, const Vec3&)>;

template <class State>
struct StepResult {
  State state;
  int iterations = 0;
  long rhs_evals = 0;
};

namespace detail {

inline Vec3 midpoint_of(const Vec3& a, const Vec3& b) { return 0.5 * (a + b); }
inline Vec3 advance(const Vec3& m, double dt, const Vec3& f) { return m + dt * f; }
inline double max_change(const Vec3& a, const Vec3& b) { return max_abs(a - b); }

inline std::vector<Vec3> midpoint_of(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  std::vector<Vec3> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
  return out;
}
inline std::vector<Vec3> advance(const std::vector<Vec3>& m, double dt,
                                 const std::vector<Vec3>& f) {
  std::vector<Vec3> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] + dt * f[i];
  return out;
}
inline double max_change(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::fmax(d, max_abs(a[i] - b[i]));
  return d;
}

}  // namespace detail

/// One implicit midpoint step m' = m + dt f(t + dt/2, (m + m')/2), solved by
/// fixed-point iteration from the explicit Euler predictor. dt may be negative.
/// Works for any state with the detail:: helpers (a single spin or a spin
/// vector). Throws Error{NonConverged} when the iterate change stays above
/// cfg.fp_tol after cfg.fp_max_iter corrections.
template <class State, class F>
StepResult<State> implicit_midpoint(F&& rhs, double t, const State& m, double dt,
                                    const MidpointConfig& cfg) {
  const double th = t + 0.5 * dt;
  StepResult<State> r{detail::advance(m, dt, rhs(th, m)), 0, 1};
  for (int k = 0; k < cfg.fp_max_iter; ++k) {
    State next = detail::advance(m, dt, rhs(th, detail::midpoint_of(m, r.state)));
    ++r.rhs_evals;
    ++r.iterations;
    const double change = detail::max_change(next, r.state);
    r.state = std::move(next);
    if (change <= cfg.fp_tol) return r;
  }
  throw Error(ErrorCode::NonConverged, "implicit midpoint fixed point did not converge");
}

StepResult<Vec3> midpoint_step(const Rhs& rhs, double t, const Vec3& m, double dt,
                               const MidpointConfig& cfg);

/// Number of steps of size dt_abs spanning |t1 - t0|; throws ParameterError if
/// the span is not a whole number of steps.
long step_count(double t0, double t1, double dt_abs);

/// Repeated midpoint steps from t0 to t1 (either direction). A NonConverged
/// error carries the failing step index.
Trajectory integrate(const Rhs& rhs, double t0, const Vec3& m0, double t1, double dt_abs,
                     const MidpointConfig& cfg);

}  // namespace llhmm
