#pragma once

#include "llhmm/field.hpp"
#include "llhmm/kernel.hpp"
#include "llhmm/midpoint.hpp"
#include "llhmm/vec3.hpp"

#include <functional>
#include <vector>

namespace llhmm {

/// Periodic chain of N = (r + ell) L exchange-coupled spins at x_i = i dx,
/// i = 0..N-1, with macro points X_I = I (r + ell) dx, I = 0..L-1. Each macro
/// point owns a micro patch of 2r + 1 spins centred on particle I (r + ell).
struct ChainConfig {
  long N = 100;
  long L = 10;
  long r = 5;
  long ell = 5;
  double dx = 0.01;
  double J = 1.0;  // nearest-neighbour exchange

  double eps = 0.01;
  double tau = 0.05;
  double macro_dt = 0.075;
  double micro_dt = 1e-4;
  double beta = 1.0;
  double gamma = 1.0;
  double T = 1.5;
  KernelSpec kernel_time = build_kernel(5, 4);
  KernelSpec kernel_space = build_kernel(5, 4);
  FieldSpec field = make_field(NamedField::ChainPulse);
  std::function<Vec3(double x)> initial;

  double fp_tol = 1e-12;
  int fp_max_iter = 100;
  double macro_fp_tol = 1e-10;
  int macro_fp_max_iter = 50;
  unsigned threads = 1;

  /// Spatial averaging window, 2 r dx.
  [[nodiscard]] double eta() const { return 2.0 * static_cast<double>(r) * dx; }
  [[nodiscard]] long stride() const { return r + ell; }
  [[nodiscard]] double macro_spacing() const { return static_cast<double>(stride()) * dx; }
  [[nodiscard]] long center_index(long I) const;
  [[nodiscard]] long wrap(long i) const;
  [[nodiscard]] MidpointConfig micro_config() const { return {micro_dt, fp_tol, fp_max_iter}; }

  void validate() const;
};

using ChainState = std::vector<Vec3>;       // N spins
using MacroChainState = std::vector<Vec3>;  // L macro values

/// Sampled chain (or patch) solution; states[k] holds every spin at times[k].
struct ChainTrajectory {
  std::vector<double> times;
  std::vector<ChainState> states;
  long rhs_evals = 0;

  [[nodiscard]] std::size_t size() const { return times.size(); }
};

struct ChainMacroTrajectory {
  std::vector<double> times;
  std::vector<MacroChainState> states;
  std::vector<int> iterations;
  long micro_rhs_evals = 0;
};

/// Chain initial state, initial(x_i) for every particle.
ChainState initial_chain(const ChainConfig& cfg);

/// J (m_{i-1} + m_{i+1}) + H(t, t/eps), indices periodic.
Vec3 exchange_field(const ChainState& state, long i, double t, const ChainConfig& cfg);

/// Quadratic through (X_{I-1}, M_left), (X_I, M_center), (X_{I+1}, M_right),
/// evaluated at x (unwrapped periodically around X_I) and normalized. Throws
/// Error{DegenerateInterpolant} if the interpolant nearly vanishes.
Vec3 interpolate_macro(const Vec3& M_left, const Vec3& M_center, const Vec3& M_right, long I,
                       double x, const ChainConfig& cfg);

/// Normalized spatial weights K_eta(j dx) dx for j = -r..r, summing to one.
std::vector<double> spatial_weights(const ChainConfig& cfg);

/// Micro problem of cell I around t_a: 2r+1 spins initialised from the
/// normalized macro interpolant, interior spins precessing in the exchange
/// plus external field, the two end spins held fixed. Times are shifted
/// (s in [-tau/2, tau/2]), ascending.
ChainTrajectory chain_micro_solve(long I, double t_a, const MacroChainState& macro,
                                  const ChainConfig& cfg);

/// Space-time kernel average of dm/dt over a patch trajectory.
Vec3 chain_upscale(const ChainTrajectory& local, long I, double t_a, const ChainConfig& cfg);

/// F_I(t_a, M_{I-1}, M_I, M_{I+1}) for every cell; micro problems run on
/// cfg.threads workers, gathered in cell order.
MacroChainState chain_flux(double t_a, const MacroChainState& macro, const ChainConfig& cfg,
                           long* rhs_evals = nullptr);

struct ChainMacroStep {
  MacroChainState next;
  int iterations = 0;
  long rhs_evals = 0;
};

/// Implicit midpoint macro step for all cells at once; each fixed-point sweep
/// re-solves all L micro problems at the midpoint states.
ChainMacroStep chain_macro_step(double t_n, const MacroChainState& M_n, const ChainConfig& cfg,
                                const MacroChainState& first_iterate);

ChainMacroTrajectory chain_run(const ChainConfig& cfg);

/// Spatial-only macro value sum_j w_j m_{I(r+ell)+j}.
Vec3 macro_average(const ChainState& state, long I, const ChainConfig& cfg);

/// Space-time macro value at time t from a uniformly sampled trajectory whose
/// samples cover [t - tau/2, t + tau/2]. Throws Error{WindowOutOfRange}
/// otherwise.
Vec3 macro_average(const ChainTrajectory& traj, long I, double t, const ChainConfig& cfg);

/// Midpoint integration of the full chain (damped, with exchange) from the
/// initial state to t_end with step dt. Every `stride`-th state is stored, plus
/// the last one.
ChainTrajectory dns_chain(const ChainConfig& cfg, double dt, double t_end, long stride = 1);

}  // namespace llhmm
