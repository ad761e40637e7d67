#pragma once

#include "llhmm/field.hpp"
#include "llhmm/kernel.hpp"
#include "llhmm/midpoint.hpp"
#include "llhmm/vec3.hpp"

#include <vector>

namespace llhmm {

/// How the macro fixed point obtains F at each iterate.
///   Resolve  runs a fresh micro problem at every iterate.
///   Linear   uses that the precession micro problem is linear in its initial
///            value: three micro solves on the unit vectors give a matrix A with
///            F(t, M) = A M, reused by every iterate of the step. Agrees with
///            Resolve to the micro solver tolerance.
enum class FluxMode { Resolve, Linear };

/// Parameters of the single-spin multiscale solver. Scale ordering
/// eps < tau < macro_dt <= T is enforced by validate().
struct HmmConfig {
  double eps = 0.01;       // period of the fast field oscillation
  double tau = 0.05;       // micro window length
  double macro_dt = 0.1;   // macro step
  double micro_dt = 1e-4;  // micro step; must divide tau / 2
  double beta = 1.0;
  double gamma = 0.0;
  double T = 1.0;
  KernelSpec kernel = build_kernel(5, 4);
  FieldSpec field = make_field(NamedField::Circular);
  Vec3 m0{0.0, 0.0, 1.0};

  double fp_tol = 1e-12;  // micro midpoint solve
  int fp_max_iter = 100;
  double macro_fp_tol = 1e-10;
  int macro_fp_max_iter = 50;

  /// Start micro problems from M / |M| instead of M. Off by default; the
  /// chain solver always normalizes, so the reduction check turns it on.
  bool normalize_micro_init = false;
  FluxMode flux_mode = FluxMode::Resolve;

  void validate() const;
  [[nodiscard]] MidpointConfig micro_config() const { return {micro_dt, fp_tol, fp_max_iter}; }
};

struct MacroTrajectory {
  std::vector<double> times;        // t_n = n macro_dt, n = 0..N
  std::vector<Vec3> states;         // M_n
  std::vector<Vec3> flux;           // F_{n+1/2}, n = 0..N-1
  std::vector<int> iterations;      // outer fixed-point iterations per step
  long micro_rhs_evals = 0;
};

struct MacroStep {
  Vec3 next;
  Vec3 flux;
  int iterations = 0;
  long rhs_evals = 0;
};

/// Precession-only micro problem around t_a: d/ds m = -beta m x H(s + t_a),
/// m(0) = M, on s in [-tau/2, tau/2]. Times in the result are the shifted s,
/// ascending.
Trajectory micro_solve(double t_a, const Vec3& M, const HmmConfig& cfg);

/// Kernel-weighted average of dm/ds over the micro window, with dm/ds taken
/// from the precession right-hand side at every sample.
Vec3 upscale(const Trajectory& traj, double t_a, const HmmConfig& cfg);

/// F(t_a, M): micro solve followed by upscaling. `rhs_evals` (optional)
/// accumulates the micro cost.
Vec3 hmm_flux(double t_a, const Vec3& M, const HmmConfig& cfg, long* rhs_evals = nullptr);

/// One damped implicit-midpoint macro step
///   M_{n+1} = M_n + dt F + (gamma/beta) dt M_{n+1/2} x F,  F = F(t_{n+1/2}, M_{n+1/2}),
/// solved by fixed-point iteration that re-runs the micro problem every sweep.
MacroStep macro_step(double t_n, const Vec3& M_n, const HmmConfig& cfg);

/// Same step with an explicit first iterate for M_{n+1} (the plain overload
/// starts from M_n).
MacroStep macro_step(double t_n, const Vec3& M_n, const HmmConfig& cfg, const Vec3& first_iterate);

/// Full macro run from M_0 = m0 to T.
MacroTrajectory run(const HmmConfig& cfg);

}  // namespace llhmm
