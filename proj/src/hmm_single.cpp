#include "llhmm/hmm_single.hpp"

#include "llhmm/error.hpp"

#include <algorithm>
#include <sstream>

namespace llhmm {

void HmmConfig::validate() const {
  if (!(eps > 0.0)) throw Error(ErrorCode::Validation, "eps must be positive");
  if (!(tau > eps)) throw Error(ErrorCode::Validation, "tau must exceed eps");
  if (!(macro_dt > tau)) throw Error(ErrorCode::Validation, "macro_dt must exceed tau");
  if (!(T >= macro_dt)) throw Error(ErrorCode::Validation, "T must be at least macro_dt");
  if (!(micro_dt > 0.0)) throw Error(ErrorCode::Validation, "micro_dt must be positive");
  if (beta == 0.0) throw Error(ErrorCode::Validation, "beta must be nonzero");
  if (!field.value) throw Error(ErrorCode::Validation, "field is not set");
  if (!m0.finite() || std::fabs(norm(m0) - 1.0) > Spin::kUnitTolerance) {
    throw Error(ErrorCode::Validation, "m0 must have unit length");
  }
  try {
    half_window_steps(tau, micro_dt);
  } catch (const Error&) {
    throw Error(ErrorCode::Validation, "micro_dt must divide tau/2");
  }
  try {
    step_count(0.0, T, macro_dt);
  } catch (const Error&) {
    throw Error(ErrorCode::Validation, "T must be a whole number of macro steps");
  }
  micro_config().validate();
  if (!(macro_fp_tol > 0.0) || macro_fp_max_iter < 1) {
    throw Error(ErrorCode::Validation, "macro fixed-point settings must be positive");
  }
}

Trajectory micro_solve(double t_a, const Vec3& M, const HmmConfig& cfg) {
  if (!(norm(M) > 0.0)) throw_parameter("micro initial data must be nonzero");
  const Vec3 start = cfg.normalize_micro_init ? M / norm(M) : M;
  const Rhs rhs = [&](double s, const Vec3& m) {
    return precession_rhs(m, eval_two_scale(cfg.field, s + t_a, cfg.eps), cfg.beta);
  };
  const auto mc = cfg.micro_config();
  const double half = 0.5 * cfg.tau;
  Trajectory back = integrate(rhs, 0.0, start, -half, cfg.micro_dt, mc);
  Trajectory fwd = integrate(rhs, 0.0, start, half, cfg.micro_dt, mc);

  Trajectory out;
  out.rhs_evals = back.rhs_evals + fwd.rhs_evals;
  out.times.assign(back.times.rbegin(), back.times.rend());
  out.states.assign(back.states.rbegin(), back.states.rend());
  out.times.insert(out.times.end(), fwd.times.begin() + 1, fwd.times.end());
  out.states.insert(out.states.end(), fwd.states.begin() + 1, fwd.states.end());
  return out;
}

Vec3 upscale(const Trajectory& traj, double t_a, const HmmConfig& cfg) {
  const auto w = window_weights(cfg.kernel, cfg.tau, cfg.micro_dt);
  if (w.size() != traj.size()) throw_parameter("micro trajectory does not match the window grid");
  Vec3 flux;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const Vec3 h = eval_two_scale(cfg.field, traj.times[i] + t_a, cfg.eps);
    flux += w[i] * precession_rhs(traj.states[i], h, cfg.beta);
  }
  return flux;
}

Vec3 hmm_flux(double t_a, const Vec3& M, const HmmConfig& cfg, long* rhs_evals) {
  const Trajectory traj = micro_solve(t_a, M, cfg);
  if (rhs_evals != nullptr) *rhs_evals += traj.rhs_evals + static_cast<long>(traj.size());
  return upscale(traj, t_a, cfg);
}

MacroStep macro_step(double t_n, const Vec3& M_n, const HmmConfig& cfg) {
  return macro_step(t_n, M_n, cfg, M_n);
}

MacroStep macro_step(double t_n, const Vec3& M_n, const HmmConfig& cfg, const Vec3& first_iterate) {
  const double dt = cfg.macro_dt;
  const double t_half = t_n + 0.5 * dt;
  const double ratio = cfg.gamma / cfg.beta;

  MacroStep step;
  Vec3 cols[3];
  if (cfg.flux_mode == FluxMode::Linear) {
    HmmConfig plain = cfg;
    plain.normalize_micro_init = false;
    const Vec3 basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int c = 0; c < 3; ++c) cols[c] = hmm_flux(t_half, basis[c], plain, &step.rhs_evals);
  }
  const auto flux_at = [&](const Vec3& mid) {
    if (cfg.flux_mode == FluxMode::Resolve) return hmm_flux(t_half, mid, cfg, &step.rhs_evals);
    const Vec3 m = cfg.normalize_micro_init ? mid / norm(mid) : mid;
    return m.x * cols[0] + m.y * cols[1] + m.z * cols[2];
  };

  Vec3 iterate = first_iterate;
  for (int k = 0; k < cfg.macro_fp_max_iter; ++k) {
    const Vec3 mid = 0.5 * (M_n + iterate);
    const Vec3 f = flux_at(mid);
    const Vec3 next = M_n + dt * f + (ratio * dt) * cross(mid, f);
    ++step.iterations;
    const double change = max_abs(next - iterate);
    iterate = next;
    step.flux = f;
    if (change <= cfg.macro_fp_tol) {
      step.next = iterate;
      return step;
    }
  }
  std::ostringstream os;
  os << "macro fixed point did not converge within " << cfg.macro_fp_max_iter
     << " iterations at t = " << t_n;
  throw Error(ErrorCode::MacroNonConverged, os.str());
}

MacroTrajectory run(const HmmConfig& cfg) {
  cfg.validate();
  const long n = step_count(0.0, cfg.T, cfg.macro_dt);
  MacroTrajectory out;
  out.times.push_back(0.0);
  out.states.push_back(cfg.m0);
  Vec3 M = cfg.m0;
  for (long k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * cfg.macro_dt;
    MacroStep step;
    try {
      // Previous flux gives an O(dt^2) first iterate at no micro cost.
      const Vec3 guess = out.flux.empty()
                             ? M
                             : M + cfg.macro_dt * out.flux.back() +
                                   (cfg.gamma / cfg.beta * cfg.macro_dt) * cross(M, out.flux.back());
      step = macro_step(t, M, cfg, guess);
    } catch (const Error& e) {
      std::ostringstream os;
      os << e.what() << " (macro step " << k << ")";
      throw Error(e.code(), os.str(), k);
    }
    M = step.next;
    out.times.push_back(k + 1 == n ? cfg.T : static_cast<double>(k + 1) * cfg.macro_dt);
    out.states.push_back(M);
    out.flux.push_back(step.flux);
    out.iterations.push_back(step.iterations);
    out.micro_rhs_evals += step.rhs_evals;
  }
  return out;
}

}  // namespace llhmm
