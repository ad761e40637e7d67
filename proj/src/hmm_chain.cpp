#include "llhmm/hmm_chain.hpp"

#include "llhmm/error.hpp"
#include "llhmm/parallel.hpp"

#include <cmath>
#include <sstream>

namespace llhmm {

long ChainConfig::center_index(long I) const { return wrap(I * stride()); }

long ChainConfig::wrap(long i) const {
  const long m = i % N;
  return m < 0 ? m + N : m;
}

void ChainConfig::validate() const {
  if (r < 1) throw Error(ErrorCode::Validation, "r must be positive");
  if (ell < 0) throw Error(ErrorCode::Validation, "ell must be non-negative");
  if (L < 1) throw Error(ErrorCode::Validation, "L must be positive");
  if (N != (r + ell) * L) throw Error(ErrorCode::Validation, "N must equal (r + ell) * L");
  if (2 * r + 1 > N) throw Error(ErrorCode::Validation, "micro patch exceeds the chain");
  if (!(dx > 0.0)) throw Error(ErrorCode::Validation, "dx must be positive");
  if (!(eps > 0.0)) throw Error(ErrorCode::Validation, "eps must be positive");
  if (!(tau > eps)) throw Error(ErrorCode::Validation, "tau must exceed eps");
  if (!(macro_dt > tau)) throw Error(ErrorCode::Validation, "macro_dt must exceed tau");
  if (!(T >= macro_dt)) throw Error(ErrorCode::Validation, "T must be at least macro_dt");
  if (!(micro_dt > 0.0)) throw Error(ErrorCode::Validation, "micro_dt must be positive");
  if (beta == 0.0) throw Error(ErrorCode::Validation, "beta must be nonzero");
  if (!field.value) throw Error(ErrorCode::Validation, "field is not set");
  if (!initial) throw Error(ErrorCode::Validation, "initial chain is not set");
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

ChainState initial_chain(const ChainConfig& cfg) {
  ChainState s(static_cast<std::size_t>(cfg.N));
  for (long i = 0; i < cfg.N; ++i) s[i] = cfg.initial(static_cast<double>(i) * cfg.dx);
  return s;
}

Vec3 exchange_field(const ChainState& state, long i, double t, const ChainConfig& cfg) {
  const auto& left = state[cfg.wrap(i - 1)];
  const auto& right = state[cfg.wrap(i + 1)];
  return cfg.J * (left + right) + eval_two_scale(cfg.field, t, cfg.eps);
}

namespace {

// xi is the offset from X_I in units of the macro spacing.
Vec3 interpolate_at(const Vec3& a, const Vec3& b, const Vec3& c, double xi) {
  const Vec3 v = (0.5 * xi * (xi - 1.0)) * a + ((1.0 - xi) * (1.0 + xi)) * b +
                 (0.5 * xi * (xi + 1.0)) * c;
  const double n = norm(v);
  if (!(n >= 1e-12)) {
    throw Error(ErrorCode::DegenerateInterpolant, "macro interpolant vanishes in the micro patch");
  }
  return v / n;
}

// Midpoint integration of a spin vector, storing every `stride`-th state and
// the last one.
template <class F>
ChainTrajectory integrate_chain(F&& rhs, double t0, const ChainState& m0, double t1,
                                double dt_abs, const MidpointConfig& mc, long stride) {
  const long n = step_count(t0, t1, dt_abs);
  const double h = (t1 >= t0 ? 1.0 : -1.0) * dt_abs;
  ChainTrajectory traj;
  traj.times.push_back(t0);
  traj.states.push_back(m0);
  ChainState m = m0;
  for (long k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    try {
      auto step = implicit_midpoint(rhs, t, m, h, mc);
      m = std::move(step.state);
      traj.rhs_evals += step.rhs_evals;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonConverged) throw;
      std::ostringstream os;
      os << e.what() << " at step " << k << " (t = " << t << ")";
      throw Error(ErrorCode::NonConverged, os.str(), k);
    }
    if ((k + 1) % stride == 0 || k + 1 == n) {
      traj.times.push_back(k + 1 == n ? t1 : t0 + static_cast<double>(k + 1) * h);
      traj.states.push_back(m);
    }
  }
  return traj;
}

// Precession of the interior patch spins; the two end spins stay fixed.
ChainState patch_rhs(const ChainState& p, const Vec3& h_ext, const ChainConfig& cfg) {
  const std::size_t n = p.size();
  ChainState out(n);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    out[j] = precession_rhs(p[j], cfg.J * (p[j - 1] + p[j + 1]) + h_ext, cfg.beta);
  }
  return out;
}

}  // namespace

Vec3 interpolate_macro(const Vec3& M_left, const Vec3& M_center, const Vec3& M_right, long I,
                       double x, const ChainConfig& cfg) {
  const double length = static_cast<double>(cfg.N) * cfg.dx;
  double d = std::fmod(x - static_cast<double>(I) * cfg.macro_spacing(), length);
  if (d >= 0.5 * length) d -= length;
  if (d < -0.5 * length) d += length;
  return interpolate_at(M_left, M_center, M_right, d / cfg.macro_spacing());
}

std::vector<double> spatial_weights(const ChainConfig& cfg) {
  std::vector<double> w(static_cast<std::size_t>(2 * cfg.r + 1));
  double sum = 0.0;
  for (long j = -cfg.r; j <= cfg.r; ++j) {
    const double v = eval_scaled(cfg.kernel_space, cfg.eta(), static_cast<double>(j) * cfg.dx) * cfg.dx;
    w[j + cfg.r] = v;
    sum += v;
  }
  if (!(sum > 0.0)) throw_parameter("spatial kernel weights sum to zero");
  for (auto& v : w) v /= sum;
  return w;
}

ChainTrajectory chain_micro_solve(long I, double t_a, const MacroChainState& macro,
                                  const ChainConfig& cfg) {
  const long L = static_cast<long>(macro.size());
  if (L != cfg.L) throw_parameter("macro state size does not match L");
  const auto idx = [L](long k) { return static_cast<std::size_t>(((k % L) + L) % L); };
  const Vec3& a = macro[idx(I - 1)];
  const Vec3& b = macro[idx(I)];
  const Vec3& c = macro[idx(I + 1)];

  ChainState start(static_cast<std::size_t>(2 * cfg.r + 1));
  for (long j = -cfg.r; j <= cfg.r; ++j) {
    start[j + cfg.r] =
        interpolate_at(a, b, c, static_cast<double>(j) / static_cast<double>(cfg.stride()));
  }

  const auto rhs = [&](double s, const ChainState& p) {
    return patch_rhs(p, eval_two_scale(cfg.field, s + t_a, cfg.eps), cfg);
  };
  const auto mc = cfg.micro_config();
  const double half = 0.5 * cfg.tau;
  ChainTrajectory back = integrate_chain(rhs, 0.0, start, -half, cfg.micro_dt, mc, 1);
  ChainTrajectory fwd = integrate_chain(rhs, 0.0, start, half, cfg.micro_dt, mc, 1);

  ChainTrajectory out;
  out.rhs_evals = back.rhs_evals + fwd.rhs_evals;
  out.times.assign(back.times.rbegin(), back.times.rend());
  out.states.assign(std::make_move_iterator(back.states.rbegin()),
                    std::make_move_iterator(back.states.rend()));
  out.times.insert(out.times.end(), fwd.times.begin() + 1, fwd.times.end());
  out.states.insert(out.states.end(), std::make_move_iterator(fwd.states.begin() + 1),
                    std::make_move_iterator(fwd.states.end()));
  return out;
}

Vec3 chain_upscale(const ChainTrajectory& local, long /*I*/, double t_a, const ChainConfig& cfg) {
  const auto tw = window_weights(cfg.kernel_time, cfg.tau, cfg.micro_dt);
  if (tw.size() != local.size()) throw_parameter("micro trajectory does not match the window grid");
  const auto sw = spatial_weights(cfg);
  Vec3 flux;
  for (std::size_t i = 0; i < tw.size(); ++i) {
    if (tw[i] == 0.0) continue;
    const ChainState& p = local.states[i];
    if (p.size() != sw.size()) throw_parameter("micro patch size does not match 2r + 1");
    const Vec3 h = eval_two_scale(cfg.field, local.times[i] + t_a, cfg.eps);
    Vec3 inner;
    for (std::size_t j = 1; j + 1 < p.size(); ++j) {
      if (sw[j] == 0.0) continue;
      inner += sw[j] * precession_rhs(p[j], cfg.J * (p[j - 1] + p[j + 1]) + h, cfg.beta);
    }
    flux += tw[i] * inner;
  }
  return flux;
}

MacroChainState chain_flux(double t_a, const MacroChainState& macro, const ChainConfig& cfg,
                           long* rhs_evals) {
  const std::size_t L = macro.size();
  MacroChainState F(L);
  std::vector<long> evals(L, 0);
  parallel_for(L, cfg.threads, [&](std::size_t I) {
    const auto traj = chain_micro_solve(static_cast<long>(I), t_a, macro, cfg);
    F[I] = chain_upscale(traj, static_cast<long>(I), t_a, cfg);
    evals[I] = traj.rhs_evals + static_cast<long>(traj.size());
  });
  if (rhs_evals != nullptr) {
    for (long e : evals) *rhs_evals += e;
  }
  return F;
}

ChainMacroStep chain_macro_step(double t_n, const MacroChainState& M_n, const ChainConfig& cfg,
                                const MacroChainState& first_iterate) {
  const double dt = cfg.macro_dt;
  const double t_half = t_n + 0.5 * dt;
  const double ratio = cfg.gamma / cfg.beta;
  const std::size_t L = M_n.size();

  ChainMacroStep step;
  MacroChainState iterate = first_iterate;
  MacroChainState mid(L);
  MacroChainState next(L);
  long worst = 0;
  for (int k = 0; k < cfg.macro_fp_max_iter; ++k) {
    for (std::size_t I = 0; I < L; ++I) mid[I] = 0.5 * (M_n[I] + iterate[I]);
    const MacroChainState F = chain_flux(t_half, mid, cfg, &step.rhs_evals);
    double change = 0.0;
    for (std::size_t I = 0; I < L; ++I) {
      next[I] = M_n[I] + dt * F[I] + (ratio * dt) * cross(mid[I], F[I]);
      const double d = max_abs(next[I] - iterate[I]);
      if (d > change) {
        change = d;
        worst = static_cast<long>(I);
      }
    }
    std::swap(iterate, next);
    ++step.iterations;
    if (change <= cfg.macro_fp_tol) {
      step.next = std::move(iterate);
      return step;
    }
  }
  std::ostringstream os;
  os << "chain macro fixed point did not converge within " << cfg.macro_fp_max_iter
     << " iterations at t = " << t_n << " (cell " << worst << ")";
  throw Error(ErrorCode::MacroNonConverged, os.str(), worst);
}

ChainMacroTrajectory chain_run(const ChainConfig& cfg) {
  cfg.validate();
  const long n = step_count(0.0, cfg.T, cfg.macro_dt);
  const ChainState init = initial_chain(cfg);
  MacroChainState M(static_cast<std::size_t>(cfg.L));
  for (long I = 0; I < cfg.L; ++I) M[I] = macro_average(init, I, cfg);

  ChainMacroTrajectory out;
  out.times.push_back(0.0);
  out.states.push_back(M);
  MacroChainState prev_step;  // M_{n} - M_{n-1}
  for (long k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * cfg.macro_dt;
    MacroChainState guess = M;
    if (!prev_step.empty()) {
      for (std::size_t I = 0; I < M.size(); ++I) guess[I] = M[I] + prev_step[I];
    }
    ChainMacroStep step;
    try {
      step = chain_macro_step(t, M, cfg, guess);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MacroNonConverged) throw;
      std::ostringstream os;
      os << e.what() << " (macro step " << k << ")";
      throw Error(e.code(), os.str(), e.index());
    }
    prev_step.resize(M.size());
    for (std::size_t I = 0; I < M.size(); ++I) prev_step[I] = step.next[I] - M[I];
    M = std::move(step.next);
    out.times.push_back(k + 1 == n ? cfg.T : static_cast<double>(k + 1) * cfg.macro_dt);
    out.states.push_back(M);
    out.iterations.push_back(step.iterations);
    out.micro_rhs_evals += step.rhs_evals;
  }
  return out;
}

Vec3 macro_average(const ChainState& state, long I, const ChainConfig& cfg) {
  if (static_cast<long>(state.size()) != cfg.N) throw_parameter("chain state size does not match N");
  const auto w = spatial_weights(cfg);
  const long c = cfg.center_index(I);
  Vec3 out;
  for (long j = -cfg.r; j <= cfg.r; ++j) out += w[j + cfg.r] * state[cfg.wrap(c + j)];
  return out;
}

Vec3 macro_average(const ChainTrajectory& traj, long I, double t, const ChainConfig& cfg) {
  const auto out_of_range = [&] {
    std::ostringstream os;
    os << "trajectory does not cover the averaging window around t = " << t;
    return Error(ErrorCode::WindowOutOfRange, os.str());
  };
  if (traj.size() < 2) throw out_of_range();
  const double h = traj.times[1] - traj.times[0];
  const long n = half_window_steps(cfg.tau, h);
  const long k = std::lround((t - traj.times[0]) / h);
  if (k - n < 0 || k + n >= static_cast<long>(traj.size())) throw out_of_range();
  const double slack = 1e-9 * std::fmax(1.0, std::fabs(t));
  for (long e : {k - n, k, k + n}) {
    if (std::fabs(traj.times[e] - (t + static_cast<double>(e - k) * h)) > slack) {
      throw out_of_range();
    }
  }
  const auto tw = window_weights(cfg.kernel_time, cfg.tau, h);
  Vec3 out;
  for (long i = -n; i <= n; ++i) {
    const double w = tw[i + n];
    if (w != 0.0) out += w * macro_average(traj.states[k + i], I, cfg);
  }
  return out;
}

ChainTrajectory dns_chain(const ChainConfig& cfg, double dt, double t_end, long stride) {
  if (!(dt > 0.0) || dt > cfg.eps / 20.0 * (1.0 + 1e-12)) {
    throw Error(ErrorCode::Validation, "dns dt must satisfy 0 < dt <= eps/20");
  }
  if (stride < 1) throw_parameter("stride must be positive");
  if (!cfg.initial) throw Error(ErrorCode::Validation, "initial chain is not set");
  const auto rhs = [&](double t, const ChainState& m) {
    const Vec3 h = eval_two_scale(cfg.field, t, cfg.eps);
    ChainState out(m.size());
    const long N = static_cast<long>(m.size());
    for (long i = 0; i < N; ++i) {
      const Vec3 H = cfg.J * (m[cfg.wrap(i - 1)] + m[cfg.wrap(i + 1)]) + h;
      out[i] = ll_rhs(m[i], H, cfg.beta, cfg.gamma);
    }
    return out;
  };
  return integrate_chain(rhs, 0.0, initial_chain(cfg), t_end, dt, {dt, cfg.fp_tol, cfg.fp_max_iter},
                         stride);
}

}  // namespace llhmm
