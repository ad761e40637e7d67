#include "llhmm/experiments.hpp"

#include "llhmm/error.hpp"
#include "llhmm/parallel.hpp"
#include "llhmm/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace llhmm {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Largest step <= eps / steps_per_eps dividing tau / 2.
double window_step(double tau, double eps, double steps_per_eps) {
  const double half = 0.5 * tau;
  return half / std::ceil(half / (eps / steps_per_eps) - 1e-9);
}

const Vec3 kDiagonal = Vec3{1.0, 1.0, 1.0} / std::sqrt(3.0);

}  // namespace

double aligned_dns_dt(double span, double eps) {
  return span / std::ceil(span / (eps / 20.0) - 1e-9);
}

void ErrorTable::finalize() {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.param > b.param; });
  slopes.assign(columns.size(), 0.0);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) pts.emplace_back(r.param, r.errors.at(c));
    slopes[c] = fit_slope(pts);
  }
}

std::vector<double> ErrorTable::column(std::size_t c) const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.errors.at(c));
  return out;
}

double fit_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw_parameter("slope fit needs at least two points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw Error(ErrorCode::NonPositiveData, "slope fit needs positive data");
    }
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx == 0.0) throw_parameter("slope fit needs distinct x values");
  return sxy / sxx;
}

ErrorTable exp_tail(const TailOptions& opt) {
  const FieldSpec field = make_field(NamedField::Circular);
  const Vec3 M{0.0, 0.0, 1.0};
  ErrorTable t;
  t.name = "tail";
  t.param_name = "eps";
  t.columns = {"err_m0", "err_m1"};
  t.meta = {{"field", field.name}, {"M", "0,0,1"}, {"t_a", "0"}, {"dt", num(opt.dt)}};
  t.rows.resize(opt.eps_list.size());
  parallel_for(opt.eps_list.size(), opt.threads, [&](std::size_t k) {
    const double eps = opt.eps_list[k];
    const Trajectory traj = scaled_micro(0.0, 0.0, M, eps, field, opt.dt);
    double e0 = 0.0, e1 = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      e0 = std::fmax(e0, distance(traj.states[i], M));
      if (i % static_cast<std::size_t>(opt.sample_every) == 0 || i + 1 == traj.size()) {
        const Vec3 approx = M + eps * m1_oracle(traj.times[i], 0.0, 0.0, M, field);
        e1 = std::fmax(e1, distance(traj.states[i], approx));
      }
    }
    t.rows[k] = {eps, {e0, e1}};
  });
  t.finalize();
  return t;
}

ErrorTable exp_upscaling(const UpscalingOptions& opt) {
  const FieldSpec field = make_field(NamedField::CircularCos);
  const Vec3 M{0.0, 0.0, 1.0};
  ErrorTable t;
  t.name = opt.mode == UpscalingMode::Tied ? "upscaling_tied" : "upscaling_fixed";
  t.param_name = "eps";
  for (int q : opt.q_list) t.columns.push_back("err_q" + std::to_string(q));
  t.meta = {{"field", field.name},
            {"M", "0,0,1"},
            {"p", std::to_string(opt.p)},
            {"phase", num(opt.phase)},
            {opt.mode == UpscalingMode::Tied ? "tau_over_eps" : "tau",
             num(opt.mode == UpscalingMode::Tied ? opt.tau_ratio : opt.tau_fixed)}};
  t.rows.resize(opt.eps_list.size());
  parallel_for(opt.eps_list.size(), opt.threads, [&](std::size_t k) {
    const double eps = opt.eps_list[k];
    HmmConfig c;
    c.eps = eps;
    c.tau = opt.mode == UpscalingMode::Tied ? opt.tau_ratio * eps : opt.tau_fixed;
    c.micro_dt = window_step(c.tau, eps, opt.steps_per_eps);
    c.field = field;
    const double t_a = opt.phase * eps;
    std::vector<double> errs;
    for (int q : opt.q_list) {
      c.kernel = build_kernel(opt.p, q);
      const Vec3 F = hmm_flux(t_a, M, c);
      errs.push_back(norm(F + cross(M, effective(field, t_a))));
    }
    t.rows[k] = {eps, errs};
  });
  t.finalize();
  return t;
}

double FullSolution::max_hmm_vs_effective() const {
  double d = 0.0;
  for (std::size_t n = 0; n < hmm.size(); ++n) d = std::fmax(d, distance(hmm[n], effective[n]));
  return d;
}

FullSolution exp_full_solution(const FullSolutionOptions& opt) {
  FullSolution out;
  HmmConfig& c = out.cfg;
  c.eps = opt.eps;
  c.tau = opt.tau_ratio * opt.eps;
  c.T = opt.T;
  c.macro_dt = opt.T / opt.steps;
  c.micro_dt = window_step(c.tau, opt.eps, opt.steps_per_eps);
  c.gamma = opt.gamma;
  c.kernel = build_kernel(opt.p, opt.q);
  c.field = field_from_name(opt.field);
  c.m0 = opt.m0;
  const MacroTrajectory h = run(c);
  out.times = h.times;
  out.hmm = h.states;
  out.hmm_evals = h.micro_rhs_evals;

  DnsConfig d;
  d.eps = c.eps;
  d.beta = c.beta;
  d.gamma = c.gamma;
  d.T = c.T;
  d.dt = aligned_dns_dt(c.macro_dt, c.eps);
  d.field = c.field;
  d.m0 = c.m0;
  const Trajectory dns = dns_single(d);
  out.dns_evals = dns.rhs_evals;
  const long per_macro = std::lround(c.macro_dt / d.dt);
  for (std::size_t n = 0; n < h.times.size(); ++n) out.dns.push_back(dns.states[n * per_macro]);

  EffectiveConfig e;
  e.beta = c.beta;
  e.gamma = c.gamma;
  e.T = c.T;
  e.dt = c.macro_dt / opt.oracle_refine;
  e.field = c.field;
  e.m0 = c.m0;
  const Trajectory eff = effective_solve(e);
  for (std::size_t n = 0; n < h.times.size(); ++n) {
    out.effective.push_back(eff.states[n * static_cast<std::size_t>(opt.oracle_refine)]);
  }
  return out;
}

namespace {

HmmConfig drift_config(double eps, int p, int q, double tau_ratio, double gamma, double T,
                       int steps, double steps_per_eps) {
  HmmConfig c;
  c.eps = eps;
  c.tau = tau_ratio * eps;
  c.T = T;
  c.macro_dt = T / steps;
  c.micro_dt = window_step(c.tau, eps, steps_per_eps);
  c.gamma = gamma;
  c.kernel = build_kernel(p, q);
  c.field = make_field(NamedField::Circular);
  c.m0 = kDiagonal;
  return c;
}

double max_length_drift(const MacroTrajectory& r) {
  double d = 0.0;
  for (const auto& m : r.states) d = std::fmax(d, std::fabs(norm(m) - 1.0));
  return d;
}

}  // namespace

AmplitudeResult exp_amplitude(const AmplitudeOptions& opt) {
  AmplitudeResult out;
  ErrorTable& t = out.sweep;
  t.name = "amplitude";
  t.param_name = "eps";
  t.columns = {"amp_dev"};
  t.meta = {{"field", "circular"},         {"M0", "diag"},
            {"p", std::to_string(opt.p)},  {"q", std::to_string(opt.q)},
            {"tau_over_eps", num(opt.tau_ratio)}, {"gamma", num(opt.gamma)},
            {"T", num(opt.T)},             {"steps", std::to_string(opt.steps)}};
  t.rows.resize(opt.eps_list.size());
  parallel_for(opt.eps_list.size(), opt.threads, [&](std::size_t k) {
    const double eps = opt.eps_list[k];
    const auto c = drift_config(eps, opt.p, opt.q, opt.tau_ratio, opt.gamma, opt.T, opt.steps,
                                opt.steps_per_eps);
    t.rows[k] = {eps, {max_length_drift(run(c))}};
  });
  t.finalize();

  const auto c = drift_config(opt.trace_eps, opt.p, opt.q, opt.tau_ratio, opt.gamma, opt.trace_T,
                              opt.trace_steps, opt.steps_per_eps);
  const auto r = run(c);
  out.trace_times = r.times;
  for (const auto& m : r.states) out.trace_norms.push_back(norm(m));
  return out;
}

ErrorTable exp_hmm_error(const HmmErrorOptions& opt) {
  ErrorTable t;
  t.name = "hmm_error";
  t.param_name = "eps";
  t.columns = {"err"};
  t.meta = {{"field", "circular"}, {"M0", "diag"}, {"gamma", "0"},
            {"p", std::to_string(opt.p)}, {"q", std::to_string(opt.q)},
            {"tau_over_eps", num(opt.tau_ratio)}, {"T", num(opt.T)},
            {"steps", std::to_string(opt.steps)}};
  t.rows.resize(opt.eps_list.size());
  parallel_for(opt.eps_list.size(), opt.threads, [&](std::size_t k) {
    const double eps = opt.eps_list[k];
    const auto c = drift_config(eps, opt.p, opt.q, opt.tau_ratio, 0.0, opt.T, opt.steps,
                                opt.steps_per_eps);
    const auto r = run(c);
    EffectiveConfig e;
    e.gamma = 0.0;
    e.T = c.T;
    e.dt = c.macro_dt;
    e.field = c.field;
    e.m0 = c.m0;
    const auto bar = effective_solve(e);
    double err = 0.0;
    for (std::size_t n = 0; n < r.states.size(); ++n) {
      err = std::fmax(err, distance(r.states[n], bar.states[n]));
    }
    t.rows[k] = {eps, {err}};
  });
  t.finalize();
  return t;
}

EfficiencyResult exp_efficiency(const EfficiencyOptions& opt) {
  EfficiencyResult out;
  HmmConfig& c = out.cfg;
  c.eps = opt.eps;
  c.tau = 5.0 * opt.eps;
  c.T = 2.0 * std::numbers::pi;
  c.macro_dt = c.T / 20.0;
  c.micro_dt = window_step(c.tau, opt.eps, opt.steps_per_eps);
  c.gamma = 1.0;
  c.field = make_field(NamedField::Circular);
  c.m0 = {1.0, 0.0, 0.0};
  c.flux_mode = opt.flux_mode;
  out.hmm_evals = run(c).micro_rhs_evals;

  DnsConfig d;
  d.eps = c.eps;
  d.gamma = c.gamma;
  d.T = c.T;
  d.dt = aligned_dns_dt(c.macro_dt, c.eps);
  d.field = c.field;
  d.m0 = c.m0;
  out.dns_evals = dns_single(d).rhs_evals;
  return out;
}

ChainConfig chain_experiment_config(double J) {
  ChainConfig c;
  c.J = J;
  c.initial = [](double x) {
    return Vec3{std::sin(2.0 * std::numbers::pi * x), std::cos(2.0 * std::numbers::pi * x), 0.0};
  };
  return c;
}

double ChainComparison::max_difference(std::size_t snapshot) const {
  double d = 0.0;
  for (std::size_t I = 0; I < hmm.at(snapshot).size(); ++I) {
    d = std::fmax(d, distance(hmm[snapshot][I], dns_macro[snapshot][I]));
  }
  return d;
}

ChainComparison exp_chain(const ChainConfig& cfg, const std::vector<double>& snapshot_times,
                          double dns_dt) {
  ChainComparison out;
  out.cfg = cfg;
  out.snapshot_times = snapshot_times;
  const auto h = chain_run(cfg);
  out.hmm_evals = h.micro_rhs_evals;

  const double t_last = *std::max_element(snapshot_times.begin(), snapshot_times.end());
  const double span = t_last + 0.5 * cfg.tau;
  const ChainTrajectory d = dns_chain(cfg, dns_dt, span, 1);
  for (double t : snapshot_times) {
    const long n = step_count(0.0, t, cfg.macro_dt);
    if (n >= static_cast<long>(h.states.size())) {
      throw_parameter("snapshot time " + num(t) + " is beyond the macro run");
    }
    out.hmm.push_back(h.states[n]);
    const long k = step_count(0.0, t, dns_dt);
    out.dns.push_back(d.states[k]);
    MacroChainState avg(static_cast<std::size_t>(cfg.L));
    for (long I = 0; I < cfg.L; ++I) {
      avg[I] = t == 0.0 ? macro_average(d.states[0], I, cfg) : macro_average(d, I, t, cfg);
    }
    out.dns_macro.push_back(std::move(avg));
  }
  return out;
}

ChainSteadyState exp_chain_steady(const ChainConfig& cfg, double dns_dt) {
  const Vec3 z{0.0, 0.0, 1.0};
  ChainSteadyState out;
  const auto h = chain_run(cfg);
  for (const auto& M : h.states.back()) out.hmm_max_dist = std::fmax(out.hmm_max_dist, distance(M, z));
  const long n = step_count(0.0, cfg.T, dns_dt);
  const auto d = dns_chain(cfg, dns_dt, cfg.T, n);
  for (const auto& m : d.states.back()) out.dns_max_dist = std::fmax(out.dns_max_dist, distance(m, z));
  return out;
}

}  // namespace llhmm
