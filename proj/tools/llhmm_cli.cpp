#include "llhmm/config.hpp"
#include "llhmm/csv.hpp"
#include "llhmm/error.hpp"
#include "llhmm/experiments.hpp"
#include "llhmm/reference.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>

using namespace llhmm;

namespace {

std::string dashed(std::string key) {
  for (auto& ch : key) {
    if (ch == '_') ch = '-';
  }
  return key;
}

// Output sink: stdout for "-", else the named file.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error(ErrorCode::Parameter, "cannot write " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string stem_of(const std::string& out) {
  if (out == "-") {
    throw Error(ErrorCode::Validation, "out must be a file path for multi-file outputs");
  }
  const auto n = out.size();
  return n > 4 && out.compare(n - 4, 4, ".csv") == 0 ? out.substr(0, n - 4) : out;
}

void write_table(const ErrorTable& t, const RunConfig& rc, std::ostream& os) {
  CsvWriter w(os);
  w.meta("experiment", t.name);
  w.meta(t.meta);
  w.meta(rc.entries);
  std::vector<std::string> header{t.param_name};
  header.insert(header.end(), t.columns.begin(), t.columns.end());
  w.header(header);
  for (const auto& r : t.rows) {
    std::vector<double> v{r.param};
    v.insert(v.end(), r.errors.begin(), r.errors.end());
    w.row(v);
  }
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    w.comment("slope " + t.columns[c] + " = " + format_number(t.slopes[c]));
  }
}

void write_vectors(const std::vector<double>& times, const std::vector<Vec3>& states,
                   const RunConfig& rc, const std::string& what, std::ostream& os, long stride) {
  CsvWriter w(os);
  w.meta("output", what);
  w.meta(rc.entries);
  w.header({"time", "mx", "my", "mz"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (static_cast<long>(i) % stride != 0 && i + 1 != times.size()) continue;
    w.row({times[i], states[i].x, states[i].y, states[i].z});
  }
}

int kernel_check(const RunConfig& rc) {
  const KernelSpec k = build_kernel(rc.kernel_p, rc.kernel_q);
  const double tau = rc.hmm.tau;
  Sink sink(rc.out);
  CsvWriter w(sink.stream());
  w.meta("output", "kernel");
  w.meta(rc.entries);
  w.header({"t", "K"});
  constexpr int kSamples = 400;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = tau * (static_cast<double>(i) / kSamples - 0.5);
    w.row({t, eval_scaled(k, tau, t)});
  }
  for (int r = 0; r <= k.p + 1; ++r) {
    w.comment("moment " + std::to_string(r) + " = " + format_number(moment(k, r)));
  }
  return 0;
}

int single_run(const RunConfig& rc) {
  const MacroTrajectory tr = run(rc.hmm);
  Sink sink(rc.out);
  CsvWriter w(sink.stream());
  w.meta("output", "hmm");
  w.meta(rc.entries);
  w.meta("micro_rhs_evals", std::to_string(tr.micro_rhs_evals));
  w.header({"time", "Mx", "My", "Mz", "flux_x", "flux_y", "flux_z", "iters"});
  for (std::size_t n = 0; n < tr.times.size(); ++n) {
    const Vec3& M = tr.states[n];
    const Vec3 F = n == 0 ? Vec3{} : tr.flux[n - 1];
    const double it = n == 0 ? 0.0 : tr.iterations[n - 1];
    w.row({tr.times[n], M.x, M.y, M.z, F.x, F.y, F.z, it});
  }
  return 0;
}

int single_dns(const RunConfig& rc) {
  const Trajectory tr = dns_single(rc.dns);
  Sink sink(rc.out);
  write_vectors(tr.times, tr.states, rc, "dns", sink.stream(), rc.dns_stride);
  return 0;
}

int single_effective(const RunConfig& rc) {
  const Trajectory tr = effective_solve(rc.effective);
  Sink sink(rc.out);
  write_vectors(tr.times, tr.states, rc, "effective", sink.stream(), 1);
  return 0;
}

void write_macro(const std::string& path, const MacroChainState& M, const ChainConfig& c,
                 const RunConfig& rc, const std::string& what, double t) {
  Sink sink(path);
  CsvWriter w(sink.stream());
  w.meta("output", what);
  w.meta("time", format_number(t));
  w.meta(rc.entries);
  w.header({"I", "X", "Mx", "My", "Mz"});
  for (long I = 0; I < c.L; ++I) {
    w.row({static_cast<double>(I), static_cast<double>(I) * c.macro_spacing(), M[I].x, M[I].y,
           M[I].z});
  }
}

int chain_run_cmd(const RunConfig& rc) {
  const std::string stem = stem_of(rc.out);
  const double dns_dt = rc.dns.dt;
  const ChainComparison cmp = exp_chain(rc.chain, rc.snapshots, dns_dt);
  const ChainConfig& c = rc.chain;
  for (std::size_t k = 0; k < cmp.snapshot_times.size(); ++k) {
    const double t = cmp.snapshot_times[k];
    const std::string base = stem + "_" + std::to_string(k);
    write_macro(base + ".csv", cmp.hmm[k], c, rc, "chain_hmm", t);
    write_macro(base + "_dns_macro.csv", cmp.dns_macro[k], c, rc, "chain_dns_macro", t);
    Sink sink(base + "_dns.csv");
    CsvWriter w(sink.stream());
    w.meta("output", "chain_dns");
    w.meta("time", format_number(t));
    w.meta(rc.entries);
    w.header({"i", "x", "mx", "my", "mz"});
    for (long i = 0; i < c.N; ++i) {
      const Vec3& m = cmp.dns[k][i];
      w.row({static_cast<double>(i), static_cast<double>(i) * c.dx, m.x, m.y, m.z});
    }
  }
  return 0;
}

int chain_dns_cmd(const RunConfig& rc) {
  const ChainConfig& c = rc.chain;
  const ChainTrajectory d = dns_chain(c, rc.dns.dt, c.T, 1);
  Sink sink(rc.out);
  CsvWriter w(sink.stream());
  w.meta("output", "chain_dns");
  w.meta(rc.entries);
  w.header({"time", "i", "x", "mx", "my", "mz"});
  for (double t : rc.snapshots) {
    const auto& s = d.states[step_count(0.0, t, rc.dns.dt)];
    for (long i = 0; i < c.N; ++i) {
      w.row({t, static_cast<double>(i), static_cast<double>(i) * c.dx, s[i].x, s[i].y, s[i].z});
    }
  }
  return 0;
}

std::vector<double> eps_or(const RunConfig& rc, std::vector<double> fallback) {
  return rc.eps_list.empty() ? fallback : rc.eps_list;
}

int conv_tail(const RunConfig& rc) {
  TailOptions o;
  o.eps_list = eps_or(rc, o.eps_list);
  o.threads = rc.threads;
  Sink sink(rc.out);
  write_table(exp_tail(o), rc, sink.stream());
  return 0;
}

int conv_upscaling(const RunConfig& rc) {
  UpscalingOptions o;
  o.mode = rc.mode;
  o.eps_list = eps_or(rc, o.eps_list);
  o.q_list = rc.q_list;
  o.p = rc.sweep_kernel_p;
  o.tau_fixed = rc.tau_fixed;
  o.phase = rc.phase;
  o.threads = rc.threads;
  Sink sink(rc.out);
  write_table(exp_upscaling(o), rc, sink.stream());
  return 0;
}

int conv_amplitude(const RunConfig& rc) {
  AmplitudeOptions o;
  o.eps_list = eps_or(rc, o.eps_list);
  o.p = rc.sweep_kernel_p;
  o.q = rc.sweep_kernel_q;
  o.gamma = rc.hmm.gamma;
  o.threads = rc.threads;
  const AmplitudeResult a = exp_amplitude(o);
  const std::string stem = stem_of(rc.out);
  {
    Sink sink(stem + ".csv");
    write_table(a.sweep, rc, sink.stream());
  }
  Sink sink(stem + "_trace.csv");
  CsvWriter w(sink.stream());
  w.meta("output", "amplitude_trace");
  w.meta("eps", format_number(o.trace_eps));
  w.meta(rc.entries);
  w.header({"n", "time", "norm"});
  for (std::size_t n = 0; n < a.trace_times.size(); ++n) {
    w.row({static_cast<double>(n), a.trace_times[n], a.trace_norms[n]});
  }
  return 0;
}

int conv_hmm_error(const RunConfig& rc) {
  HmmErrorOptions o;
  o.eps_list = eps_or(rc, o.eps_list);
  o.p = rc.sweep_kernel_p;
  o.q = rc.sweep_kernel_q;
  o.threads = rc.threads;
  Sink sink(rc.out);
  write_table(exp_hmm_error(o), rc, sink.stream());
  return 0;
}

int conv_full(const RunConfig& rc) {
  const HmmConfig& h = rc.hmm;
  FullSolutionOptions o;
  o.field = rc.field;
  o.gamma = h.gamma;
  o.eps = h.eps;
  o.tau_ratio = h.tau / h.eps;
  o.T = h.T;
  o.steps = static_cast<int>(step_count(0.0, h.T, h.macro_dt));
  o.p = rc.kernel_p;
  o.q = rc.kernel_q;
  o.steps_per_eps = h.eps / h.micro_dt;
  o.m0 = h.m0;
  const FullSolution s = exp_full_solution(o);
  Sink sink(rc.out);
  CsvWriter w(sink.stream());
  w.meta("output", "full_solution");
  w.meta(rc.entries);
  w.meta("hmm_rhs_evals", std::to_string(s.hmm_evals));
  w.meta("dns_rhs_evals", std::to_string(s.dns_evals));
  w.header({"time", "hmm_x", "hmm_y", "hmm_z", "dns_x", "dns_y", "dns_z", "eff_x", "eff_y",
            "eff_z"});
  for (std::size_t n = 0; n < s.times.size(); ++n) {
    const Vec3 &a = s.hmm[n], &b = s.dns[n], &c = s.effective[n];
    w.row({s.times[n], a.x, a.y, a.z, b.x, b.y, b.z, c.x, c.y, c.z});
  }
  return 0;
}

struct Leaf {
  CLI::App* app;
  ConfigScope scope;
  std::function<int(const RunConfig&)> action;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous multiscale solver for Landau-Lifschitz spin dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> values;
  std::vector<Leaf> leaves;

  const auto add_leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                            ConfigScope scope, std::function<int(const RunConfig&)> action) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->add_option("--config", config_path, "key = value config file");
    for (const auto& key : config_keys()) {
      sub->add_option_function<std::string>(
          "--" + dashed(key), [&values, key](const std::string& v) { values[key] = v; },
          "override " + key);
    }
    leaves.push_back({sub, scope, std::move(action)});
  };

  add_leaf(&app, "kernel-check", "sample K_tau and report its moments", ConfigScope::Kernel,
           kernel_check);

  CLI::App* single = app.add_subcommand("single", "single spin solvers");
  single->require_subcommand(1);
  add_leaf(single, "run", "multiscale macro trajectory", ConfigScope::Single, single_run);
  add_leaf(single, "dns", "direct simulation of the fast problem", ConfigScope::Single,
           single_dns);
  add_leaf(single, "effective", "averaged equation", ConfigScope::Single, single_effective);

  CLI::App* chain = app.add_subcommand("chain", "spin chain solvers");
  chain->require_subcommand(1);
  add_leaf(chain, "run", "multiscale chain vs direct simulation at snapshot times",
           ConfigScope::Chain, chain_run_cmd);
  add_leaf(chain, "dns", "direct chain simulation at snapshot times", ConfigScope::Chain,
           chain_dns_cmd);

  CLI::App* conv = app.add_subcommand("convergence", "error sweeps");
  conv->require_subcommand(1);
  add_leaf(conv, "tail", "expansion of the micro solution in eps", ConfigScope::Convergence,
           conv_tail);
  add_leaf(conv, "upscaling", "flux error over eps and q", ConfigScope::Convergence,
           conv_upscaling);
  add_leaf(conv, "amplitude", "length drift of the macro solution", ConfigScope::Convergence,
           conv_amplitude);
  add_leaf(conv, "full", "multiscale, direct and averaged trajectories", ConfigScope::Convergence,
           conv_full);
  add_leaf(conv, "hmm-error", "macro error against the discrete averaged scheme",
           ConfigScope::Convergence, conv_hmm_error);

  CLI11_PARSE(app, argc, argv);

  for (const auto& leaf : leaves) {
    if (!leaf.app->parsed()) continue;
    try {
      const RunConfig rc = parse_config(config_path, values, leaf.scope);
      return leaf.action(rc);
    } catch (const Error& e) {
      std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
      return e.code() == ErrorCode::Parse || e.code() == ErrorCode::Validation ? 2 : 3;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 3;
    }
  }
  return 1;
}
