#pragma once

#include "llhmm/hmm_chain.hpp"
#include "llhmm/hmm_single.hpp"

#include <string>
#include <utility>
#include <vector>

namespace llhmm {

/// Sweep results: one row per sweep value, one or more error columns, plus
/// least-squares log-log slopes per column.
struct ErrorTable {
  struct Row {
    double param = 0.0;
    std::vector<double> errors;
  };

  std::string name;
  std::string param_name;
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<Row> rows;
  std::vector<double> slopes;

  /// Sorts rows by the sweep value (descending) and refits every slope.
  void finalize();
  [[nodiscard]] std::vector<double> column(std::size_t c) const;
};

/// Least-squares slope of log y against log x. Needs at least two points;
/// throws Error{NonPositiveData} if any coordinate is not positive.
double fit_slope(const std::vector<std::pair<double, double>>& points);

struct TailOptions {
  std::vector<double> eps_list{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  double dt = 1e-4;        // step on the fast scale
  int sample_every = 10;   // first-order comparison on every n-th sample
  unsigned threads = 1;
};

/// Expansion of the rescaled micro solution for the circular field, M = e_z:
/// columns err_m0 = max |m - M| and err_m1 = max |m - (M + eps m1)|.
ErrorTable exp_tail(const TailOptions& opt = {});

enum class UpscalingMode { Tied, Fixed };

struct UpscalingOptions {
  UpscalingMode mode = UpscalingMode::Tied;
  std::vector<double> eps_list{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  std::vector<int> q_list{-1, 0, 2, 4, 7};
  int p = 1;
  double tau_ratio = 5.3;   // tied mode: tau = tau_ratio eps
  double tau_fixed = 0.1;   // fixed mode
  double phase = 0.125;     // sampling time t_a = phase * eps
  double steps_per_eps = 100.0;
  unsigned threads = 1;
};

/// |F(t_a, M) + M x Hbar| for M = e_z and the cos-cos field, one column per q.
ErrorTable exp_upscaling(const UpscalingOptions& opt = {});

struct FullSolutionOptions {
  std::string field = "circular";
  double gamma = 1.0;
  double eps = 0.01;
  double tau_ratio = 5.0;
  double T = 6.283185307179586;
  int steps = 20;
  int p = 5;
  int q = 4;
  double steps_per_eps = 100.0;
  Vec3 m0{1.0, 0.0, 0.0};
  int oracle_refine = 100;  // effective-equation oracle step = macro_dt / oracle_refine
};

/// Multiscale, direct and averaged solutions on the macro time grid.
struct FullSolution {
  HmmConfig cfg;
  std::vector<double> times;
  std::vector<Vec3> hmm;
  std::vector<Vec3> dns;
  std::vector<Vec3> effective;
  long hmm_evals = 0;
  long dns_evals = 0;

  [[nodiscard]] double max_hmm_vs_effective() const;
};

FullSolution exp_full_solution(const FullSolutionOptions& opt = {});

struct AmplitudeOptions {
  std::vector<double> eps_list{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  int p = 1;
  int q = 7;
  double tau_ratio = 5.3;
  double gamma = 1.0;
  double T = 1.0;
  int steps = 10;
  double trace_eps = 0.01;
  double trace_T = 6.283185307179586;
  int trace_steps = 20;
  double steps_per_eps = 100.0;
  unsigned threads = 1;
};

struct AmplitudeResult {
  ErrorTable sweep;  // eps, max_n ||M_n| - 1|
  std::vector<double> trace_times;
  std::vector<double> trace_norms;
};

/// Length drift of the macro solution from M_0 = (1,1,1)/sqrt(3), circular field.
AmplitudeResult exp_amplitude(const AmplitudeOptions& opt = {});

struct HmmErrorOptions {
  std::vector<double> eps_list{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  int p = 1;
  int q = 7;
  double tau_ratio = 5.3;
  double T = 1.0;
  int steps = 10;
  double steps_per_eps = 100.0;
  unsigned threads = 1;
};

/// max_n |M_n - mbar_n| against the midpoint scheme for the averaged equation
/// with the same macro step; undamped, circular field, M_0 = (1,1,1)/sqrt(3).
ErrorTable exp_hmm_error(const HmmErrorOptions& opt = {});

struct EfficiencyOptions {
  double eps = 1e-3;
  double steps_per_eps = 20.0;
  FluxMode flux_mode = FluxMode::Linear;
};

struct EfficiencyResult {
  HmmConfig cfg;
  long hmm_evals = 0;
  long dns_evals = 0;
  [[nodiscard]] double ratio() const {
    return static_cast<double>(dns_evals) / static_cast<double>(hmm_evals);
  }
};

/// Micro right-hand-side evaluations of the circular-field damped run
/// (tau = 5 eps, 20 macro steps to 2 pi) against direct simulation at eps/20.
EfficiencyResult exp_efficiency(const EfficiencyOptions& opt = {});

/// Chain test problem: 100 spins at dx = 0.01 with in-plane winding initial
/// data, 10 macro cells, r = ell = 5, pulsed field, beta = gamma = 1.
ChainConfig chain_experiment_config(double J = 1.0);

struct ChainComparison {
  ChainConfig cfg;
  std::vector<double> snapshot_times;
  std::vector<MacroChainState> hmm;        // macro values per snapshot
  std::vector<MacroChainState> dns_macro;  // kernel averages of the direct solution
  std::vector<ChainState> dns;             // direct solution per snapshot
  long hmm_evals = 0;

  [[nodiscard]] double max_difference(std::size_t snapshot) const;
};

/// HMM and direct simulation sampled at snapshot times (multiples of the
/// macro step, ending at cfg.T). The t = 0 average is spatial only.
ChainComparison exp_chain(const ChainConfig& cfg, const std::vector<double>& snapshot_times,
                          double dns_dt);

/// Largest distance from e_z over all macro values and all spins at cfg.T.
struct ChainSteadyState {
  double hmm_max_dist = 0.0;
  double dns_max_dist = 0.0;
};

ChainSteadyState exp_chain_steady(const ChainConfig& cfg, double dns_dt);

/// Largest step <= eps / 20 that divides span exactly.
double aligned_dns_dt(double span, double eps);

}  // namespace llhmm
