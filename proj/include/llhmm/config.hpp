#pragma once

#include "llhmm/experiments.hpp"
#include "llhmm/hmm_chain.hpp"
#include "llhmm/hmm_single.hpp"
#include "llhmm/reference.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace llhmm {

/// Which defaults apply and which invariants are checked.
enum class ConfigScope { Kernel, Single, Chain, Convergence };

/// Everything a CLI invocation needs, after file values, flag overrides and
/// validation.
struct RunConfig {
  ConfigScope scope = ConfigScope::Single;
  /// Effective key/value pairs in key order, recorded in CSV headers.
  std::vector<std::pair<std::string, std::string>> entries;

  HmmConfig hmm;
  DnsConfig dns;
  EffectiveConfig effective;
  ChainConfig chain;

  int kernel_p = 5;
  int kernel_q = 4;
  std::string field = "circular";
  std::string out = "-";
  unsigned threads = 1;
  long dns_stride = 1;
  std::vector<double> snapshots;
  std::vector<double> eps_list;
  std::vector<int> q_list;
  UpscalingMode mode = UpscalingMode::Tied;
  double tau_fixed = 0.1;
  double phase = 0.125;
  int sweep_kernel_p = 1;  // kernel of the eps sweeps
  int sweep_kernel_q = 7;
};

/// Keys accepted in config files and as flags.
const std::vector<std::string>& config_keys();

/// Reads `key = value` lines ('#' starts a comment) from `path` (skipped when
/// empty), applies `flags` on top, and validates the result for `scope`.
/// Errors: Error{Parse} (index = line number, 0 for flags) for malformed
/// lines, unknown or repeated keys and unreadable values; Error{Validation}
/// naming the violated invariant.
RunConfig parse_config(const std::string& path, const std::map<std::string, std::string>& flags,
                       ConfigScope scope);

/// Same, reading the file contents from a string.
RunConfig parse_config_text(const std::string& text,
                            const std::map<std::string, std::string>& flags, ConfigScope scope);

}  // namespace llhmm
