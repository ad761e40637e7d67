#include "llhmm/config.hpp"

#include "llhmm/csv.hpp"
#include "llhmm/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace llhmm {

namespace {

struct Value {
  std::string text;
  long line = 0;  // 0: default or flag
  bool from_flag = false;
};

using Table = std::map<std::string, Value>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

Table defaults(ConfigScope scope) {
  const std::string two_pi = format_number(2.0 * std::numbers::pi);
  const std::string dt_macro = format_number(2.0 * std::numbers::pi / 20.0);
  Table t;
  const auto set = [&](const char* k, std::string v) { t[k] = Value{std::move(v)}; };
  set("eps", "0.01");
  set("tau", "0.05");
  set("micro_dt", "0.0001");
  set("beta", "1");
  set("gamma", "1");
  set("kernel_p", "5");
  set("kernel_q", "4");
  set("m0", "1,0,0");
  set("field_h", "0,0,1");
  set("fp_tol", "1e-12");
  set("fp_max_iter", "100");
  set("macro_fp_tol", "1e-10");
  set("macro_fp_max_iter", "50");
  set("flux_mode", "resolve");
  set("normalize_micro_init", "false");
  set("dns_dt", "auto");
  set("dns_stride", "1");
  set("out", "-");
  set("threads", "1");
  set("N", "100");
  set("L", "10");
  set("r", "5");
  set("ell", "5");
  set("dx", "0.01");
  set("J", "1");
  set("kernel_space_p", "5");
  set("kernel_space_q", "4");
  set("initial", "winding");
  set("snapshots", "0,0.3,0.75,1.5");
  set("eps_list", "");
  set("q_list", "-1,0,2,4,7");
  set("mode", "tied");
  set("tau_fixed", "0.1");
  set("phase", "0.125");
  set("sweep_kernel_p", "1");
  set("sweep_kernel_q", "7");
  if (scope == ConfigScope::Chain) {
    set("macro_dt", "0.075");
    set("T", "1.5");
    set("field", "chain_pulse");
  } else {
    set("macro_dt", dt_macro);
    set("T", two_pi);
    set("field", "circular");
  }
  return t;
}

[[noreturn]] void bad_value(const std::string& key, const Value& v, const std::string& what) {
  std::ostringstream os;
  if (v.from_flag) {
    os << "flag --" << key << ": " << what << " '" << v.text << "'";
  } else {
    os << "line " << v.line << ": " << what << " '" << v.text << "' for key " << key;
  }
  throw Error(ErrorCode::Parse, os.str(), v.line);
}

class Reader {
 public:
  explicit Reader(const Table& t) : t_(t) {}

  const Value& raw(const std::string& k) const { return t_.at(k); }
  const std::string& str(const std::string& k) const { return raw(k).text; }

  double real(const std::string& k) const { return parse_real(k, raw(k), str(k)); }

  long integer(const std::string& k) const {
    const std::string& s = str(k);
    long v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
      bad_value(k, raw(k), "expected an integer, got");
    }
    return v;
  }

  bool boolean(const std::string& k) const {
    const std::string& s = str(k);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    bad_value(k, raw(k), "expected true or false, got");
  }

  std::vector<double> reals(const std::string& k) const {
    std::vector<double> out;
    const std::string& s = str(k);
    if (trim(s).empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(k, raw(k), trim(item)));
    return out;
  }

  Vec3 vec(const std::string& k) const {
    const auto v = reals(k);
    if (v.size() != 3) bad_value(k, raw(k), "expected three comma-separated numbers, got");
    return {v[0], v[1], v[2]};
  }

 private:
  static double parse_real(const std::string& k, const Value& v, const std::string& s) {
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(x)) {
      bad_value(k, v, "expected a number, got");
    }
    return x;
  }

  const Table& t_;
};

KernelSpec kernel_or_invalid(int p, int q, const char* which) {
  try {
    return build_kernel(p, q);
  } catch (const Error& e) {
    throw Error(ErrorCode::Validation, std::string(which) + ": " + e.what());
  }
}

FieldSpec field_or_invalid(const std::string& name, const Vec3& h) {
  try {
    return field_from_name(name, h);
  } catch (const Error& e) {
    throw Error(ErrorCode::Validation, e.what());
  }
}

void read_file_text(const std::string& text, Table& table) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, long> seen;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": expected key = value",
                  lineno);
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": missing key", lineno);
    }
    if (!table.contains(key)) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": unknown key " + key,
                  lineno);
    }
    if (const auto it = seen.find(key); it != seen.end()) {
      throw Error(ErrorCode::Parse,
                  "line " + std::to_string(lineno) + ": key " + key + " repeats line " +
                      std::to_string(it->second),
                  lineno);
    }
    seen[key] = lineno;
    table[key] = Value{value, lineno, false};
  }
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, v] : defaults(ConfigScope::Single)) k.push_back(name);
    return k;
  }();
  return keys;
}

RunConfig parse_config_text(const std::string& text,
                            const std::map<std::string, std::string>& flags, ConfigScope scope) {
  Table table = defaults(scope);
  read_file_text(text, table);
  for (const auto& [key, value] : flags) {
    if (!table.contains(key)) throw Error(ErrorCode::Parse, "unknown flag --" + key, 0);
    table[key] = Value{trim(value), 0, true};
  }

  const Reader rd(table);
  RunConfig rc;
  rc.scope = scope;
  for (const auto& [k, v] : table) rc.entries.emplace_back(k, v.text);

  rc.kernel_p = static_cast<int>(rd.integer("kernel_p"));
  rc.kernel_q = static_cast<int>(rd.integer("kernel_q"));
  rc.field = rd.str("field");
  rc.out = rd.str("out");
  const long threads = rd.integer("threads");
  if (threads < 1) throw Error(ErrorCode::Validation, "threads must be at least 1");
  rc.threads = static_cast<unsigned>(threads);
  rc.dns_stride = rd.integer("dns_stride");
  if (rc.dns_stride < 1) throw Error(ErrorCode::Validation, "dns_stride must be at least 1");
  rc.snapshots = rd.reals("snapshots");
  rc.eps_list = rd.reals("eps_list");
  for (double q : rd.reals("q_list")) {
    if (q != std::floor(q)) bad_value("q_list", rd.raw("q_list"), "expected integers, got");
    rc.q_list.push_back(static_cast<int>(q));
  }
  const std::string mode = rd.str("mode");
  if (mode == "tied") {
    rc.mode = UpscalingMode::Tied;
  } else if (mode == "fixed") {
    rc.mode = UpscalingMode::Fixed;
  } else {
    bad_value("mode", rd.raw("mode"), "expected tied or fixed, got");
  }
  rc.tau_fixed = rd.real("tau_fixed");
  rc.phase = rd.real("phase");
  rc.sweep_kernel_p = static_cast<int>(rd.integer("sweep_kernel_p"));
  rc.sweep_kernel_q = static_cast<int>(rd.integer("sweep_kernel_q"));
  kernel_or_invalid(rc.sweep_kernel_p, rc.sweep_kernel_q, "sweep kernel");

  const KernelSpec kernel = kernel_or_invalid(rc.kernel_p, rc.kernel_q, "kernel");
  const FieldSpec field = field_or_invalid(rc.field, rd.vec("field_h"));

  HmmConfig& h = rc.hmm;
  h.eps = rd.real("eps");
  h.tau = rd.real("tau");
  h.macro_dt = rd.real("macro_dt");
  h.micro_dt = rd.real("micro_dt");
  h.beta = rd.real("beta");
  h.gamma = rd.real("gamma");
  h.T = rd.real("T");
  h.kernel = kernel;
  h.field = field;
  h.m0 = rd.vec("m0");
  h.fp_tol = rd.real("fp_tol");
  h.fp_max_iter = static_cast<int>(rd.integer("fp_max_iter"));
  h.macro_fp_tol = rd.real("macro_fp_tol");
  h.macro_fp_max_iter = static_cast<int>(rd.integer("macro_fp_max_iter"));
  h.normalize_micro_init = rd.boolean("normalize_micro_init");
  const std::string flux = rd.str("flux_mode");
  if (flux == "resolve") {
    h.flux_mode = FluxMode::Resolve;
  } else if (flux == "linear") {
    h.flux_mode = FluxMode::Linear;
  } else {
    bad_value("flux_mode", rd.raw("flux_mode"), "expected resolve or linear, got");
  }

  const std::string dns_dt = rd.str("dns_dt");
  const double ddt = dns_dt == "auto" ? aligned_dns_dt(h.macro_dt, h.eps) : rd.real("dns_dt");

  DnsConfig& d = rc.dns;
  d.eps = h.eps;
  d.beta = h.beta;
  d.gamma = h.gamma;
  d.T = h.T;
  d.dt = ddt;
  d.field = field;
  d.m0 = h.m0;
  d.fp_tol = h.fp_tol;
  d.fp_max_iter = h.fp_max_iter;

  EffectiveConfig& e = rc.effective;
  e.beta = h.beta;
  e.gamma = h.gamma;
  e.T = h.T;
  e.dt = h.macro_dt / 100.0;
  e.field = field;
  e.m0 = h.m0;
  e.fp_tol = h.fp_tol;
  e.fp_max_iter = h.fp_max_iter;

  ChainConfig& c = rc.chain;
  c.N = rd.integer("N");
  c.L = rd.integer("L");
  c.r = rd.integer("r");
  c.ell = rd.integer("ell");
  c.dx = rd.real("dx");
  c.J = rd.real("J");
  c.eps = h.eps;
  c.tau = h.tau;
  c.macro_dt = h.macro_dt;
  c.micro_dt = h.micro_dt;
  c.beta = h.beta;
  c.gamma = h.gamma;
  c.T = h.T;
  c.kernel_time = kernel;
  c.kernel_space = kernel_or_invalid(static_cast<int>(rd.integer("kernel_space_p")),
                                     static_cast<int>(rd.integer("kernel_space_q")),
                                     "spatial kernel");
  c.field = field;
  c.fp_tol = h.fp_tol;
  c.fp_max_iter = h.fp_max_iter;
  c.macro_fp_tol = h.macro_fp_tol;
  c.macro_fp_max_iter = h.macro_fp_max_iter;
  c.threads = rc.threads;
  const std::string initial = rd.str("initial");
  if (initial == "winding") {
    c.initial = chain_experiment_config().initial;
  } else if (initial == "uniform") {
    const Vec3 u = h.m0;
    c.initial = [u](double) { return u; };
  } else {
    bad_value("initial", rd.raw("initial"), "expected winding or uniform, got");
  }

  switch (scope) {
    case ConfigScope::Kernel:
      if (!(h.tau > 0.0)) throw Error(ErrorCode::Validation, "tau must be positive");
      break;
    case ConfigScope::Single:
    case ConfigScope::Convergence:
      h.validate();
      if (dns_dt != "auto") d.validate();
      break;
    case ConfigScope::Chain:
      c.validate();
      if (!(ddt > 0.0) || ddt > c.eps / 20.0 * (1.0 + 1e-12)) {
        throw Error(ErrorCode::Validation, "dns dt must satisfy 0 < dt <= eps/20");
      }
      for (double t : rc.snapshots) {
        if (t < 0.0 || t > c.T * (1.0 + 1e-12)) {
          throw Error(ErrorCode::Validation, "snapshots must lie in [0, T]");
        }
        try {
          step_count(0.0, t, c.macro_dt);
        } catch (const Error&) {
          throw Error(ErrorCode::Validation, "snapshots must be multiples of macro_dt");
        }
      }
      break;
  }
  return rc;
}

RunConfig parse_config(const std::string& path, const std::map<std::string, std::string>& flags,
                       ConfigScope scope) {
  std::string text;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Parse, "cannot read config file " + path, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_config_text(text, flags, scope);
}

}  // namespace llhmm
