#include "llhmm/reference.hpp"

#include "llhmm/error.hpp"

#include <cmath>

namespace llhmm {

void DnsConfig::validate() const {
  if (!(eps > 0.0)) throw Error(ErrorCode::Validation, "eps must be positive");
  if (!(dt > 0.0) || dt > eps / 20.0 * (1.0 + 1e-12)) {
    throw Error(ErrorCode::Validation, "dns dt must satisfy 0 < dt <= eps/20");
  }
  if (!(T > 0.0)) throw Error(ErrorCode::Validation, "T must be positive");
  if (!field.value) throw Error(ErrorCode::Validation, "field is not set");
}

Trajectory dns_single(const DnsConfig& cfg) {
  cfg.validate();
  const Rhs rhs = [&](double t, const Vec3& m) {
    return ll_rhs(m, eval_two_scale(cfg.field, t, cfg.eps), cfg.beta, cfg.gamma);
  };
  return integrate(rhs, 0.0, cfg.m0, cfg.T, cfg.dt, {cfg.dt, cfg.fp_tol, cfg.fp_max_iter});
}

Trajectory effective_solve(const EffectiveConfig& cfg) {
  if (!cfg.field.value) throw_parameter("field is not set");
  const Rhs rhs = [&](double t, const Vec3& m) {
    return ll_rhs(m, effective(cfg.field, t), cfg.beta, cfg.gamma);
  };
  return integrate(rhs, 0.0, cfg.m0, cfg.T, cfg.dt, {cfg.dt, cfg.fp_tol, cfg.fp_max_iter});
}

Trajectory scaled_micro(double t_a, double r_frac, const Vec3& M, double eps,
                        const FieldSpec& field, double dt) {
  if (!(eps > 0.0)) throw_parameter("eps must be positive");
  const Rhs rhs = [&](double theta, const Vec3& m) {
    return -eps * cross(m, field.value(eps * theta + t_a, theta + r_frac));
  };
  return integrate(rhs, 0.0, M, 1.0, dt, {dt, 1e-14, 100});
}

Vec3 m1_oracle(double theta, double t_a, double r_frac, const Vec3& M, const FieldSpec& field) {
  if (theta == 0.0) return {};
  constexpr double kNodesPerUnit = 2e4;
  const long n = std::max(1000L, static_cast<long>(std::ceil(std::fabs(theta) * kNodesPerUnit)));
  const double h = theta / static_cast<double>(n);
  Vec3 sum = 0.5 * (field.value(t_a, r_frac) + field.value(t_a, theta + r_frac));
  for (long i = 1; i < n; ++i) sum += field.value(t_a, static_cast<double>(i) * h + r_frac);
  return -cross(M, h * sum);
}

}  // namespace llhmm
