#pragma once

#include "llhmm/field.hpp"
#include "llhmm/midpoint.hpp"
#include "llhmm/vec3.hpp"

namespace llhmm {

/// Direct simulation of the full fast single-spin problem. dt must resolve the
/// fast period with at least 20 steps.
struct DnsConfig {
  double eps = 0.01;
  double beta = 1.0;
  double gamma = 0.0;
  double T = 1.0;
  double dt = 1e-4;
  FieldSpec field = make_field(NamedField::Circular);
  Vec3 m0{0.0, 0.0, 1.0};
  double fp_tol = 1e-12;
  int fp_max_iter = 100;

  void validate() const;
};

/// Full damped LL equation with the two-scale field H(t, t/eps).
Trajectory dns_single(const DnsConfig& cfg);

/// Settings for the averaged equation d/dt m = -beta m x Hbar - gamma m x (m x Hbar).
struct EffectiveConfig {
  double beta = 1.0;
  double gamma = 0.0;
  double T = 1.0;
  double dt = 1e-3;
  FieldSpec field = make_field(NamedField::Circular);
  Vec3 m0{0.0, 0.0, 1.0};
  double fp_tol = 1e-12;
  int fp_max_iter = 100;
};

/// Midpoint integration of the averaged equation. With dt equal to the macro
/// step this is the discrete averaged scheme the multiscale solution is
/// compared against; with a fine dt it approximates the exact average.
Trajectory effective_solve(const EffectiveConfig& cfg);

/// Micro problem on the fast time scale theta = t/eps:
///   d/dtheta m = -eps m x H(eps theta + t_a, theta + r_frac),  m(0) = M,
/// integrated over theta in [0, 1] with step dt.
Trajectory scaled_micro(double t_a, double r_frac, const Vec3& M, double eps,
                        const FieldSpec& field, double dt = 1e-4);

/// First-order term of the expansion m = M + eps m1 + O(eps^2):
///   m1(theta) = -\int_0^theta M x H(t_a, s + r_frac) ds,
/// by the composite trapezoidal rule (at least 2e4 nodes per unit theta).
Vec3 m1_oracle(double theta, double t_a, double r_frac, const Vec3& M, const FieldSpec& field);

}  // namespace llhmm
