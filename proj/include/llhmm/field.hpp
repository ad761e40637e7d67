#pragma once

#include "llhmm/vec3.hpp"

#include <functional>
#include <string>
#include <string_view>

namespace llhmm {

/// Two-scale external field H(t, z), 1-periodic in the fast argument z. The
/// physical field at time t is H(t, t / eps).
struct FieldSpec {
  std::string name;
  std::function<Vec3(double t, double z)> value;
  /// Closed-form \int_0^1 H(t, s) ds when known; empty otherwise.
  std::function<Vec3(double t)> mean;
};

enum class NamedField { Constant, Circular, CircularCos, Squared, ChainPulse };

/// Fields used by the experiments:
///   constant      H = h
///   circular      (0,0,1) + (sin 2 pi z, cos 2 pi z, 0)
///   circular_cos  (0,0,1) + (cos 2 pi z, cos 2 pi z, 0)
///   squared       (0,0,1) + (sin^2 2 pi z, cos^2 2 pi z, 0)
///   chain_pulse   (1 + cos(0.43 t) + cos^2 2 pi z) (0,0,1)
FieldSpec make_field(NamedField kind, const Vec3& h = {0.0, 0.0, 1.0});

/// Parses a config name (`constant`, `circular`, ...). Throws ParameterError
/// on unknown names.
FieldSpec field_from_name(std::string_view name, const Vec3& h = {0.0, 0.0, 1.0});

/// H(t, t / eps). Throws ParameterError for eps <= 0.
Vec3 eval_two_scale(const FieldSpec& f, double t, double eps);

/// Period average \int_0^1 H(t, s) ds: the closed form when available, else a
/// 1000-node periodic trapezoidal rule (spectrally accurate for smooth H).
Vec3 effective(const FieldSpec& f, double t);

/// Period average by quadrature only, ignoring any closed form.
Vec3 effective_by_quadrature(const FieldSpec& f, double t, int nodes = 1000);

}  // namespace llhmm
