#include "llhmm/field.hpp"

#include "llhmm/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace llhmm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Vec3 kEz{0.0, 0.0, 1.0};
}  // namespace

FieldSpec make_field(NamedField kind, const Vec3& h) {
  switch (kind) {
    case NamedField::Constant:
      return {"constant", [h](double, double) { return h; }, [h](double) { return h; }};
    case NamedField::Circular:
      return {"circular",
              [](double, double z) {
                return kEz + Vec3{std::sin(kTwoPi * z), std::cos(kTwoPi * z), 0.0};
              },
              [](double) { return kEz; }};
    case NamedField::CircularCos:
      return {"circular_cos",
              [](double, double z) {
                const double c = std::cos(kTwoPi * z);
                return kEz + Vec3{c, c, 0.0};
              },
              [](double) { return kEz; }};
    case NamedField::Squared:
      return {"squared",
              [](double, double z) {
                const double s = std::sin(kTwoPi * z);
                const double c = std::cos(kTwoPi * z);
                return kEz + Vec3{s * s, c * c, 0.0};
              },
              [](double) { return Vec3{0.5, 0.5, 1.0}; }};
    case NamedField::ChainPulse:
      return {"chain_pulse",
              [](double t, double z) {
                const double c = std::cos(kTwoPi * z);
                return (1.0 + std::cos(0.43 * t) + c * c) * kEz;
              },
              [](double t) { return (1.5 + std::cos(0.43 * t)) * kEz; }};
  }
  throw_parameter("unknown field kind");
}

FieldSpec field_from_name(std::string_view name, const Vec3& h) {
  if (name == "constant") return make_field(NamedField::Constant, h);
  if (name == "circular") return make_field(NamedField::Circular);
  if (name == "circular_cos") return make_field(NamedField::CircularCos);
  if (name == "squared") return make_field(NamedField::Squared);
  if (name == "chain_pulse") return make_field(NamedField::ChainPulse);
  throw_parameter("unknown field '" + std::string(name) +
                  "' (expected constant|circular|circular_cos|squared|chain_pulse)");
}

Vec3 eval_two_scale(const FieldSpec& f, double t, double eps) {
  if (!(eps > 0.0)) throw_parameter("eps must be positive");
  return f.value(t, t / eps);
}

Vec3 effective_by_quadrature(const FieldSpec& f, double t, int nodes) {
  Vec3 sum;
  for (int i = 0; i < nodes; ++i) sum += f.value(t, static_cast<double>(i) / nodes);
  return sum / static_cast<double>(nodes);
}

Vec3 effective(const FieldSpec& f, double t) {
  if (f.mean) return f.mean(t);
  return effective_by_quadrature(f, t);
}

}  // namespace llhmm
