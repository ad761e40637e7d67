#include "doctest.h"
#include "llhmm/error.hpp"
#include "llhmm/field.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace llhmm;

namespace {
bool close(const Vec3& a, const Vec3& b, double tol) { return max_abs(a - b) <= tol; }
constexpr NamedField kAll[] = {NamedField::Constant, NamedField::Circular, NamedField::CircularCos,
                               NamedField::Squared, NamedField::ChainPulse};
}  // namespace

TEST_CASE("two-scale evaluation") {
  const FieldSpec c = make_field(NamedField::Circular);
  CHECK(close(eval_two_scale(c, 0.0, 0.01), {0, 1, 1}, 1e-15));
  CHECK(close(eval_two_scale(c, 0.0025, 0.01), {1, 0, 1}, 1e-12));
  const FieldSpec k = make_field(NamedField::Constant, {0.2, -0.1, 0.7});
  CHECK(close(eval_two_scale(k, 3.7, 0.02), {0.2, -0.1, 0.7}, 0.0));
  CHECK_THROWS_AS(eval_two_scale(c, 0.0, 0.0), Error);
  CHECK_THROWS_AS(eval_two_scale(c, 0.0, -1.0), Error);
}

TEST_CASE("closed-form means") {
  CHECK(close(effective(make_field(NamedField::Circular), 1.3), {0, 0, 1}, 1e-15));
  CHECK(close(effective(make_field(NamedField::Squared), 0.0), {0.5, 0.5, 1}, 1e-15));
  const double t = 0.8;
  CHECK(close(effective(make_field(NamedField::ChainPulse), t), {0, 0, 1.5 + std::cos(0.43 * t)},
              1e-14));
}

TEST_CASE("means agree with quadrature and fields are periodic and bounded") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
  for (auto kind : kAll) {
    const FieldSpec f = make_field(kind);
    CAPTURE(f.name);
    for (int i = 0; i < 10; ++i) {
      const double t = u(rng);
      CHECK(close(effective(f, t), effective_by_quadrature(f, t), 1e-10));
      const double z = u(rng);
      CHECK(close(f.value(t, z + 1.0), f.value(t, z), 1e-12));
    }
    for (int i = 0; i <= 20000; ++i) {
      const double t = 2 * std::numbers::pi * i / 20000.0;
      CHECK(norm(eval_two_scale(f, t, 0.0137)) <= 4.0);
    }
  }
}

TEST_CASE("fields by name") {
  CHECK(field_from_name("squared").name == "squared");
  CHECK(field_from_name("chain_pulse").name == "chain_pulse");
  CHECK(close(field_from_name("constant", {1, 2, 3}).value(0, 0), {1, 2, 3}, 0.0));
  CHECK_THROWS_AS(field_from_name("spiral"), Error);
}

TEST_CASE("custom fields fall back to quadrature") {
  FieldSpec f{"custom", [](double, double z) { return Vec3{std::sin(2 * std::numbers::pi * z), 0, 2}; }, {}};
  CHECK(close(effective(f, 0.0), {0, 0, 2}, 1e-12));
}
