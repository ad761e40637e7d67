#pragma once

#include <array>
#include <cmath>

namespace llhmm {

/// Dense 3-vector for magnetization and field values (dimensionless).
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double a) {
    x *= a;
    y *= a;
    z *= a;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

  [[nodiscard]] bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

[[nodiscard]] constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

[[nodiscard]] constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

[[nodiscard]] inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Largest absolute component.
[[nodiscard]] inline double max_abs(const Vec3& a) {
  return std::fmax(std::fabs(a.x), std::fmax(std::fabs(a.y), std::fabs(a.z)));
}

[[nodiscard]] inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Unit-length magnetization. Macro states that are allowed to drift off the
/// sphere are built with `Spin::unnormalized`.
class Spin {
 public:
  static constexpr double kUnitTolerance = 1e-9;

  /// Throws ParameterError unless | |v| - 1 | <= kUnitTolerance.
  explicit Spin(const Vec3& v);

  static Spin unnormalized(const Vec3& v);
  static Spin normalized(const Vec3& v);

  [[nodiscard]] const Vec3& value() const { return v_; }
  operator const Vec3&() const { return v_; }  // NOLINT(google-explicit-constructor)

 private:
  struct Unchecked {};
  Spin(const Vec3& v, Unchecked) : v_(v) {}
  Vec3 v_;
};

/// -beta m x h - gamma m x (m x h)
[[nodiscard]] inline Vec3 ll_rhs(const Vec3& m, const Vec3& h, double beta, double gamma) {
  const Vec3 mxh = cross(m, h);
  return -beta * mxh - gamma * cross(m, mxh);
}

/// Precession-only right-hand side, -beta m x h. Routed through ll_rhs so the
/// result is bitwise identical to the gamma = 0 case.
[[nodiscard]] inline Vec3 precession_rhs(const Vec3& m, const Vec3& h, double beta) {
  return ll_rhs(m, h, beta, 0.0);
}

}  // namespace llhmm
