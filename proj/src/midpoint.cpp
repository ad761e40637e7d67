#include "llhmm/midpoint.hpp"

#include <sstream>

namespace llhmm {

void MidpointConfig::validate() const {
  if (!(dt > 0.0)) throw_parameter("midpoint dt must be positive");
  if (!(fp_tol > 0.0)) throw_parameter("midpoint fp_tol must be positive");
  if (fp_max_iter < 1) throw_parameter("midpoint fp_max_iter must be >= 1");
}

StepResult<Vec3> midpoint_step(const Rhs& rhs, double t, const Vec3& m, double dt,
                               const MidpointConfig& cfg) {
  return implicit_midpoint(rhs, t, m, dt, cfg);
}

long step_count(double t0, double t1, double dt_abs) {
  if (!(dt_abs > 0.0)) throw_parameter("step size must be positive");
  const double ratio = std::fabs(t1 - t0) / dt_abs;
  const long n = std::lround(ratio);
  if (std::fabs(ratio - static_cast<double>(n)) > 1e-8 * std::fmax(1.0, ratio)) {
    std::ostringstream os;
    os << "interval [" << t0 << ", " << t1 << "] is not a whole number of steps of " << dt_abs;
    throw_parameter(os.str());
  }
  return n;
}

Trajectory integrate(const Rhs& rhs, double t0, const Vec3& m0, double t1, double dt_abs,
                     const MidpointConfig& cfg) {
  const long n = step_count(t0, t1, dt_abs);
  const double h = (t1 >= t0 ? 1.0 : -1.0) * dt_abs;

  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n + 1));
  traj.states.reserve(static_cast<std::size_t>(n + 1));
  traj.times.push_back(t0);
  traj.states.push_back(m0);

  Vec3 m = m0;
  for (long k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    try {
      const auto step = implicit_midpoint(rhs, t, m, h, cfg);
      m = step.state;
      traj.rhs_evals += step.rhs_evals;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonConverged) throw;
      std::ostringstream os;
      os << e.what() << " at step " << k << " (t = " << t << ")";
      throw Error(ErrorCode::NonConverged, os.str(), k);
    }
    traj.times.push_back(k + 1 == n ? t1 : t0 + static_cast<double>(k + 1) * h);
    traj.states.push_back(m);
  }
  return traj;
}

}  // namespace llhmm
