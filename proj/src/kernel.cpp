#include "llhmm/kernel.hpp"

#include "llhmm/error.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <sstream>

namespace llhmm {

namespace {

// \int_{-1/2}^{1/2} t^{2j} (1 - 4t^2)^{q+1} dt = 2^{-(2j+1)} B(j + 1/2, q + 2)
double window_even_moment(int j, int q) {
  return std::ldexp(std::beta(j + 0.5, q + 2.0), -(2 * j + 1));
}

}  // namespace

KernelSpec build_kernel(int p, int q) {
  if (p < 1) throw_parameter("kernel moment order p must be >= 1");
  if (q < -1) throw_parameter("kernel smoothness q must be >= -1");

  const int n = p / 2 + 1;
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = window_even_moment(i + j, q);
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::Parameter, "kernel moment system is singular");
  }
  const Eigen::VectorXd c = lu.solve(rhs);

  KernelSpec k;
  k.p = p;
  k.q = q;
  k.coeffs.assign(c.data(), c.data() + n);
  return k;
}

double eval(const KernelSpec& k, double t) {
  if (std::fabs(t) > 0.5) return 0.0;
  const double u = t * t;
  double poly = 0.0;
  for (auto it = k.coeffs.rbegin(); it != k.coeffs.rend(); ++it) poly = poly * u + *it;
  const double base = 1.0 - 4.0 * u;
  double window = 1.0;
  for (int i = 0; i <= k.q; ++i) window *= base;
  return poly * window;
}

double eval_scaled(const KernelSpec& k, double tau, double t) {
  if (!(tau > 0.0)) throw_parameter("kernel window tau must be positive");
  return eval(k, t / tau) / tau;
}

double moment(const KernelSpec& k, int r) {
  using Rule = boost::math::quadrature::gauss<double, 10>;
  constexpr int panels = 1000;
  constexpr double width = 1.0 / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = -0.5 + i * width;
    total += Rule::integrate([&](double t) { return eval(k, t) * std::pow(t, r); }, a, a + width);
  }
  return total;
}

ScaledKernel::ScaledKernel(KernelSpec k, double tau_) : base(std::move(k)), tau(tau_) {
  if (!(tau > 0.0)) throw_parameter("kernel window tau must be positive");
}

long half_window_steps(double tau, double h) {
  if (!(tau > 0.0)) throw_parameter("kernel window tau must be positive");
  if (!(h > 0.0)) throw_parameter("grid spacing must be positive");
  const double ratio = 0.5 * tau / h;
  const long n = std::lround(ratio);
  if (n < 1 || std::fabs(ratio - static_cast<double>(n)) > 1e-8 * std::fmax(1.0, ratio)) {
    std::ostringstream os;
    os << "grid spacing " << h << " does not divide tau/2 = " << 0.5 * tau;
    throw_parameter(os.str());
  }
  return n;
}

std::vector<double> window_weights(const KernelSpec& k, double tau, double h) {
  const long n = half_window_steps(tau, h);
  std::vector<double> w(static_cast<std::size_t>(2 * n + 1));
  for (long i = -n; i <= n; ++i) {
    // Evaluate on the unit support directly so the end nodes land on +-1/2.
    const double t = static_cast<double>(i) / static_cast<double>(2 * n);
    w[static_cast<std::size_t>(i + n)] = h * eval(k, t) / tau;
  }
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double weighted_average(const KernelSpec& k, double tau, const std::function<double(double)>& f,
                        double center, double h) {
  const auto w = window_weights(k, tau, h);
  const long n = static_cast<long>(w.size() / 2);
  double sum = 0.0;
  for (long i = -n; i <= n; ++i) {
    sum += w[static_cast<std::size_t>(i + n)] * f(center + static_cast<double>(i) * h);
  }
  return sum;
}

}  // namespace llhmm
