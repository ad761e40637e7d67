#pragma once

#include <functional>
#include <vector>

namespace llhmm {

/// Symmetric averaging kernel supported on [-1/2, 1/2] with p vanishing
/// moments and smoothness index q:
///
///   K(t) = (c_0 + c_1 t^2 + ... + c_k t^{2k}) (1 - 4 t^2)^{q+1},  k = floor(p/2).
///
/// The window factor makes K and its first q derivatives vanish at the support
/// ends, so K^{(q+1)} has bounded variation. q = -1 drops the window.
struct KernelSpec {
  int p = 1;
  int q = -1;
  std::vector<double> coeffs;  // c_0 .. c_k, coefficients in t^2
};

/// Builds the kernel of class (p, q). Throws ParameterError for p < 1 or q < -1.
KernelSpec build_kernel(int p, int q);

/// K(t); exactly zero for |t| > 1/2.
double eval(const KernelSpec& k, double t);

/// K_tau(t) = K(t / tau) / tau. Throws ParameterError for tau <= 0.
double eval_scaled(const KernelSpec& k, double tau, double t);

/// \int K(t) t^r dt by a 10^4-node composite Gauss-Legendre rule.
double moment(const KernelSpec& k, int r);

/// Kernel rescaled to a window of length tau.
struct ScaledKernel {
  KernelSpec base;
  double tau;

  ScaledKernel(KernelSpec k, double tau_);
  [[nodiscard]] double operator()(double t) const { return eval_scaled(base, tau, t); }
};

/// Trapezoidal weights h K_tau(s_i) on the grid s_i = i h, i = -n..n, where
/// n h = tau / 2. Entry i + n belongs to s_i. Throws ParameterError when h does
/// not divide tau / 2.
std::vector<double> window_weights(const KernelSpec& k, double tau, double h);

/// Number of grid steps n with n h = tau / 2; throws if h does not divide
/// tau / 2 up to rounding.
long half_window_steps(double tau, double h);

/// Trapezoidal approximation of \int K_tau(s - center) f(s) ds on the grid
/// center + i h.
double weighted_average(const KernelSpec& k, double tau, const std::function<double(double)>& f,
                        double center, double h);

}  // namespace llhmm
