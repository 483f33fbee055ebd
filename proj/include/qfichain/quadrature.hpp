#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qfi::quad {

using real_fn = std::function<double(double)>;
using complex_fn = std::function<std::complex<double>(double)>;

/// Adaptive Gauss-Kronrod (G7,K15) on [a,b] to absolute tolerance tol.
double integrate(const real_fn& f, double a, double b, double tol = 1e-9);
std::complex<double> integrate_complex(const complex_fn& f, double a, double b,
                                       double tol = 1e-9);

/// Trapezoid rule for a periodic integrand sampled on n uniform points of
/// [-pi, pi).  Spectrally accurate for smooth periodic functions.
double periodic_trapezoid(const real_fn& f, std::size_t n);
std::complex<double> periodic_trapezoid_complex(const complex_fn& f, std::size_t n);

/// All roots of f on [a,b], located by scanning a uniform grid of
/// `grid` cells and bisecting every sign change.
std::vector<double> bracketed_roots(const real_fn& f, double a, double b,
                                    std::size_t grid = 4096, double tol = 1e-13);

/// Maximum of f on [a,b]: dense-grid scan refined by golden-section search.
/// Returns {argmax, max}.
std::pair<double, double> maximize(const real_fn& f, double a, double b,
                                   std::size_t grid = 4096, double tol = 1e-12);

/// Natural cubic spline through (x_i, y_i) with strictly increasing knots.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  /// Integral of the spline over [a,b] within the knot span (clamped).
  double integral(double a, double b) const;

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives at knots
  double piece_integral(std::size_t i, double a, double b) const;
};

/// Least-squares fit of y ~ c - a*exp(-b*x) for saturating sequences.
struct SaturationFit {
  double c = 0.0;
  double a = 0.0;
  double b = 0.0;
  double residual_rms = 0.0;
  bool converged = false;
};
SaturationFit fit_exponential_saturation(const std::vector<double>& x,
                                         const std::vector<double>& y);

}  // namespace qfi::quad
