#include "qfichain/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfi::quad {
namespace {

// G7,K15 nodes/weights on [-1,1] (Kronrod extension of 7-point Gauss).
constexpr double kKronrodNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kKronrodWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kGaussWeights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870};

template <typename Scalar, typename Fn>
void gk15(const Fn& f, double a, double b, Scalar& kronrod, double& err) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  Scalar gauss{};
  kronrod = Scalar{};
  for (int i = 0; i < 15; ++i) {
    Scalar v = f(c + h * kKronrodNodes[i]);
    kronrod += kKronrodWeights[i] * v;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * v;
  }
  kronrod *= h;
  gauss *= h;
  err = std::abs(kronrod - gauss);
  // Standard QUADPACK-style error sharpening.
  err = std::pow(200.0 * err, 1.5);
}

template <typename Scalar, typename Fn>
Scalar adaptive(const Fn& f, double a, double b, double tol, int depth) {
  Scalar whole;
  double err;
  gk15<Scalar>(f, a, b, whole, err);
  if (err < tol || depth > 48 || b - a < 1e-14 * (1.0 + std::abs(a))) return whole;
  const double c = 0.5 * (a + b);
  return adaptive<Scalar>(f, a, c, 0.5 * tol, depth + 1) +
         adaptive<Scalar>(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const real_fn& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  return adaptive<double>(f, a, b, tol, 0);
}

std::complex<double> integrate_complex(const complex_fn& f, double a, double b,
                                       double tol) {
  if (a == b) return {0.0, 0.0};
  return adaptive<std::complex<double>>(f, a, b, tol, 0);
}

double periodic_trapezoid(const real_fn& f, std::size_t n) {
  const double pi = std::numbers::pi;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += f(-pi + 2.0 * pi * double(i) / double(n));
  return sum * 2.0 * pi / double(n);
}

std::complex<double> periodic_trapezoid_complex(const complex_fn& f, std::size_t n) {
  const double pi = std::numbers::pi;
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += f(-pi + 2.0 * pi * double(i) / double(n));
  return sum * (2.0 * pi / double(n));
}

std::vector<double> bracketed_roots(const real_fn& f, double a, double b,
                                    std::size_t grid, double tol) {
  std::vector<double> roots;
  double x0 = a, f0 = f(a);
  for (std::size_t i = 1; i <= grid; ++i) {
    double x1 = a + (b - a) * double(i) / double(grid);
    double f1 = f(x1);
    if (f0 == 0.0) roots.push_back(x0);
    if (f0 * f1 < 0.0) {
      double lo = x0, hi = x1, flo = f0;
      while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  if (f0 == 0.0) roots.push_back(b);
  return roots;
}

std::pair<double, double> maximize(const real_fn& f, double a, double b,
                                   std::size_t grid, double tol) {
  double best_x = a, best_f = f(a);
  for (std::size_t i = 1; i <= grid; ++i) {
    double x = a + (b - a) * double(i) / double(grid);
    double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  }
  const double h = (b - a) / double(grid);
  double lo = std::max(a, best_x - h), hi = std::min(b, best_x + h);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto probe = [&](double x) {
    const double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
    return v;
  };
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = probe(x1), f2 = probe(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = probe(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = probe(x1);
    }
  }
  probe(0.5 * (lo + hi));
  return {best_x, best_f};
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || n != y_.size()) throw std::invalid_argument("spline needs >= 2 knots");
  m_.assign(n, 0.0);
  if (n == 2) return;
  // Tridiagonal system for natural boundary conditions.
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0), sup(n, 0.0);
  diag[0] = diag[n - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    sub[i] = h0 / 6.0;
    diag[i] = (h0 + h1) / 3.0;
    sup[i] = h1 / 6.0;
    rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  for (std::size_t i = 1; i < n; ++i) {
    double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
}

double CubicSpline::operator()(double x) const {
  const std::size_t n = x_.size();
  if (x <= x_.front()) x = x_.front();
  if (x >= x_.back()) x = x_.back();
  std::size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
  if (i == 0) i = 1;
  if (i >= n) i = n - 1;
  const double h = x_[i] - x_[i - 1];
  const double a = (x_[i] - x) / h, b = (x - x_[i - 1]) / h;
  return a * y_[i - 1] + b * y_[i] +
         ((a * a * a - a) * m_[i - 1] + (b * b * b - b) * m_[i]) * h * h / 6.0;
}

double CubicSpline::piece_integral(std::size_t i, double a, double b) const {
  // Antiderivative of the cubic on [x_{i-1}, x_i], evaluated between a and b.
  const double h = x_[i] - x_[i - 1];
  auto prim = [&](double x) {
    const double A = (x_[i] - x) / h, B = (x - x_[i - 1]) / h;
    double v = -0.5 * h * A * A * y_[i - 1] + 0.5 * h * B * B * y_[i];
    v += h * h / 6.0 *
         (-h * (A * A * A * A / 4.0 - A * A / 2.0) * m_[i - 1] +
          h * (B * B * B * B / 4.0 - B * B / 2.0) * m_[i]);
    return v;
  };
  return prim(b) - prim(a);
}

double CubicSpline::integral(double a, double b) const {
  if (a > b) return -integral(b, a);
  a = std::max(a, x_.front());
  b = std::min(b, x_.back());
  if (a >= b) return 0.0;
  double total = 0.0;
  for (std::size_t i = 1; i < x_.size(); ++i) {
    double lo = std::max(a, x_[i - 1]);
    double hi = std::min(b, x_[i]);
    if (lo < hi) total += piece_integral(i, lo, hi);
  }
  return total;
}

SaturationFit fit_exponential_saturation(const std::vector<double>& x,
                                         const std::vector<double>& y) {
  SaturationFit fit;
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) return fit;

  // Seed b from the last three points (uniform spacing assumed there),
  // then a, c from linear least squares at fixed b.
  double d1 = y[n - 2] - y[n - 3];
  double d2 = y[n - 1] - y[n - 2];
  double dx = x[n - 1] - x[n - 2];
  double b0 = 1.0;
  if (d1 != 0.0 && d2 / d1 > 1e-12 && d2 / d1 < 1.0 && dx > 0.0)
    b0 = -std::log(d2 / d1) / dx;
  if (!(b0 > 0.0) || !std::isfinite(b0)) b0 = 1.0;

  auto linear_for_b = [&](double b, double& c, double& a) {
    // minimize sum (c - a e^{-b x} - y)^2 over (c, a)
    double s_e = 0, s_ee = 0, s_y = 0, s_ye = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = std::exp(-b * x[i]);
      s_e += e;
      s_ee += e * e;
      s_y += y[i];
      s_ye += y[i] * e;
    }
    double det = double(n) * s_ee - s_e * s_e;
    if (std::abs(det) < 1e-300) {
      c = y[n - 1];
      a = 0.0;
      return;
    }
    c = (s_y * s_ee - s_e * s_ye) / det;
    a = (s_y * s_e - double(n) * s_ye) / det;
  };

  double b = b0, c, a;
  linear_for_b(b, c, a);
  auto rms = [&](double cc, double aa, double bb) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = cc - aa * std::exp(-bb * x[i]) - y[i];
      s += r * r;
    }
    return std::sqrt(s / double(n));
  };

  // Gauss-Newton on (c, a, b).
  bool ok = false;
  for (int it = 0; it < 60; ++it) {
    Eigen::Matrix3d JtJ = Eigen::Matrix3d::Zero();
    Eigen::Vector3d Jtr = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      double e = std::exp(-b * x[i]);
      double r = c - a * e - y[i];
      Eigen::Vector3d J(1.0, -e, a * x[i] * e);
      JtJ += J * J.transpose();
      Jtr += J * r;
    }
    JtJ += 1e-12 * Eigen::Matrix3d::Identity();
    Eigen::Vector3d step = JtJ.ldlt().solve(Jtr);
    if (!step.allFinite()) break;
    c -= step(0);
    a -= step(1);
    b -= step(2);
    if (!(b > 0.0) || !std::isfinite(b) || !std::isfinite(a) || !std::isfinite(c)) break;
    if (step.cwiseAbs().maxCoeff() < 1e-14 * (1.0 + std::abs(c))) {
      ok = true;
      break;
    }
    ok = true;
  }
  if (!ok || !(b > 0.0) || !std::isfinite(c)) {
    linear_for_b(b0, c, a);
    b = b0;
    fit.converged = false;
  } else {
    fit.converged = true;
  }
  fit.c = c;
  fit.a = a;
  fit.b = b;
  fit.residual_rms = rms(c, a, b);
  return fit;
}

}  // namespace qfi::quad
