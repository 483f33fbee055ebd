#include "qfichain/chain_model.hpp"

#include "qfichain/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qfi {

namespace {
double gap_squared(const ChainModel& m, double k) {
  const double a = m.h - std::cos(k);
  const double b = m.gamma * std::sin(k);
  return a * a + b * b;
}
}  // namespace

double dispersion(const ChainModel& model, double k) {
  return 2.0 * std::sqrt(gap_squared(model, k));
}

VelocityResult group_velocity_checked(const ChainModel& model, double k) {
  const double eps = dispersion(model, k);
  const double num =
      2.0 * model.h * std::sin(k) +
      2.0 * (model.gamma * model.gamma - 1.0) * std::sin(k) * std::cos(k);
  VelocityResult r;
  if (eps < 1e-14) {
    // Gap closing: v has a jump; the symmetric two-sided limit vanishes.
    r.value = 0.0;
    r.critical_momentum = true;
    return r;
  }
  r.value = 2.0 * num / eps;
  return r;
}

double group_velocity(const ChainModel& model, double k) {
  return group_velocity_checked(model, k).value;
}

double max_velocity(const ChainModel& model) {
  const double pi = std::numbers::pi;
  auto speed = [&](double k) { return std::abs(group_velocity(model, k)); };
  return quad::maximize(speed, 0.0, pi, 4096, 1e-12).second;
}

double bogoliubov_angle_difference(const QuenchPair& q, double k) {
  if (std::abs(q.pre.gamma - 1.0) > 1e-12 || std::abs(q.post.gamma - 1.0) > 1e-12)
    throw std::domain_error("Bogoliubov angle difference requires gamma = 1");
  const double h0 = q.pre.h, h = q.post.h;
  const double c = std::cos(k);
  const double num = h0 * h - (h0 + h) * c + 1.0;
  const double den = std::sqrt(1.0 + h0 * h0 - 2.0 * h0 * c) *
                     std::sqrt(1.0 + h * h - 2.0 * h * c);
  double v = num / den;
  if (std::abs(v) > 1.0 + 1e-12) throw std::domain_error("cos(Delta_k) out of [-1,1]");
  return std::clamp(v, -1.0, 1.0);
}

double c_ff(const QuenchPair& q) {
  const double h0 = q.pre.h, h = q.post.h;
  if (std::abs(h0) >= 1.0 || std::abs(h) >= 1.0 || h0 * h >= 1.0)
    throw std::domain_error("C_FF requires a ferro-to-ferro quench");
  return (1.0 - h0 * h + std::sqrt((1.0 - h0 * h0) * (1.0 - h * h))) /
         (2.0 * std::sqrt(1.0 - h0 * h) * std::pow(1.0 - h0 * h0, 0.25));
}

}  // namespace qfi
