#include "qfichain/gaussian_states.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qfi {

using cdouble = std::complex<double>;
namespace {
constexpr cdouble kI{0.0, 1.0};

// 2x2 symbol of the quadratic form A in the convention
// A_{(l a)(n b)} = (1/2pi) int dk e^{ik(n-l)} Ahat(k)_{ab}.
Eigen::Matrix2cd hamiltonian_symbol(const ChainModel& m, double k) {
  const cdouble w = 2.0 * (m.h - std::cos(k)) + 2.0 * kI * m.gamma * std::sin(k);
  Eigen::Matrix2cd a;
  a << 0.0, std::conj(w), -w, 0.0;
  return a;
}

// Equilibrium symbol: -i tanh(beta eps/2) Ahat(k) / eps_k.
Eigen::Matrix2cd equilibrium_symbol(const ChainModel& m, double beta, double k) {
  const double eps = dispersion(m, k);
  if (eps < 1e-300) return Eigen::Matrix2cd::Zero();
  double fill = std::isinf(beta) ? 1.0 : std::tanh(0.5 * beta * eps);
  return (-kI * fill / eps) * hamiltonian_symbol(m, k);
}

// One-mode orthogonal rotation symbol exp(t Ahat(k)).
Eigen::Matrix2cd rotation_symbol(const ChainModel& m, double t, double k) {
  const double eps = dispersion(m, k);
  const Eigen::Matrix2cd a = hamiltonian_symbol(m, k);
  if (eps < 1e-14) return Eigen::Matrix2cd::Identity() + t * a;
  return std::cos(eps * t) * Eigen::Matrix2cd::Identity() + (std::sin(eps * t) / eps) * a;
}

// Assembles the block-Toeplitz window matrix from a symbol sampled on a
// uniform grid of n_quad momenta (periodic trapezoid).
CorrelationMatrix toeplitz_from_symbol(
    const std::function<Eigen::Matrix2cd(double)>& symbol, Eigen::Index window,
    Eigen::Index n_quad) {
  const double pi = std::numbers::pi;
  std::vector<Eigen::Matrix2cd> samples(n_quad);
  for (Eigen::Index i = 0; i < n_quad; ++i)
    samples[i] = symbol(-pi + 2.0 * pi * double(i) / double(n_quad));

  // G_r = (1/2pi) int e^{ikr} Ghat(k) dk for r in [-(W-1), W-1].
  std::vector<Eigen::Matrix2cd> blocks(2 * window - 1);
  for (Eigen::Index r = -(window - 1); r <= window - 1; ++r) {
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
    for (Eigen::Index i = 0; i < n_quad; ++i) {
      const double k = -pi + 2.0 * pi * double(i) / double(n_quad);
      acc += std::exp(kI * (k * double(r))) * samples[i];
    }
    blocks[r + window - 1] = acc / double(n_quad);
  }

  Eigen::MatrixXcd gamma(2 * window, 2 * window);
  for (Eigen::Index l = 0; l < window; ++l)
    for (Eigen::Index n = 0; n < window; ++n)
      gamma.block<2, 2>(2 * l, 2 * n) = blocks[n - l + window - 1];
  return CorrelationMatrix(std::move(gamma));
}

}  // namespace

Eigen::Index symbol_quadrature_points(const ChainModel& model) {
  return model.critical() ? 16384 : 4096;
}

Eigen::MatrixXd window_hamiltonian_majorana(const ChainModel& model, Eigen::Index n_sites) {
  if (n_sites < 1) throw std::invalid_argument("window must contain at least one site");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n_sites, 2 * n_sites);
  auto set = [&](Eigen::Index i, Eigen::Index j, double v) {
    a(i, j) = v;
    a(j, i) = -v;
  };
  for (Eigen::Index s = 0; s < n_sites; ++s) set(2 * s, 2 * s + 1, 2.0 * model.h);
  for (Eigen::Index s = 0; s + 1 < n_sites; ++s) {
    set(2 * s + 1, 2 * s + 2, 1.0 + model.gamma);
    set(2 * s, 2 * s + 3, -(1.0 - model.gamma));
  }
  return a;
}

CorrelationMatrix ground_state_correlations(const ChainModel& model, Eigen::Index window) {
  return thermal_correlations(model, std::numeric_limits<double>::infinity(), window);
}

CorrelationMatrix thermal_correlations(const ChainModel& model, double beta,
                                       Eigen::Index window) {
  if (beta < 0.0) throw std::invalid_argument("beta must be nonnegative");
  if (window < 1) throw std::invalid_argument("window must contain at least one site");
  const Eigen::Index n_quad = symbol_quadrature_points(model);
  return toeplitz_from_symbol(
      [&](double k) { return equilibrium_symbol(model, beta, k); }, window, n_quad);
}

CorrelationMatrix thermal_correlations_finite(const ChainModel& model, double beta,
                                              Eigen::Index n_sites, double gap_tol) {
  if (beta < 0.0) throw std::invalid_argument("beta must be nonnegative");
  const Eigen::MatrixXd a = window_hamiltonian_majorana(model, n_sites);
  const Eigen::MatrixXcd m = -kI * a.cast<cdouble>();  // Hermitian
  gap_tol = std::max(gap_tol, 1e-13);  // below eigensolver noise, signs are junk
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXd filling(es.eigenvalues().size());
  for (Eigen::Index j = 0; j < filling.size(); ++j) {
    const double lambda = es.eigenvalues()(j);
    if (std::isinf(beta))
      filling(j) = std::abs(lambda) < gap_tol ? 0.0 : (lambda > 0 ? 1.0 : -1.0);
    else
      filling(j) = std::tanh(0.5 * beta * lambda);
  }
  Eigen::MatrixXcd gamma = es.eigenvectors() * filling.asDiagonal() *
                           es.eigenvectors().adjoint();
  return CorrelationMatrix(std::move(gamma));
}

CorrelationMatrix quench_correlations(const QuenchPair& q, double t, Eigen::Index window) {
  if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
  const Eigen::Index n_quad =
      std::max(symbol_quadrature_points(q.post), symbol_quadrature_points(q.pre));
  auto symbol = [&](double k) -> Eigen::Matrix2cd {
    const Eigen::Matrix2cd g0 =
        equilibrium_symbol(q.pre, std::numeric_limits<double>::infinity(), k);
    const Eigen::Matrix2cd r = rotation_symbol(q.post, t, k);
    // R is an orthogonal symbol: inverse = rotation by -t.
    const Eigen::Matrix2cd rinv = rotation_symbol(q.post, -t, k);
    return r * g0 * rinv;
  };
  return toeplitz_from_symbol(symbol, window, n_quad);
}

}  // namespace qfi
