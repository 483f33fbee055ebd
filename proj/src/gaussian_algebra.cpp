#include "qfichain/gaussian_algebra.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace qfi {

using cdouble = std::complex<double>;

namespace {
constexpr double kClip = 1e-12;

// Eigen-decomposition of a physical (Hermitian) correlation matrix.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hermitian_eigs(
    const CorrelationMatrix& g) {
  const double scale = std::max(1.0, g.data().cwiseAbs().maxCoeff());
  if ((g.data() - g.data().adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw std::invalid_argument(
        "gamma_power: correlation matrix is not Hermitian (unphysical input)");
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(g.data());
}
}  // namespace

cdouble mode_power(double lambda, cdouble alpha) {
  if (lambda < 0.0) return -mode_power(-lambda, alpha);
  lambda = std::min(lambda, 1.0);
  if (lambda >= 1.0) return 1.0;  // pure mode, Re(alpha) > 0
  // tanh(a artanh(l)) = (1 - t)/(1 + t), t = ((1-l)/(1+l))^a; the ratio is
  // computed from 1-l directly so near-pure modes keep full precision.
  const cdouble t = std::exp(alpha * std::log((1.0 - lambda) / (1.0 + lambda)));
  return (1.0 - t) / (1.0 + t);
}

Eigen::VectorXd mode_eigenvalues(const CorrelationMatrix& g) {
  auto es = hermitian_eigs(g);
  const Eigen::Index n = g.n_sites();
  Eigen::VectorXd out(n);
  // Spectrum comes in +/- pairs; eigenvalues are sorted ascending.
  for (Eigen::Index j = 0; j < n; ++j) out(j) = es.eigenvalues()(g.dim() - 1 - j);
  return out;
}

GaussianFactor gamma_power(const CorrelationMatrix& g, cdouble alpha,
                           PowerDiagnostics* diag) {
  auto es = hermitian_eigs(g);
  const Eigen::Index dim = g.dim();
  Eigen::VectorXcd f(dim);
  int clipped = 0;
  cdouble log_prefactor = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double lambda = es.eigenvalues()(j);
    if (std::abs(lambda) > 1.0 - kClip) ++clipped;
    f(j) = mode_power(lambda, alpha);
    if (lambda > 0) {
      // One factor per mode pair: kappa_alpha = p^alpha + q^alpha.
      const double p = 0.5 * (1.0 + std::min(lambda, 1.0));
      const double q = 0.5 * (1.0 - std::min(lambda, 1.0));
      log_prefactor += std::log(std::pow(cdouble(p), alpha) +
                                (q > 0.0 ? std::pow(cdouble(q), alpha) : cdouble(0.0)));
    }
  }
  if (diag) diag->clipped_modes = clipped / 2;
  Eigen::MatrixXcd out =
      es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint();
  // Odd functions of an antisymmetric matrix stay antisymmetric; enforce.
  out = 0.5 * (out - out.transpose().eval());
  GaussianFactor result;
  result.prefactor = std::exp(log_prefactor);
  result.gamma = CorrelationMatrix(std::move(out));
  return result;
}

GaussianFactor gaussian_product(const CorrelationMatrix& g1,
                                const CorrelationMatrix& g2) {
  if (g1.dim() != g2.dim())
    throw std::invalid_argument("gaussian_product: dimension mismatch");
  const Eigen::Index dim = g1.dim();
  const Eigen::MatrixXcd k = g1.data() * g2.data();
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim) + k;

  // Branch-safe sqrt(det(M/2)): principal log of every eigenvalue 1 + mu,
  // i.e. the branch continuously connected to the identity.
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(k, /*computeEigenvectors=*/false);
  cdouble log_pref = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const cdouble factor = 1.0 + es.eigenvalues()(j);
    if (std::abs(factor) < 1e-12)
      throw std::domain_error("gaussian_product: orthogonal states (singular I + G1 G2)");
    log_pref += 0.5 * (std::log(factor) - std::log(2.0));
  }

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  Eigen::MatrixXcd prod =
      Eigen::MatrixXcd::Identity(dim, dim) -
      (Eigen::MatrixXcd::Identity(dim, dim) - g2.data()) *
          lu.solve(Eigen::MatrixXcd::Identity(dim, dim) - g1.data());
  prod = 0.5 * (prod - prod.transpose().eval());

  GaussianFactor result;
  result.prefactor = std::exp(log_pref);
  result.gamma = CorrelationMatrix(std::move(prod));
  return result;
}

double renyi_infinity_entropy(const CorrelationMatrix& g) {
  Eigen::VectorXd lambda = mode_eigenvalues(g);
  double s = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    const double p = 0.5 * (1.0 + std::min(std::abs(lambda(j)), 1.0));
    s -= std::log(p);
  }
  return s;
}

}  // namespace qfi
