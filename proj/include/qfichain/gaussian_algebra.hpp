#pragma once

#include "qfichain/correlation_matrix.hpp"

#include <complex>

namespace qfi {

/// prefactor * rho[gamma] with rho[gamma] trace-one Gaussian.
struct GaussianFactor {
  std::complex<double> prefactor{1.0, 0.0};
  CorrelationMatrix gamma;
};

struct PowerDiagnostics {
  int clipped_modes = 0;  // pure modes clipped before artanh
};

/// rho[g]^alpha = prefactor * rho[tanh(alpha artanh(g))].  The prefactor is
/// fixed by trace normalization, kappa_alpha = prod_j (p_j^alpha + q_j^alpha)
/// over the mode occupations p_j = (1+lambda_j)/2.  Mode eigenvalues are
/// clipped to 1 - 1e-12 before artanh; the clip count is reported.
GaussianFactor gamma_power(const CorrelationMatrix& g, std::complex<double> alpha,
                           PowerDiagnostics* diag = nullptr);

/// rho[g1] rho[g2] = prefactor * rho[g1 x g2] with
///   prefactor = sqrt(det((I + g1 g2)/2)),
///   g1 x g2   = I - (I - g2)(I + g1 g2)^{-1}(I - g1).
/// The square-root branch is the one continuously connected to the identity
/// (principal logarithm of every eigenvalue of g1 g2 shifted by 1).
/// Throws std::domain_error when I + g1 g2 is singular (orthogonal states).
GaussianFactor gaussian_product(const CorrelationMatrix& g1, const CorrelationMatrix& g2);

/// tanh(alpha artanh(lambda)) evaluated through the stable closed form
/// (1 - t)/(1 + t) with t = ((1-lambda)/(1+lambda))^alpha, exact at
/// lambda = +-1 (pure modes) for Re(alpha) > 0.
std::complex<double> mode_power(double lambda, std::complex<double> alpha);

/// Renyi-infinity entropy of rho[g]: -log of its largest eigenvalue.
double renyi_infinity_entropy(const CorrelationMatrix& g);

/// Real mode eigenvalues lambda_j >= 0 (one per Majorana pair) of a physical
/// (Hermitian) correlation matrix.
Eigen::VectorXd mode_eigenvalues(const CorrelationMatrix& g);

}  // namespace qfi
