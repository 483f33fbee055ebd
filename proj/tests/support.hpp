#pragma once

#include "qfichain/correlation_matrix.hpp"
#include "qfichain/oracle.hpp"

#include <Eigen/Dense>

#include <complex>
#include <random>

namespace qfi::test {

/// Random physical correlation matrix: Gamma = -i O T O^T with O a random
/// orthogonal matrix and mode fillings drawn from [0, max_filling].
inline CorrelationMatrix random_correlations(Eigen::Index n_sites, std::mt19937& rng,
                                             double max_filling = 0.98) {
  const Eigen::Index dim = 2 * n_sites;
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd seed(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) seed(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(seed);
  Eigen::MatrixXd q = qr.householderQ();
  std::uniform_real_distribution<double> uni(0.0, max_filling);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index m = 0; m < n_sites; ++m) {
    const double lambda = uni(rng);
    t(2 * m, 2 * m + 1) = lambda;
    t(2 * m + 1, 2 * m) = -lambda;
  }
  Eigen::MatrixXcd gamma =
      std::complex<double>(0.0, -1.0) * (q * t * q.transpose()).cast<std::complex<double>>();
  return CorrelationMatrix(std::move(gamma));
}

/// Random antisymmetric complex matrix (not necessarily physical).
inline Eigen::MatrixXcd random_antisymmetric(Eigen::Index dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      m(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  return 0.5 * (m - m.transpose().eval());
}

/// Random dense density matrix of rank `rank` on L sites.
inline oracle::DenseState random_dense_state(Eigen::Index L, Eigen::Index rank,
                                             std::mt19937& rng) {
  const Eigen::Index dim = Eigen::Index(1) << L;
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd v(dim, rank);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < rank; ++j)
      v(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  Eigen::MatrixXcd rho = v * v.adjoint();
  rho /= rho.trace().real();
  oracle::DenseState out;
  out.n_sites = L;
  out.rho = rho;
  return out;
}

}  // namespace qfi::test
