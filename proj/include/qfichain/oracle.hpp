#pragma once

#include "qfichain/chain_model.hpp"
#include "qfichain/correlation_matrix.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qfi::oracle {

enum class Boundary { open, periodic };

/// Dense density matrix on L spins (Hermitian, trace one).
struct DenseState {
  Eigen::Index n_sites = 0;
  Eigen::MatrixXcd rho;

  double hermiticity_defect() const;
  double trace_defect() const;
};

/// Dense XY Hamiltonian on L <= 14 spins, term by term.
Eigen::MatrixXcd build_hamiltonian(Eigen::Index L, double h, double gamma,
                                   Boundary boundary = Boundary::open);

/// Thermal state exp(-beta H)/Z.  At beta = infinity this is the projector
/// onto the ground space, averaged over quasi-degenerate states (energy
/// within gap_tol of the minimum).
DenseState thermal_state(const Eigen::MatrixXcd& h, double beta, double gap_tol = 1e-8);

DenseState pure_state(const Eigen::VectorXcd& psi);

/// Spectral data of a density matrix (weights may be sub-eigensolver
/// precision when produced by the Schmidt route below).
struct StateSpectrum {
  Eigen::VectorXd weights;
  Eigen::MatrixXcd vectors;  // columns
};

/// Exact spectrum of the reduced state of a pure state on the first
/// `first_sites` sites, via the Schmidt decomposition: small weights are
/// resolved far below the dense-eigensolver noise floor.
StateSpectrum reduced_spectrum_of_pure(const Eigen::VectorXcd& psi,
                                       Eigen::Index first_sites);

/// F(rho, O)/4 from the full eigen-decomposition.
double qfi_exact(const DenseState& rho, const Eigen::MatrixXcd& obs);
double qfi_exact(const StateSpectrum& spectrum, const Eigen::MatrixXcd& obs);

/// I_alpha(rho, O) = tr[rho O^2] - tr[rho^alpha O rho^(1-alpha) O].
double wydi_exact(const DenseState& rho, const Eigen::MatrixXcd& obs,
                  std::complex<double> alpha);
double wydi_exact(const StateSpectrum& spectrum, const Eigen::MatrixXcd& obs,
                  std::complex<double> alpha);

double variance_exact(const DenseState& rho, const Eigen::MatrixXcd& obs);

/// Partial trace onto the (sorted, not necessarily contiguous) site subset.
DenseState reduce(const DenseState& rho, const std::vector<Eigen::Index>& sites);

DenseState evolve_exact(const DenseState& rho, const Eigen::MatrixXcd& h, double t);
DenseState apply_unitary(const DenseState& rho, const Eigen::MatrixXcd& u);

/// Single-site Pauli operator embedded at site j (site 0 = lowest bit).
Eigen::MatrixXcd pauli_at(Eigen::Index L, Eigen::Index j, char axis);
/// Majorana operator a_m, m in [0, 2L): Jordan-Wigner string times X or Y.
Eigen::MatrixXcd majorana_at(Eigen::Index L, Eigen::Index m);
/// Order parameter X_A = sum_{j in [first, last]} sigma^x_j.
Eigen::MatrixXcd order_parameter_x(Eigen::Index L, Eigen::Index first, Eigen::Index last);

/// Majorana correlation matrix Gamma = I - <a (x) a> of a dense state.
CorrelationMatrix correlations_of(const DenseState& rho);

/// Dense Gaussian density matrix rho[Gamma]; valid for pure modes as well.
DenseState gaussian_to_dense(const CorrelationMatrix& g);

}  // namespace qfi::oracle
