#pragma once

#include "qfichain/chain_model.hpp"
#include "qfichain/correlation_matrix.hpp"

#include <Eigen/Dense>

namespace qfi {

/// Quadratic Majorana form of the windowed XY Hamiltonian with open
/// boundaries: H = (i/4) a^T A a, with A real antisymmetric of size 2W x 2W.
Eigen::MatrixXd window_hamiltonian_majorana(const ChainModel& model, Eigen::Index n_sites);

/// Ground state of the infinite chain restricted to a window of W sites,
/// built from the translation-invariant symbol of the Bogoliubov vacuum.
/// Represents the symmetric mixture of the broken ground states; all even
/// observables coincide with those of |+>.
CorrelationMatrix ground_state_correlations(const ChainModel& model, Eigen::Index window);

/// Thermal state of the infinite chain restricted to a window (Toeplitz
/// symbol with a tanh(beta eps/2) filling).  beta = infinity reproduces
/// ground_state_correlations.
CorrelationMatrix thermal_correlations(const ChainModel& model, double beta,
                                       Eigen::Index window);

/// Thermal state of the *finite open chain* of W sites; the exact
/// counterpart of dense exact diagonalization on the same chain.  At
/// beta = infinity quasi-degenerate fermion modes (energy below gap_tol)
/// are left at occupation 1/2, giving the symmetric ground-space mixture.
CorrelationMatrix thermal_correlations_finite(const ChainModel& model, double beta,
                                              Eigen::Index n_sites,
                                              double gap_tol = 1e-8);

/// State at time t after a global quench from the ground state of q.pre,
/// evolved with q.post, in the thermodynamic limit; momentum-space mode
/// evolution restricted to a window of W sites.
CorrelationMatrix quench_correlations(const QuenchPair& q, double t, Eigen::Index window);

/// Number of quadrature points used for the Toeplitz symbol integrals
/// (refined automatically near criticality).
Eigen::Index symbol_quadrature_points(const ChainModel& model);

}  // namespace qfi
