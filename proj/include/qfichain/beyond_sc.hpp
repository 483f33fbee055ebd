#pragma once

#include "qfichain/chain_model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

namespace qfi::beyond_sc {

/// Two-domain-wall sector of a ferromagnet with conserved wall number.
/// Only the noninteracting scattering phase S = -1 is evaluated end to end;
/// the general S, Z fields parametrize the Bethe utilities.
struct TwoParticleSector {
  std::function<double(double)> dispersion;  // eps(k)
  std::function<double(double)> velocity;    // v(k) = eps'(k)
  double scattering_phase = -1.0;
  double mixing_angle = 0.0;  // alpha of U_0 = exp(i alpha sigma^x_0)

  static TwoParticleSector from_model(const ChainModel& model);
  /// Toy dispersion with v(k) = sin k.
  static TwoParticleSector sine_velocity();
};

/// The window integrals of the large-time one-particle asymptotics,
///   L_n  = int dk/2pi e^{ink} theta(l - v t),
///   A_n  = int dk/2pi e^{ink} theta(r - v t) theta(v t - l),
///   O_n  = same support, weight ((r+l)/t - 2v),
///   O2_n = same support, squared weight,
/// for n in {-1, 0, 1}.
struct WindowIntegrals {
  double t = 0.0, l = 0.0, r = 0.0;
  std::complex<double> ell[3], a[3], o[3], o2[3];  // index n+1

  std::complex<double> L(int n) const { return ell[n + 1]; }
  std::complex<double> A(int n) const { return a[n + 1]; }
  std::complex<double> O(int n) const { return o[n + 1]; }
  std::complex<double> O2(int n) const { return o2[n + 1]; }
};

WindowIntegrals window_integrals(const TwoParticleSector& sector, double t, double l,
                                 double r);

/// The 2x2 representations of the one-particle block P_+ and of the order
/// parameter (and its square) on it.  Throws std::domain_error when the
/// basis degenerates (A_0^2 <= |A_1|^2).
struct OneParticleMatrices {
  Eigen::Matrix2cd p, o, o2;
};
OneParticleMatrices p_o_matrices(const WindowIntegrals& w);

/// Exact one-particle contribution to the normalized QFI, including the
/// reflected P_- block (l -> -r, r -> -l, v(k) -> -v(-k)).
double chi_one_particle(const TwoParticleSector& sector, double t, double l, double r);

/// Same quantity with every off-diagonal input zeroed: the semiclassical
/// limit (2 t^2/|A|^2) L_0 (O2_0 - O_0^2 / A_0), both blocks.
double chi_one_particle_semiclassical(const TwoParticleSector& sector, double t, double l,
                                      double r);

/// Contribution of a single block (no reflection); exposed for the identity
/// checks between the exact and semiclassical forms.
double chi_block(const WindowIntegrals& w);
double chi_block_semiclassical(const WindowIntegrals& w);

/// --- Bethe-parametrized two-particle states (validation utilities) ---

/// Momentum pairs (k, p), k < p, solving e^{iLp} = eta S, e^{iL(k+p)} = 1
/// for constant S = -1 on a ring of L sites.
std::vector<std::pair<double, double>> bethe_momenta(Eigen::Index length, int eta);

/// Normalized coefficient table c_{l,n}(k,p) of eq-style Bethe states on the
/// flipped-block basis |(l,n)>, -L/2 < l < n <= L/2.
struct BetheState {
  double k = 0.0, p = 0.0;
  int eta = 1;
  Eigen::MatrixXcd coeffs;  // (l + L/2 - 1, n + L/2 - 1), zero outside l < n

  /// <k,p;eta| U_0 |up-ground>, U_0 = e^{i alpha sigma^x_0}: i sin(alpha) c*_{-1,0}.
  std::complex<double> perturbation_overlap(double alpha) const;
};
BetheState bethe_state(Eigen::Index length, double k, double p, int eta);

}  // namespace qfi::beyond_sc
