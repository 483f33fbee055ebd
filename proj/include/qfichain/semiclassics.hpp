#pragma once

#include "qfichain/chain_model.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace qfi::semiclassics {

/// Semiclassical magnetization profile M(zeta) of a single propagating
/// excitation: odd, nondecreasing, M(+-1) = +-1 and sgn(zeta) outside.
/// The Ising reference case is M(zeta) = (2/pi) arcsin(zeta).
class ScalingFunction {
 public:
  /// Closed-form Ising/Majorana profile.
  static ScalingFunction ising();
  /// M from a production cross-section sigma(k) (normalized over [-pi,pi])
  /// and a velocity map v(k)/vmax, tabulated by quadrature.
  static ScalingFunction from_cross_section(std::function<double(double)> sigma,
                                            std::function<double(double)> v_over_vmax);
  /// Uniform cross-section with the model's velocity map.
  static ScalingFunction from_model(const ChainModel& model);

  double operator()(double zeta) const;
  /// Integral of M over [a, b].
  double integral(double a, double b) const;

 private:
  ScalingFunction() = default;
  bool closed_form_ = true;
  std::vector<double> grid_, values_;  // tabulated on [0, 1], odd-extended
};

/// Conditional profile (2M(z) - M(zl) - M(zr)) / (M(zr) - M(zl)).
/// Throws std::domain_error when no quasiparticle weight lies in the window.
double conditional_m(const ScalingFunction& m, double zeta, double zl, double zr);

/// Probability that the excitation is found in the window: (M(zr)-M(zl))/2.
double p_in_subsystem(const ScalingFunction& m, double zl, double zr);

struct Correlations {
  double one_point = 0.0;
  double two_point = 0.0;
};

/// Factorized order-parameter correlations after n well-separated walls.
Correlations predict_correlations(const ScalingFunction& m,
                                  const std::vector<double>& wall_positions, double t,
                                  double vmax, double m0, double site_l, double site_n);

/// One excitation created at position j0 at time 0.  tr_rho_o2 is
/// tr[rho_A O^2] / ||O||^2 supplied by the caller (simulation or surrogate);
/// kappa = |A| <+|O|+> / ||O|| (= m0 for the sigma^x order parameter).
double chi_single_dw(const ScalingFunction& m, double site_l, double site_r, double j0,
                     double t, double vmax, double kappa, double tr_rho_o2);

/// One excitation per entry, created at `position` at time `time` (< t).
struct SemiclassicalEvent {
  double time = 0.0;
  double position = 0.0;
};

/// Multi-excitation prediction with per-event rescaled frames (kicked
/// protocols use events at different times; a spin flip contributes two
/// coincident events).
double chi_multi_kick(const ScalingFunction& m, const std::vector<SemiclassicalEvent>& events,
                      double site_l, double site_r, double t, double vmax, double kappa,
                      double tr_rho_o2);

/// Post-quench pair ensemble: density rho(k) >= 0 of independent pairs on
/// (0, pi), quasiparticle velocity, and ground-state magnetization m0.
struct QuenchEnsemble {
  std::function<double(double)> pair_density;
  std::function<double(double)> velocity;
  double m0 = 1.0;

  /// TFIM quench ensemble with rho(k) = -ln|cos Delta_k| / (2 pi).
  static QuenchEnsemble tfim(const QuenchPair& q);
};

/// Lightcone-counting correlators m0 e^{-2N[C]} and m0^2 e^{-2N[C_i xor C_j]}.
Correlations quench_correlators(const QuenchEnsemble& ensemble, double t, double site_i,
                                double site_j);

/// F/4 from a table of equal-time two-point functions covering the sites
/// [l-1, r+1]: sum over i,j in A of tp(i,j) - tp(l-1,max) tp(min,r+1)/tp(l-1,r+1).
/// Throws std::domain_error when the edge-to-edge two-point vanishes.
double quench_qfi_from_correlators(
    const std::function<double(Eigen::Index, Eigen::Index)>& two_point, Eigen::Index l,
    Eigen::Index r);

/// Exact-asymptotics decay rate nu_x(u) of the TFIM quench.
double quench_rate_nu_x(const QuenchPair& q, double u);

/// Closed-form asymptotic chi of the ferro-to-ferro TFIM quench at subsystem
/// length |A| and time t (C_FF taken constant).
double quench_chi_asymptotic(const QuenchPair& q, double subsystem_length, double t);

}  // namespace qfi::semiclassics
