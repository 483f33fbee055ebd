#pragma once

#include <stdexcept>

namespace qfi {

/// Quantum XY chain in a transverse field:
///   H = -sum_l [ (1+gamma)/2 XX + (1-gamma)/2 YY + h Z ].
/// The TFIM is gamma = 1.
struct ChainModel {
  double h = 0.0;
  double gamma = 1.0;

  bool ferromagnetic() const { return std::abs(h) < 1.0 && gamma != 0.0; }
  bool critical() const { return std::abs(std::abs(h) - 1.0) < 1e-12; }
};

/// Sudden change of the transverse field h0 -> h at fixed gamma.
struct QuenchPair {
  ChainModel pre;
  ChainModel post;
};

/// Single-particle energy, eps_k = 2 sqrt((h - cos k)^2 + gamma^2 sin^2 k).
double dispersion(const ChainModel& model, double k);

struct VelocityResult {
  double value = 0.0;
  bool critical_momentum = false;  // eps_k = 0; value is the symmetric limit
};

/// Group velocity v_k = d eps_k / dk.  At a gap-closing momentum the
/// symmetric limit (0) is returned together with a diagnostic flag.
VelocityResult group_velocity_checked(const ChainModel& model, double k);
double group_velocity(const ChainModel& model, double k);

/// Maximal group velocity over the Brillouin zone.
double max_velocity(const ChainModel& model);

/// cos(Delta_k) for a TFIM quench, Delta_k the Bogoliubov angle difference.
double bogoliubov_angle_difference(const QuenchPair& q, double k);

/// Amplitude C_FF of the ferromagnet-to-ferromagnet TFIM quench asymptotics.
double c_ff(const QuenchPair& q);

}  // namespace qfi
