#pragma once

#include "qfichain/chain_model.hpp"
#include "qfichain/correlation_matrix.hpp"

#include <string>
#include <vector>

namespace qfi {

enum class KickKind { spin_flip_z, majorana_odd, majorana_even, sigma_x_string };

struct KickEvent {
  double time = 0.0;
  Eigen::Index site = 0;  // 0-based site within the window
  KickKind kind = KickKind::spin_flip_z;
};

struct KickSchedule {
  std::vector<KickEvent> events;  // nondecreasing in time
  double horizon = 0.0;

  void validate() const;
};

/// Unitary evolution of the windowed chain: Gamma(t) = R Gamma R^T with
/// R = exp(t A) the one-particle rotation.  Spectral data of the window
/// generator is computed once and cached per (model, window size).
class Evolver {
 public:
  Evolver(const ChainModel& model, Eigen::Index n_sites);

  CorrelationMatrix evolve(const CorrelationMatrix& g, double dt) const;
  /// Orthogonality defect of R(dt); ~1e-12 for healthy spectral data.
  double rotation_defect(double dt) const;

 private:
  Eigen::MatrixXd rotation(double dt) const;
  Eigen::MatrixXcd vectors_;
  Eigen::VectorXd frequencies_;
};

/// sigma^z_j rho sigma^z_j: flips the signs of both on-site Majoranas.
CorrelationMatrix apply_spin_flip(const CorrelationMatrix& g, Eigen::Index site);
/// a_m rho a_m: flips every Majorana sign except index m.
CorrelationMatrix apply_majorana(const CorrelationMatrix& g, Eigen::Index majorana);
/// sigma^x_l rho sigma^x_l: flips Majorana indices below the x operator.
CorrelationMatrix apply_sigma_x_string(const CorrelationMatrix& g, Eigen::Index site);

CorrelationMatrix apply_kick(const CorrelationMatrix& g, const KickEvent& kick);

struct ScheduleResult {
  std::vector<CorrelationMatrix> samples;  // one per requested sample time
  std::vector<std::string> warnings;       // e.g. lightcone overflow
};

/// Interleaves kicks and free evolution; states are sampled *before* any
/// kick scheduled at the same instant.
ScheduleResult run_schedule(const CorrelationMatrix& g0, const ChainModel& model,
                            const KickSchedule& schedule,
                            const std::vector<double>& sample_times);

/// Window sizing rule: |A| + 2 ceil(vmax T) + 2*pad sites, A centered.
struct WindowSpec {
  Eigen::Index n_sites = 0;
  SiteRange subsystem;  // position of A inside the window
};
WindowSpec window_for(const ChainModel& model, Eigen::Index subsystem_size,
                      double horizon, Eigen::Index pad = 8);

}  // namespace qfi
