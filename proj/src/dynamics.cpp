#include "qfichain/dynamics.hpp"

#include "qfichain/gaussian_states.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace qfi {

using cdouble = std::complex<double>;
namespace {
constexpr cdouble kI{0.0, 1.0};
}

void KickSchedule::validate() const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].time < 0.0) throw std::invalid_argument("kick times must be >= 0");
    if (i > 0 && events[i].time < events[i - 1].time)
      throw std::invalid_argument("kick times must be nondecreasing");
    if (events[i].time > horizon)
      throw std::invalid_argument("kick scheduled beyond the horizon");
  }
}

Evolver::Evolver(const ChainModel& model, Eigen::Index n_sites) {
  const Eigen::MatrixXd a = window_hamiltonian_majorana(model, n_sites);
  // M = -iA is Hermitian; R(t) = exp(tA) = V e^{i t diag} V^dagger.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(-kI * a.cast<cdouble>());
  vectors_ = es.eigenvectors();
  frequencies_ = es.eigenvalues();
}

Eigen::MatrixXd Evolver::rotation(double dt) const {
  Eigen::VectorXcd phase(frequencies_.size());
  for (Eigen::Index j = 0; j < phase.size(); ++j)
    phase(j) = std::exp(kI * frequencies_(j) * dt);
  Eigen::MatrixXcd r = vectors_ * phase.asDiagonal() * vectors_.adjoint();
  return r.real();
}

CorrelationMatrix Evolver::evolve(const CorrelationMatrix& g, double dt) const {
  if (dt < 0.0) throw std::invalid_argument("evolve: dt must be >= 0");
  if (dt == 0.0) return g;
  if (g.dim() != vectors_.rows())
    throw std::invalid_argument("evolve: window size mismatch");
  const Eigen::MatrixXd r = rotation(dt);
  Eigen::MatrixXcd out = r * g.data() * r.transpose();
  return CorrelationMatrix(std::move(out));
}

double Evolver::rotation_defect(double dt) const {
  const Eigen::MatrixXd r = rotation(dt);
  return (r * r.transpose() - Eigen::MatrixXd::Identity(r.rows(), r.cols()))
      .cwiseAbs()
      .maxCoeff();
}

namespace {
CorrelationMatrix flip_signs(const CorrelationMatrix& g,
                             const std::function<bool(Eigen::Index)>& flip) {
  std::vector<int> signs(g.dim());
  for (Eigen::Index j = 0; j < g.dim(); ++j) signs[j] = flip(j) ? -1 : 1;
  return conjugate_by_signs(g, signs);
}
}  // namespace

CorrelationMatrix apply_spin_flip(const CorrelationMatrix& g, Eigen::Index site) {
  if (site < 0 || site >= g.n_sites()) throw std::out_of_range("spin flip outside window");
  return flip_signs(g, [&](Eigen::Index j) { return j == 2 * site || j == 2 * site + 1; });
}

CorrelationMatrix apply_majorana(const CorrelationMatrix& g, Eigen::Index majorana) {
  if (majorana < 0 || majorana >= g.dim())
    throw std::out_of_range("majorana index outside window");
  return flip_signs(g, [&](Eigen::Index j) { return j != majorana; });
}

CorrelationMatrix apply_sigma_x_string(const CorrelationMatrix& g, Eigen::Index site) {
  if (site < 0 || site >= g.n_sites()) throw std::out_of_range("sigma^x outside window");
  return flip_signs(g, [&](Eigen::Index j) { return j <= 2 * site; });
}

CorrelationMatrix apply_kick(const CorrelationMatrix& g, const KickEvent& kick) {
  switch (kick.kind) {
    case KickKind::spin_flip_z: return apply_spin_flip(g, kick.site);
    case KickKind::majorana_odd: return apply_majorana(g, 2 * kick.site);
    case KickKind::majorana_even: return apply_majorana(g, 2 * kick.site + 1);
    case KickKind::sigma_x_string: return apply_sigma_x_string(g, kick.site);
  }
  throw std::logic_error("unknown kick kind");
}

ScheduleResult run_schedule(const CorrelationMatrix& g0, const ChainModel& model,
                            const KickSchedule& schedule,
                            const std::vector<double>& sample_times) {
  schedule.validate();
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < 0.0 || sample_times[i] > schedule.horizon)
      throw std::invalid_argument("sample time outside [0, horizon]");
    if (i > 0 && sample_times[i] < sample_times[i - 1])
      throw std::invalid_argument("sample times must be sorted");
  }

  ScheduleResult result;
  const double vmax = max_velocity(model);
  // A cone started at the window center must not touch the boundary.
  if (vmax * schedule.horizon > 0.5 * double(g0.n_sites() - 1)) {
    std::ostringstream msg;
    msg << "lightcone overflow: vmax*T = " << vmax * schedule.horizon
        << " reaches the boundary of the " << g0.n_sites() << "-site window";
    result.warnings.push_back(msg.str());
  }

  Evolver evolver(model, g0.n_sites());
  CorrelationMatrix state = g0;
  double now = 0.0;
  std::size_t next_event = 0;
  for (double target : sample_times) {
    while (next_event < schedule.events.size() &&
           schedule.events[next_event].time < target) {
      const auto& ev = schedule.events[next_event];
      state = evolver.evolve(state, ev.time - now);
      state = apply_kick(state, ev);
      now = ev.time;
      ++next_event;
    }
    state = evolver.evolve(state, target - now);
    now = target;
    result.samples.push_back(state);
    // Kicks scheduled exactly at a sample time fire after the sample.
    while (next_event < schedule.events.size() &&
           schedule.events[next_event].time == target) {
      state = apply_kick(state, schedule.events[next_event]);
      ++next_event;
    }
  }
  return result;
}

WindowSpec window_for(const ChainModel& model, Eigen::Index subsystem_size,
                      double horizon, Eigen::Index pad) {
  const double vmax = max_velocity(model);
  const Eigen::Index reach = static_cast<Eigen::Index>(std::ceil(vmax * horizon));
  WindowSpec spec;
  spec.n_sites = subsystem_size + 2 * reach + 2 * pad;
  spec.subsystem.first = reach + pad;
  spec.subsystem.last = spec.subsystem.first + subsystem_size - 1;
  return spec;
}

}  // namespace qfi
