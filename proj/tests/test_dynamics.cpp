#include "qfichain/dynamics.hpp"
#include "qfichain/gaussian_states.hpp"
#include "qfichain/oracle.hpp"

#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <limits>

using namespace qfi;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("evolve: identity at dt = 0 and stationary ground state") {
  ChainModel m{0.5, 1.0};
  const Eigen::Index W = 20;
  CorrelationMatrix g = thermal_correlations_finite(m, kInf, W);
  Evolver ev(m, W);
  CHECK(ev.rotation_defect(1.7) < 1e-10);

  CorrelationMatrix same = ev.evolve(g, 0.0);
  CHECK((same.data() - g.data()).cwiseAbs().maxCoeff() == 0.0);

  CorrelationMatrix later = ev.evolve(g, 2.5);
  CHECK((later.data() - g.data()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("kicks are involutive and local") {
  ChainModel m{0.5, 1.0};
  CorrelationMatrix g = ground_state_correlations(m, 10);

  CorrelationMatrix f2 = apply_spin_flip(apply_spin_flip(g, 4), 4);
  CHECK((f2.data() - g.data()).cwiseAbs().maxCoeff() == 0.0);

  CorrelationMatrix m2 = apply_majorana(apply_majorana(g, 7), 7);
  CHECK((m2.data() - g.data()).cwiseAbs().maxCoeff() == 0.0);

  // h=0 product state: spin flip at j reverses <sx_j sx_n> for n != j
  CorrelationMatrix p = ground_state_correlations(ChainModel{0.0, 1.0}, 8);
  CorrelationMatrix pf = apply_spin_flip(p, 3);
  for (Eigen::Index n = 0; n < 8; ++n) {
    const double expected = (n == 3) ? 1.0 : -1.0;
    if (n >= 3) CHECK(two_point_x(pf, 3, n) == doctest::Approx(expected));
  }

  // majorana kick on h=0 ground: domain wall at the kick site
  CorrelationMatrix pw = apply_majorana(p, 2 * 4);  // x-type Majorana of site 4
  CHECK(two_point_x(pw, 3, 4) == doctest::Approx(-1.0));  // wall between 3 and 4
  CHECK(two_point_x(pw, 4, 5) == doctest::Approx(1.0));
  CHECK(two_point_x(pw, 2, 3) == doctest::Approx(1.0));
}

TEST_CASE("kick + evolution pipeline matches exact diagonalization") {
  const Eigen::Index L = 8;
  ChainModel m{0.5, 1.0};
  const auto ham = oracle::build_hamiltonian(L, m.h, m.gamma);

  // finite-chain ground state, kick, evolve; compare full Gamma(t)
  const auto rho0 = oracle::thermal_state(ham, kInf);
  CorrelationMatrix g0 = thermal_correlations_finite(m, kInf, L);

  SUBCASE("spin flip at center") {
    const auto u = oracle::pauli_at(L, 3, 'z');
    auto rho = oracle::apply_unitary(rho0, u);
    rho = oracle::evolve_exact(rho, ham, 2.0);
    CorrelationMatrix g = apply_spin_flip(g0, 3);
    Evolver ev(m, L);
    g = ev.evolve(g, 2.0);
    CHECK((g.data() - oracle::correlations_of(rho).data()).cwiseAbs().maxCoeff() < 1e-7);
  }

  SUBCASE("majorana kick") {
    const auto u = oracle::majorana_at(L, 2 * 3);
    auto rho = oracle::apply_unitary(rho0, u);
    rho = oracle::evolve_exact(rho, ham, 1.5);
    CorrelationMatrix g = apply_majorana(g0, 2 * 3);
    Evolver ev(m, L);
    g = ev.evolve(g, 1.5);
    CHECK((g.data() - oracle::correlations_of(rho).data()).cwiseAbs().maxCoeff() < 1e-7);
  }

  SUBCASE("sigma^x string kick") {
    const auto u = oracle::pauli_at(L, 2, 'x');
    auto rho = oracle::apply_unitary(rho0, u);
    rho = oracle::evolve_exact(rho, ham, 1.0);
    // sigma^x_l = (prod_{j<l} Z_j) a_{2l}; the window string representation
    CorrelationMatrix g = apply_sigma_x_string(g0, 2);
    Evolver ev(m, L);
    g = ev.evolve(g, 1.0);
    CHECK((g.data() - oracle::correlations_of(rho).data()).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("purity is preserved along schedules") {
  // pure input: gapped paramagnetic chain at beta = infinity
  ChainModel m{1.3, 1.0};
  WindowSpec spec = window_for(m, 9, 6.0);
  CorrelationMatrix g0 = thermal_correlations_finite(m, kInf, spec.n_sites);
  KickSchedule schedule;
  const Eigen::Index center = (spec.subsystem.first + spec.subsystem.last) / 2;
  schedule.events.push_back({0.0, center, KickKind::spin_flip_z});
  schedule.events.push_back({3.0, center, KickKind::spin_flip_z});
  schedule.horizon = 6.0;
  auto result = run_schedule(g0, m, schedule, {0.0, 2.0, 4.0, 6.0});
  REQUIRE(result.samples.size() == 4);
  for (const auto& s : result.samples) {
    Eigen::VectorXd sv = s.singular_values();
    CHECK(std::abs(sv(0) - 1.0) < 1e-8);
    CHECK(std::abs(sv(sv.size() - 1) - 1.0) < 1e-8);
  }
}

TEST_CASE("schedule ordering: kick at t=0 equals kick-then-evolve") {
  ChainModel m{0.5, 1.0};
  const Eigen::Index W = 24;
  CorrelationMatrix g0 = ground_state_correlations(m, W);
  KickSchedule s;
  s.events.push_back({0.0, 12, KickKind::majorana_odd});
  s.horizon = 2.0;
  auto run = run_schedule(g0, m, s, {2.0});

  Evolver ev(m, W);
  CorrelationMatrix manual = ev.evolve(apply_majorana(g0, 24), 2.0);
  CHECK((run.samples[0].data() - manual.data()).cwiseAbs().maxCoeff() < 1e-12);

  // sampling at t=0 happens before the kick fires
  auto run0 = run_schedule(g0, m, s, {0.0});
  CHECK((run0.samples[0].data() - g0.data()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("distant kicks commute up to exponential tails") {
  ChainModel m{0.5, 1.0};
  const Eigen::Index W = 56;
  CorrelationMatrix g0 = ground_state_correlations(m, W);
  Evolver ev(m, W);

  auto pipeline = [&](Eigen::Index first, Eigen::Index second) {
    CorrelationMatrix g = apply_spin_flip(g0, first);
    g = ev.evolve(g, 1.0);
    g = apply_spin_flip(g, second);
    g = ev.evolve(g, 1.0);
    return g;
  };
  CorrelationMatrix ab = pipeline(8, 47);
  CorrelationMatrix ba = pipeline(47, 8);
  // compare on the central region, far from both kicks
  CorrelationMatrix ca = restrict_sites(ab, SiteRange{24, 31});
  CorrelationMatrix cb = restrict_sites(ba, SiteRange{24, 31});
  CHECK((ca.data() - cb.data()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("schedule validation") {
  KickSchedule s;
  s.events.push_back({2.0, 0, KickKind::spin_flip_z});
  s.events.push_back({1.0, 0, KickKind::spin_flip_z});
  s.horizon = 3.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  KickSchedule beyond;
  beyond.events.push_back({5.0, 0, KickKind::spin_flip_z});
  beyond.horizon = 3.0;
  CHECK_THROWS_AS(beyond.validate(), std::invalid_argument);
}

TEST_CASE("window sizing covers the lightcone") {
  ChainModel m{0.5, 1.0};
  WindowSpec spec = window_for(m, 11, 10.0);
  CHECK(spec.subsystem.size() == 11);
  CHECK(spec.n_sites >= 11 + 2 * 10);  // vmax = 1
  CHECK(spec.subsystem.first >= 10);

  CorrelationMatrix g0 = ground_state_correlations(m, spec.n_sites);
  KickSchedule s;
  s.horizon = 100.0;  // deliberately overflowing
  auto r = run_schedule(g0, m, s, {100.0});
  CHECK(!r.warnings.empty());
}
