#include "qfichain/measures.hpp"

#include "qfichain/dynamics.hpp"
#include "qfichain/gaussian_states.hpp"
#include "qfichain/oracle.hpp"
#include "qfichain/quadrature.hpp"

#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace qfi;
using cdouble = std::complex<double>;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double ed_wydi_halfchain(const ChainModel& m, Eigen::Index L, double beta, cdouble alpha,
                         Eigen::Index a_first, Eigen::Index a_last) {
  const auto ham = oracle::build_hamiltonian(L, m.h, m.gamma);
  const auto rho = oracle::thermal_state(ham, beta);
  std::vector<Eigen::Index> sites;
  for (Eigen::Index j = a_first; j <= a_last; ++j) sites.push_back(j);
  const auto rho_a = oracle::reduce(rho, sites);
  const auto obs = oracle::order_parameter_x(sites.size(), 0, sites.size() - 1);
  return oracle::wydi_exact(rho_a, obs, alpha);
}
}  // namespace

TEST_CASE("variance of X_A in reference states") {
  // beta = 0: uncorrelated spins, variance = |A|
  CorrelationMatrix id = thermal_correlations(ChainModel{0.5, 1.0}, 0.0, 8);
  CHECK(variance_x(id, SiteRange{1, 6}) == doctest::Approx(6.0).epsilon(1e-12));

  // h=0 symmetric sector: GHZ-like, variance = |A|^2
  CorrelationMatrix ghz = ground_state_correlations(ChainModel{0.0, 1.0}, 8);
  CHECK(variance_x(ghz, SiteRange{0, 7}) == doctest::Approx(64.0).epsilon(1e-10));

  // against ED at L = 8
  ChainModel m{0.5, 1.0};
  const auto ham = oracle::build_hamiltonian(8, m.h, m.gamma);
  const auto rho = oracle::thermal_state(ham, 2.0);
  const auto obs = oracle::order_parameter_x(8, 0, 7);
  CorrelationMatrix g = thermal_correlations_finite(m, 2.0, 8);
  CHECK(variance_x(g, SiteRange{0, 7}) ==
        doctest::Approx(oracle::variance_exact(rho, obs)).epsilon(1e-8));
}

TEST_CASE("wydi: trivial limits") {
  // vanishing correlation matrix: rho ~ identity, I_alpha = 0
  CorrelationMatrix id(Eigen::MatrixXcd::Zero(12, 12));
  for (cdouble alpha : {cdouble(0.5, 0.0), cdouble(1.0 / 3.0, 0.0), cdouble(0.5, 1.0)})
    CHECK(std::abs(wydi(id, SiteRange{0, 5}, alpha)) < 1e-12);

  // pure state: I_alpha equals the variance for every alpha
  ChainModel m{0.5, 1.0};
  CorrelationMatrix chain = thermal_correlations_finite(m, kInf, 8);
  const double var = variance_x(chain, SiteRange{0, 7});
  for (cdouble alpha : {cdouble(0.5, 0.0), cdouble(1.0 / 3.0, 0.0), cdouble(0.5, 1.0)})
    CHECK(wydi(chain, SiteRange{0, 7}, alpha) == doctest::Approx(var).epsilon(1e-6));

  CHECK_THROWS_AS(wydi(chain, SiteRange{0, 7}, cdouble(1.2, 0.0)), std::invalid_argument);
}

TEST_CASE("wydi matches the exact eigen-sum on small chains") {
  ChainModel m{0.5, 1.0};
  const Eigen::Index L = 6;
  for (double beta : {0.5, 2.0}) {
    CorrelationMatrix g = thermal_correlations_finite(m, beta, L);
    for (cdouble alpha :
         {cdouble(0.5, 0.0), cdouble(1.0 / 3.0, 0.0), cdouble(0.5, 0.7), cdouble(0.5, 1.0)}) {
      const double gaussian = wydi(g, SiteRange{0, L - 1}, alpha);
      const double exact = ed_wydi_halfchain(m, L, beta, alpha, 0, L - 1);
      CAPTURE(beta);
      CAPTURE(alpha.real());
      CAPTURE(alpha.imag());
      CHECK(std::abs(gaussian - exact) < 1e-8);
    }
    // proper subsystem of the chain
    for (cdouble alpha : {cdouble(0.5, 0.0), cdouble(0.5, 0.4)}) {
      const double gaussian = wydi(g, SiteRange{1, 4}, alpha);
      const double exact = ed_wydi_halfchain(m, L, beta, alpha, 1, 4);
      CHECK(std::abs(gaussian - exact) < 1e-8);
    }
  }
}

TEST_CASE("wydi of a kicked, evolved state matches ED") {
  ChainModel m{0.5, 1.0};
  const Eigen::Index L = 8;
  const auto ham = oracle::build_hamiltonian(L, m.h, m.gamma);
  auto rho = oracle::thermal_state(ham, kInf);
  rho = oracle::apply_unitary(rho, oracle::pauli_at(L, 4, 'z'));
  rho = oracle::evolve_exact(rho, ham, 1.5);
  std::vector<Eigen::Index> sites{2, 3, 4, 5};
  const auto rho_a = oracle::reduce(rho, sites);
  const auto obs = oracle::order_parameter_x(4, 0, 3);

  CorrelationMatrix g = thermal_correlations_finite(m, kInf, L);
  g = apply_spin_flip(g, 4);
  Evolver ev(m, L);
  g = ev.evolve(g, 1.5);

  for (cdouble alpha : {cdouble(0.5, 0.0), cdouble(0.5, 0.6)}) {
    const double gaussian = wydi(g, SiteRange{2, 5}, alpha);
    const double exact = oracle::wydi_exact(rho_a, obs, alpha);
    CHECK(std::abs(gaussian - exact) < 1e-8);
  }
}

TEST_CASE("rWYDI is real and even in beta; concave in alpha with max at 1/2") {
  ChainModel m{0.5, 1.0};
  CorrelationMatrix g = thermal_correlations_finite(m, 2.0, 6);
  const SiteRange a{0, 5};
  for (double beta : {0.3, 1.1}) {
    const double plus = wydi(g, a, cdouble(0.5, beta));
    const double minus = wydi(g, a, cdouble(0.5, -beta));
    CHECK(plus == doctest::Approx(minus).epsilon(1e-9));
  }
  // Lieb concavity on the real-alpha section
  std::vector<double> values;
  for (int i = 1; i <= 9; ++i) values.push_back(wydi(g, a, cdouble(0.1 * i, 0.0)));
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    CHECK(values[i] >= 0.5 * (values[i - 1] + values[i + 1]) - 1e-9);
  for (double v : values) CHECK(v <= values[4] + 1e-9);
  // symmetry I_alpha = I_{1-alpha}
  CHECK(values[1] == doctest::Approx(values[7]).epsilon(1e-9));
}

TEST_CASE("qfi_estimate: pure state returns the variance") {
  ChainModel m{0.5, 1.0};
  CorrelationMatrix chain = thermal_correlations_finite(m, kInf, 10);
  const double var = variance_x(chain, SiteRange{0, 9});
  auto est = qfi_estimate(chain, SiteRange{0, 9});
  CHECK(est.value == doctest::Approx(var).epsilon(1e-6));
}

TEST_CASE("qfi_estimate matches the exact QFI eigen-sum") {
  ChainModel m{0.5, 1.0};
  const Eigen::Index L = 6;
  for (double beta : {0.5, 2.0}) {
    const auto ham = oracle::build_hamiltonian(L, m.h, m.gamma);
    const auto rho = oracle::thermal_state(ham, beta);
    std::vector<Eigen::Index> sites{0, 1, 2, 3, 4, 5};
    const auto obs = oracle::order_parameter_x(L, 0, L - 1);
    const double exact = oracle::qfi_exact(rho, obs);

    CorrelationMatrix g = thermal_correlations_finite(m, beta, L);
    auto est = qfi_estimate(g, SiteRange{0, L - 1});
    CAPTURE(beta);
    CHECK(std::abs(est.value - exact) < 1e-4 * std::abs(exact));
  }
}

TEST_CASE("qfi bounds chain on thermal and random states") {
  ChainModel m{0.5, 1.0};
  CorrelationMatrix g = thermal_correlations_finite(m, 2.0, 5);
  const SiteRange a{0, 4};
  const auto b = qfi_bounds(g, a);

  const auto ham = oracle::build_hamiltonian(5, m.h, m.gamma);
  const auto rho = oracle::thermal_state(ham, 2.0);
  const auto obs = oracle::order_parameter_x(5, 0, 4);
  const double f4 = oracle::qfi_exact(rho, obs);

  CHECK(b.lower <= f4 + 1e-10);
  CHECK(f4 <= b.upper_2i + 1e-10);
  CHECK(f4 <= b.upper_mixed + 1e-10);
  CHECK(b.lower_rho2 <= b.lower + 1e-10);
  // the paper's observation: the mixed bound is tighter than 2I here
  CHECK(b.upper_mixed <= b.upper_2i);
}

TEST_CASE("monotone decay of the sech-weighted integrand") {
  ChainModel m{0.5, 1.0};
  CorrelationMatrix g = thermal_correlations_finite(m, 2.0, 6);
  const auto grid = rwydi_grid(g, SiteRange{0, 5});
  const double pi = std::numbers::pi;
  double prev = std::abs(grid[10].second / std::cosh(pi * grid[10].first));
  for (std::size_t i = 11; i < grid.size(); ++i) {
    const double cur = std::abs(grid[i].second / std::cosh(pi * grid[i].first));
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("measure_subsystem assembles a consistent report") {
  ChainModel m{0.5, 1.0};
  CorrelationMatrix g = thermal_correlations(m, 2.0, 10);
  const auto r = measure_subsystem(g, SiteRange{2, 7});
  CHECK(r.subsystem.size() == 6);
  CHECK(r.variance > 0.0);
  CHECK(r.lower <= r.qfi_over4 + r.qfi_err + 1e-9);
  CHECK(r.qfi_over4 - r.qfi_err <= r.upper + 1e-9);
  CHECK(r.chi == doctest::Approx(r.qfi_over4 / 36.0));
  CHECK(r.chi >= 0.0);
  CHECK(r.chi <= 1.0);
  CHECK(!r.wydi_grid.empty());
  CHECK(r.i_half >= r.i_third - 1e-12);
}
