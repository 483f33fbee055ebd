#include "qfichain/beyond_sc.hpp"

#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

using namespace qfi;
using namespace qfi::beyond_sc;
using cdouble = std::complex<double>;

namespace {
constexpr double kPi = std::numbers::pi;

// brute-force Riemann oracle for the window integrals
WindowIntegrals riemann_oracle(const TwoParticleSector& s, double t, double l, double r,
                               std::size_t points) {
  WindowIntegrals w;
  w.t = t;
  w.l = l;
  w.r = r;
  const cdouble i_unit{0.0, 1.0};
  for (int n = -1; n <= 1; ++n) {
    cdouble ell = 0, a = 0, o = 0, o2 = 0;
    for (std::size_t m = 0; m < points; ++m) {
      const double k = -kPi + 2.0 * kPi * (double(m) + 0.5) / double(points);
      const double v = s.velocity(k);
      const cdouble phase = std::exp(i_unit * double(n) * k);
      const double weight = (r + l) / t - 2.0 * v;
      if (l - v * t >= 0) ell += phase;
      if (r - v * t >= 0 && v * t - l >= 0) {
        a += phase;
        o += phase * weight;
        o2 += phase * weight * weight;
      }
    }
    const double h = 1.0 / double(points);
    w.ell[n + 1] = ell * h;
    w.a[n + 1] = a * h;
    w.o[n + 1] = o * h;
    w.o2[n + 1] = o2 * h;
  }
  return w;
}
}  // namespace

TEST_CASE("window integrals: indicator limits") {
  const auto s = TwoParticleSector::sine_velocity();
  // cone entirely right of l: theta(l - vt) always true
  {
    const auto w = window_integrals(s, 2.0, 3.0, 5.0);
    CHECK(std::abs(w.L(0) - 1.0) < 1e-12);
    CHECK(std::abs(w.L(1)) < 1e-12);
    CHECK(std::abs(w.L(-1)) < 1e-12);
  }
  // window covering the full velocity range: A_0 = 1
  {
    const auto w = window_integrals(s, 2.0, -5.0, 5.0);
    CHECK(std::abs(w.A(0) - 1.0) < 1e-12);
    CHECK(std::abs(w.A(1)) < 1e-12);
  }
}

TEST_CASE("window integrals match the brute-force oracle") {
  const auto s = TwoParticleSector::sine_velocity();
  const double t = 10.0, r = 0.5 * t, l = -r;
  const auto w = window_integrals(s, t, l, r);
  const auto ref = riemann_oracle(s, t, l, r, 1'000'000);
  for (int n = -1; n <= 1; ++n) {
    CHECK(std::abs(w.L(n) - ref.L(n)) < 1e-5);
    CHECK(std::abs(w.A(n) - ref.A(n)) < 1e-5);
    CHECK(std::abs(w.O(n) - ref.O(n)) < 1e-5);
    CHECK(std::abs(w.O2(n) - ref.O2(n)) < 1e-5);
  }
  // conjugation symmetry of the integrals
  CHECK(std::abs(w.A(-1) - std::conj(w.A(1))) < 1e-12);
  CHECK(std::abs(w.L(-1) - std::conj(w.L(1))) < 1e-12);
  // window-coverage bounds
  CHECK(w.A(0).real() >= 0.0);
  CHECK(w.A(0).real() <= 1.0 + 1e-12);
  CHECK(std::abs(w.A(1)) <= w.A(0).real() + 1e-12);
  CHECK(w.L(0).real() >= 0.0);
  CHECK(w.L(0).real() <= 1.0 + 1e-12);
}

TEST_CASE("high-resolution brute force agreement (TFIM-like window)") {
  const auto s = TwoParticleSector::from_model(ChainModel{0.5, 1.0});
  const double t = 40.0, r = 0.35 * t, l = -r;
  const auto w = window_integrals(s, t, l, r);
  const auto ref = riemann_oracle(s, t, l, r, 2'000'000);
  for (int n = -1; n <= 1; ++n) {
    CHECK(std::abs(w.A(n) - ref.A(n)) < 1e-6);
    CHECK(std::abs(w.O2(n) - ref.O2(n)) < 1e-5);
  }
}

TEST_CASE("P and O matrices: printed formulas and limits") {
  const auto s = TwoParticleSector::sine_velocity();
  const auto w = window_integrals(s, 12.0, -6.0, 4.0);
  const auto m = p_o_matrices(w);

  // independent re-evaluation of the printed entries
  const cdouble a0 = w.A(0), a1 = w.A(1);
  const double disc = a0.real() * a0.real() - std::norm(a1);
  const double root = std::sqrt(disc);
  CHECK(std::abs(m.p(0, 0) - (w.L(0) * (a0 * a0 + std::norm(a1)) / a0 -
                              2.0 * std::real(a1 * w.L(-1)))) < 1e-12);
  CHECK(std::abs(m.p(0, 1) - root * (a1 * w.L(0) - a0 * w.L(1)) / a0) < 1e-12);
  CHECK(std::abs(m.o(0, 0) - w.O(0) / a0) < 1e-12);
  CHECK(std::abs(m.o(0, 1) - (a0 * w.O(1) - a1 * w.O(0)) / (a0 * root)) < 1e-12);

  // hermiticity from the conjugation symmetry of the inputs
  CHECK((m.p - m.p.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((m.o - m.o.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((m.o2 - m.o2.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  // positive semidefinite P on physical windows
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m.p);
  CHECK(es.eigenvalues()(0) > -1e-10);

  // semiclassical limit: off-diagonal inputs zeroed
  WindowIntegrals zeroed = w;
  zeroed.a[0] = zeroed.a[2] = 0.0;
  zeroed.ell[0] = zeroed.ell[2] = 0.0;
  zeroed.o[0] = zeroed.o[2] = 0.0;
  zeroed.o2[0] = zeroed.o2[2] = 0.0;
  const auto sc = p_o_matrices(zeroed);
  CHECK(std::abs(sc.p(0, 0) - w.L(0) * w.A(0)) < 1e-12);
  CHECK(std::abs(sc.p(1, 1) - w.L(0) * w.A(0)) < 1e-12);
  CHECK(std::abs(sc.p(0, 1)) < 1e-12);
  CHECK(std::abs(sc.o(0, 0) - w.O(0) / w.A(0)) < 1e-12);
  CHECK(std::abs(sc.o(1, 1) - w.O(0) / w.A(0)) < 1e-12);
}

TEST_CASE("degenerate basis is rejected") {
  WindowIntegrals w;
  w.t = 1;
  w.l = -1;
  w.r = 1;
  w.a[1] = 0.3;
  w.a[0] = w.a[2] = 0.3;  // |A1| = A0
  CHECK_THROWS_AS(p_o_matrices(w), std::domain_error);
}

TEST_CASE("zeroed off-diagonals reproduce the semiclassical closed form") {
  const auto s = TwoParticleSector::from_model(ChainModel{0.5, 1.0});
  for (double ratio : {0.3, 0.6, 0.9}) {
    const double t = 50.0, r = ratio * t;
    auto w = window_integrals(s, t, -r, r);
    WindowIntegrals zeroed = w;
    zeroed.a[0] = zeroed.a[2] = 0.0;
    zeroed.ell[0] = zeroed.ell[2] = 0.0;
    zeroed.o[0] = zeroed.o[2] = 0.0;
    zeroed.o2[0] = zeroed.o2[2] = 0.0;
    CHECK(chi_block(zeroed) ==
          doctest::Approx(chi_block_semiclassical(w)).epsilon(1e-10));
  }
}

TEST_CASE("reflection symmetry of the one-particle contribution") {
  const auto s = TwoParticleSector::from_model(ChainModel{0.5, 1.0});
  // reflected windows with reflected velocity give the same total
  const double t = 30.0;
  const double chi_a = chi_one_particle(s, t, -0.4 * t, 0.7 * t);
  TwoParticleSector mirrored = s;
  auto v = s.velocity;
  mirrored.velocity = [v](double k) { return -v(-k); };
  const double chi_b = chi_one_particle(mirrored, t, -0.7 * t, 0.4 * t);
  CHECK(chi_a == doctest::Approx(chi_b).epsilon(1e-9));
}

TEST_CASE("exact vs semiclassical: gap inside the cone, none outside") {
  const auto s = TwoParticleSector::from_model(ChainModel{0.5, 1.0});
  const double t = 64.0;
  double max_gap = 0.0;
  for (double ratio : {0.3, 0.5, 0.7}) {
    const double r = ratio * t;
    const double gap =
        std::abs(chi_one_particle(s, t, -r, r) - chi_one_particle_semiclassical(s, t, -r, r));
    max_gap = std::max(max_gap, gap);
  }
  CHECK(max_gap > 1e-4);  // interference is visible inside the cone

  const double r_out = 1.2 * t;  // beyond the velocity support (vmax = 1)
  const double gap_out = std::abs(chi_one_particle(s, t, -r_out, r_out) -
                                  chi_one_particle_semiclassical(s, t, -r_out, r_out));
  CHECK(gap_out < 1e-6);
}

TEST_CASE("Bethe momenta solve the quantization conditions") {
  const Eigen::Index L = 10;
  for (int eta : {1, -1}) {
    const auto pairs = bethe_momenta(L, eta);
    CHECK(Eigen::Index(pairs.size()) == L * (L - 1) / 2);
    for (const auto& [k, p] : pairs) {
      CHECK(k < p);
      // e^{iLp} = eta S = -eta and e^{iL(k+p)} = 1
      CHECK(std::abs(std::exp(cdouble(0, 1) * double(L) * p) - cdouble(-eta, 0)) < 1e-10);
      CHECK(std::abs(std::exp(cdouble(0, 1) * double(L) * (k + p)) - cdouble(1, 0)) < 1e-10);
    }
  }
}

TEST_CASE("Bethe states: orthonormality, eigenstate property, overlaps") {
  const Eigen::Index L = 10;
  const Eigen::Index half = L / 2;

  // collect every state of both spin-flip sectors
  std::vector<BetheState> states;
  for (int eta : {1, -1})
    for (const auto& [k, p] : bethe_momenta(L, eta))
      states.push_back(bethe_state(L, k, p, eta));

  // wall-hopping Hamiltonian on the flipped-block coefficients (ring with
  // the eta-twisted wrap identification c_{n-L,l} = eta c_{l,n})
  auto apply_h = [&](const BetheState& st) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(L, L);
    auto fetch = [&](Eigen::Index a, Eigen::Index b) -> cdouble {
      // canonicalize the wall pair (a, b) to -half < a < b <= half
      if (a == b) return 0.0;  // walls collide: hard core
      if (b > half) {
        const Eigen::Index bw = b - L;
        if (bw == a) return 0.0;
        return double(st.eta) * st.coeffs(bw + half - 1, a + half - 1);
      }
      if (a < -half + 1) {
        const Eigen::Index aw = a + L;
        if (aw == b) return 0.0;
        return double(st.eta) * st.coeffs(b + half - 1, aw + half - 1);
      }
      return st.coeffs(a + half - 1, b + half - 1);
    };
    for (Eigen::Index l = -half + 1; l <= half - 1; ++l)
      for (Eigen::Index n = l + 1; n <= half; ++n)
        out(l + half - 1, n + half - 1) = -(fetch(l - 1, n) + fetch(l + 1, n) +
                                            fetch(l, n - 1) + fetch(l, n + 1));
    return out;
  };

  for (std::size_t i = 0; i < states.size(); i += 7) {
    const auto& st = states[i];
    const double energy = -2.0 * std::cos(st.k) - 2.0 * std::cos(st.p);
    const Eigen::MatrixXcd hc = apply_h(st);
    CHECK((hc - energy * st.coeffs).cwiseAbs().maxCoeff() < 1e-10);
  }

  // orthonormality within a sector (spot checks) and normalization
  auto inner = [&](const BetheState& a, const BetheState& b) {
    cdouble acc = 0.0;
    for (Eigen::Index i = 0; i < L; ++i)
      for (Eigen::Index j = 0; j < L; ++j)
        acc += std::conj(a.coeffs(i, j)) * b.coeffs(i, j);
    return 2.0 * acc;  // the +/- doublet doubles every inner product
  };
  CHECK(std::abs(inner(states[0], states[0]) - 1.0) < 1e-12);
  CHECK(std::abs(inner(states[3], states[3]) - 1.0) < 1e-12);
  CHECK(std::abs(inner(states[0], states[5])) < 1e-10);

  // completeness through the local perturbation: U_0 = e^{i a sigma^x_0}
  // couples |up> to the single flipped spin |(-1,0)>; summing the overlap
  // weights over every Bethe state resolves that vector exactly.
  const double alpha = 0.7;
  double weight = 0.0;
  for (const auto& st : states) weight += std::norm(st.perturbation_overlap(alpha));
  CHECK(weight == doctest::Approx(std::sin(alpha) * std::sin(alpha)).epsilon(1e-10));
}
