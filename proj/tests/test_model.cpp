#include "qfichain/chain_model.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace qfi;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("dispersion at reference points") {
  ChainModel tfim{0.5, 1.0};
  CHECK(dispersion(tfim, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dispersion(tfim, kPi) == doctest::Approx(3.0).epsilon(1e-12));
  ChainModel critical{1.0, 1.0};
  CHECK(dispersion(critical, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("group velocity matches printed formula and dispersion derivative") {
  ChainModel tfim{0.5, 1.0};
  CHECK(group_velocity(tfim, kPi / 2) ==
        doctest::Approx(2.0 * 0.5 / std::sqrt(1.25)).epsilon(1e-12));
  CHECK(group_velocity(tfim, 0.0) == doctest::Approx(0.0));

  for (const ChainModel m : {ChainModel{0.5, 1.0}, ChainModel{1.7, 0.4},
                             ChainModel{-0.3, 0.8}, ChainModel{0.2, -1.0}}) {
    const double delta = 1e-5;
    for (int i = 0; i <= 1000; ++i) {
      const double k = -kPi + 2 * kPi * i / 1000.0;
      const double fd = (dispersion(m, k + delta) - dispersion(m, k - delta)) / (2 * delta);
      if (dispersion(m, k) < 1e-6) continue;
      CHECK(std::abs(group_velocity(m, k) - fd) < 1e-6);
    }
  }
}

TEST_CASE("velocity odd, dispersion even") {
  ChainModel m{0.8, 0.6};
  for (double k : {0.1, 0.7, 1.9, 3.0}) {
    CHECK(dispersion(m, k) == doctest::Approx(dispersion(m, -k)).epsilon(1e-14));
    CHECK(group_velocity(m, k) == doctest::Approx(-group_velocity(m, -k)).epsilon(1e-14));
  }
}

TEST_CASE("max velocity of the TFIM is 2 min(|h|, 1)") {
  for (double h : {0.3, 0.5, 0.8, 1.5, 2.0}) {
    ChainModel m{h, 1.0};
    CHECK(std::abs(max_velocity(m) - 2.0 * std::min(std::abs(h), 1.0)) < 1e-9);
  }
  // flat band: h = 0, gamma = 1 has v identically zero
  CHECK(max_velocity(ChainModel{0.0, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("critical momentum returns symmetric limit with flag") {
  ChainModel critical{1.0, 1.0};
  auto r = group_velocity_checked(critical, 0.0);
  CHECK(r.critical_momentum);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK(max_velocity(critical) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("Bogoliubov angle difference") {
  QuenchPair same{{0.4, 1.0}, {0.4, 1.0}};
  for (double k : {0.0, 0.3, 1.2, 3.0})
    CHECK(bogoliubov_angle_difference(same, k) == doctest::Approx(1.0).epsilon(1e-14));

  QuenchPair q{{0.0, 1.0}, {0.4, 1.0}};
  CHECK(bogoliubov_angle_difference(q, kPi / 2) ==
        doctest::Approx(1.0 / std::sqrt(1.16)).epsilon(1e-12));
  CHECK(bogoliubov_angle_difference(q, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double k : {0.1, 0.9, 2.2}) {
    const double v = bogoliubov_angle_difference(q, k);
    CHECK(v <= 1.0);
    CHECK(v >= -1.0);
  }
}

TEST_CASE("C_FF amplitude") {
  QuenchPair same{{0.5, 1.0}, {0.5, 1.0}};
  CHECK(c_ff(same) == doctest::Approx(std::pow(0.75, 0.25)).epsilon(1e-13));
  QuenchPair q{{0.0, 1.0}, {0.4, 1.0}};
  CHECK(c_ff(q) == doctest::Approx((1.0 + std::sqrt(0.84)) / 2.0).epsilon(1e-13));
  QuenchPair trivial{{0.0, 1.0}, {0.0, 1.0}};
  CHECK(c_ff(trivial) == doctest::Approx(1.0));
  CHECK_THROWS_AS(c_ff(QuenchPair{{0.0, 1.0}, {1.5, 1.0}}), std::domain_error);
}
