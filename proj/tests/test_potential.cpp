#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "anitv/potential.hpp"

using namespace anitv;

TEST_CASE("power potential values and derivative") {
  Potential phi = make_potential(PotentialKind::power, 0.5);
  REQUIRE(phi.eval(0.0) == 0.0);
  REQUIRE(phi.eval(4.0) == Catch::Approx(2.0).margin(1e-14));
  REQUIRE(phi.eval(0.25) == Catch::Approx(0.5).margin(1e-14));
  // phi'(t) = p t^{p-1}; at p=1/2, t=4: 0.5 * 4^{-1/2} = 0.25.
  REQUIRE(phi.prime(4.0) == Catch::Approx(0.25).margin(1e-14));
  REQUIRE(phi.prime(1.0) == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("log-power potential values and derivative") {
  Potential phi = make_potential(PotentialKind::logpower, 0.5);
  REQUIRE(phi.eval(0.0) == 0.0);
  REQUIRE(phi.eval(4.0) == Catch::Approx(std::log(3.0)).margin(1e-14));
  // phi'(t) = p t^{p-1} / (1 + t^p); at p=1/2, t=4: 0.25 / 3.
  REQUIRE(phi.prime(4.0) == Catch::Approx(0.25 / 3.0).margin(1e-14));
}

TEST_CASE("derivative blows up toward zero: the support-shrinking engine") {
  // phi'(t) -> +inf as t -> 0+ for both families; this is what prices small
  // coefficients out of the support.
  for (PotentialKind kind : {PotentialKind::power, PotentialKind::logpower}) {
    Potential phi = make_potential(kind, 0.5);
    double prev = phi.prime(1e-2);
    for (double t : {1e-4, 1e-6, 1e-8}) {
      double cur = phi.prime(t);
      REQUIRE(cur > prev);
      prev = cur;
    }
    REQUIRE(phi.prime(1e-12) > 1e5);
  }
}

TEST_CASE("concavity: finite differences of phi decrease") {
  for (PotentialKind kind : {PotentialKind::power, PotentialKind::logpower}) {
    for (double p : {0.3, 0.5, 0.8}) {
      Potential phi = make_potential(kind, p);
      double h = 0.1;
      double prev_slope = (phi.eval(h) - phi.eval(0.0)) / h;
      for (int j = 1; j < 30; ++j) {
        double t = j * h;
        double slope = (phi.eval(t + h) - phi.eval(t)) / h;
        REQUIRE(slope < prev_slope);
        prev_slope = slope;
      }
    }
  }
}

TEST_CASE("prime matches a central difference away from zero") {
  for (PotentialKind kind : {PotentialKind::power, PotentialKind::logpower}) {
    for (double p : {0.3, 0.5, 0.8}) {
      Potential phi = make_potential(kind, p);
      for (double t : {0.05, 0.4, 1.0, 7.5}) {
        double h = 1e-6 * std::max(1.0, t);
        double fd = (phi.eval(t + h) - phi.eval(t - h)) / (2 * h);
        REQUIRE(phi.prime(t) == Catch::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("potential domain and parameter validation") {
  REQUIRE_THROWS_AS(make_potential(PotentialKind::power, 0.0), parameter_error);
  REQUIRE_THROWS_AS(make_potential(PotentialKind::power, 1.0), parameter_error);
  REQUIRE_THROWS_AS(make_potential(PotentialKind::logpower, -0.5), parameter_error);
  REQUIRE_THROWS_AS(make_potential(PotentialKind::logpower, 1.5), parameter_error);
  Potential phi = make_potential(PotentialKind::power, 0.5);
  REQUIRE_THROWS_AS(phi.eval(-1.0), domain_error);
  REQUIRE_THROWS_AS(phi.prime(0.0), domain_error);
  REQUIRE_THROWS_AS(phi.prime(-0.1), domain_error);
}

TEST_CASE("potential lookup by name") {
  REQUIRE(make_potential("power", 0.5).kind == PotentialKind::power);
  REQUIRE(make_potential("logpower", 0.5).kind == PotentialKind::logpower);
  REQUIRE_THROWS_AS(make_potential("tv", 0.5), parameter_error);
}
