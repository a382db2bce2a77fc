#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "lattice.hpp"
#include "lognumber.hpp"
#include "sectors.hpp"

using cm::LogNumber;
using cm::Sector;
using cm::TorusLattice;

TEST_CASE("sector names round-trip") {
  for (Sector s : cm::kAllSectors)
    CHECK(cm::sector_from_name(cm::sector_name(s)) == s);
  CHECK_THROWS_AS(cm::sector_from_name("xx"), std::invalid_argument);
}

TEST_CASE("sign table is frozen") {
  // (-alpha1)^h (-alpha2)^v (-1)^(hv) for the four sectors, classes in the
  // order ee, eo, oe, oo.
  const int expect[4][4] = {
      {+1, +1, +1, -1},  // mm
      {+1, -1, +1, +1},  // mp
      {+1, +1, -1, +1},  // pm
      {+1, -1, -1, -1},  // pp
  };
  for (Sector s : cm::kAllSectors)
    for (int h = 0; h < 2; ++h)
      for (int v = 0; v < 2; ++v)
        CHECK(cm::sector_class_sign(s, h, v) ==
              expect[static_cast<int>(s)][2 * h + v]);

  // Recombination weights: every class enters (mm + mp + pm - pp)/2 with
  // coefficient exactly 1.
  for (int h = 0; h < 2; ++h)
    for (int v = 0; v < 2; ++v) {
      int sum = cm::sector_class_sign(Sector::MM, h, v) +
                cm::sector_class_sign(Sector::MP, h, v) +
                cm::sector_class_sign(Sector::PM, h, v) -
                cm::sector_class_sign(Sector::PP, h, v);
      CHECK(sum == 2);
    }
}

TEST_CASE("momentum grids shift by boundary condition") {
  const cm::MomentumGrid anti{4, 6, Sector::MM};
  CHECK(anti.k1(0) == doctest::Approx(2.0 * M_PI * 0.5 / 4.0));
  CHECK(anti.k2(1) == doctest::Approx(2.0 * M_PI * 1.5 / 6.0));
  const cm::MomentumGrid per{4, 6, Sector::PP};
  CHECK(per.k1(0) == 0.0);
  CHECK(per.k1(2) == doctest::Approx(M_PI));
}

TEST_CASE("gamma satisfies its defining identity") {
  for (double k : {0.0, 0.3, 1.0, M_PI, 5.0}) {
    CHECK(std::cosh(cm::gamma_k(k)) == doctest::Approx(2.0 - std::cos(k)));
    CHECK(cm::gamma_k(k) >= 0.0);
  }
  CHECK(cm::gamma_k(0.0) == 0.0);
  CHECK(cm::gamma_k(M_PI) ==
        doctest::Approx(std::log(3.0 + 2.0 * std::sqrt(2.0))));
  // One-sided derivative at the conical point.
  CHECK(cm::gamma_prime(0.0) == doctest::Approx(1.0));
  CHECK((cm::gamma_k(1e-7) / 1e-7) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(cm::gamma_k(-0.1), std::invalid_argument);
}

TEST_CASE("stable log of 2cosh and 2sinh") {
  CHECK(cm::log_2cosh(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(cm::log_2cosh(800.0) == doctest::Approx(800.0));
  CHECK(cm::log_2sinh(800.0) == doctest::Approx(800.0));
  CHECK(cm::log_2sinh(0.5) == doctest::Approx(std::log(2.0 * std::sinh(0.5))));
  CHECK_THROWS_AS(cm::log_2sinh(0.0), std::invalid_argument);
}

TEST_CASE("critical coupling constant") {
  CHECK(cm::kCriticalT == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-16));
  // tanh(2 beta_c) = ... equivalent statement: t_c^2 + 2 t_c - 1 = 0.
  CHECK(cm::kCriticalT * cm::kCriticalT + 2.0 * cm::kCriticalT - 1.0 ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("pp prefactor changes sign across the critical point") {
  const TorusLattice lat(4, 4);
  CHECK(sector_partition_uniform(lat, 0.30, Sector::PP).sign() == 1);
  CHECK(sector_partition_uniform(lat, cm::kCriticalT, Sector::PP).sign() == 0);
  CHECK(sector_partition_uniform(lat, 0.50, Sector::PP).sign() == -1);
  // The antiperiodic sectors stay positive throughout.
  for (double t : {0.30, 0.414, 0.50})
    CHECK(sector_partition_uniform(lat, t, Sector::MM).sign() == 1);
}

TEST_CASE("critical closed forms match the product form") {
  const TorusLattice lat(4, 8);
  for (Sector s : {Sector::MM, Sector::MP, Sector::PM}) {
    const LogNumber prod = sector_partition_uniform(lat, cm::kCriticalT, s);
    const LogNumber ff = critical_sector_ff(lat, s, false);
    const LogNumber ffx = critical_sector_ff(lat, s, true);
    CHECK(prod.sign() == 1);
    CHECK(ff.log_abs() == doctest::Approx(prod.log_abs()).epsilon(1e-12));
    CHECK(ffx.log_abs() == doctest::Approx(prod.log_abs()).epsilon(1e-12));
  }
  CHECK(critical_sector_ff(lat, Sector::PP).is_zero());
}

TEST_CASE("combine_sectors flags catastrophic cancellation") {
  const LogNumber a = LogNumber::from_value(1.0);
  std::array<LogNumber, 4> exact_cancel = {a, a, a,
                                           LogNumber::from_value(3.0)};
  CHECK_THROWS_AS(cm::combine_sectors(exact_cancel), cm::numeric_error);
  std::array<LogNumber, 4> healthy = {a, a, a, a};
  CHECK(cm::combine_sectors(healthy).value() == doctest::Approx(1.0));
}
