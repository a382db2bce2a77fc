#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "lattice.hpp"
#include "lognumber.hpp"
#include "oracle.hpp"
#include "sectors.hpp"

using cm::InteractionSpec;
using cm::LogNumber;
using cm::Sector;
using cm::TorusLattice;

namespace {

double rel_dev(const LogNumber& a, const LogNumber& b) {
  REQUIRE(!b.is_zero());
  if (a.is_zero()) return 1.0;
  return std::abs(a.sign() * b.sign() * std::exp(a.log_abs() - b.log_abs()) -
                  1.0);
}

}  // namespace

TEST_CASE("2x2 winding-class polynomials") {
  // On the 2x2 torus the 32 even subgraphs split into four classes of
  // eight; their generating polynomials are small enough to freeze.
  const TorusLattice lat(2, 2);
  for (double t : {0.15, 0.3, 0.55, 0.8}) {
    const std::vector<double> t_bonds(lat.n_bonds(), t);
    const auto cls = cycle_space_class_sums(lat, t_bonds);
    const double t2 = t * t, t4 = t2 * t2, t6 = t4 * t2, t8 = t4 * t4;
    CHECK(cls[cm::kClassEE].value() ==
          doctest::Approx(1 + 6 * t4 + t8).epsilon(1e-12));
    CHECK(cls[cm::kClassEO].value() ==
          doctest::Approx(2 * t2 + 4 * t4 + 2 * t6).epsilon(1e-12));
    CHECK(cls[cm::kClassOE].value() ==
          doctest::Approx(2 * t2 + 4 * t4 + 2 * t6).epsilon(1e-12));
    CHECK(cls[cm::kClassOO].value() == doctest::Approx(8 * t4).epsilon(1e-12));
  }
}

TEST_CASE("class count equals the cycle space dimension") {
  // |cycle space| = 2^(bonds - sites + 1); class sums at t = 1 count the
  // subgraphs in each class.
  for (auto [ell, big_l] : {std::pair{2, 2}, {2, 4}}) {
    const TorusLattice lat(ell, big_l);
    const std::vector<double> ones(lat.n_bonds(), 1.0);
    const auto cls = cycle_space_class_sums(lat, ones);
    double total = 0.0;
    for (const auto& c : cls) total += c.value();
    CHECK(total == doctest::Approx(
                       std::pow(2.0, lat.n_bonds() - lat.n_sites() + 1)));
  }
}

TEST_CASE("2x2 spin sum closed form") {
  const TorusLattice lat(2, 2);
  const InteractionSpec free_spec(1.0, 0.0, {});
  for (double beta : {0.2, 0.44, 0.9}) {
    const LogNumber z = brute_force_partition(lat, free_spec, beta);
    const double expected =
        2.0 * std::exp(8.0 * beta) + 12.0 + 2.0 * std::exp(-8.0 * beta);
    CHECK(z.value() == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("sector recombination against the spin sum") {
  const InteractionSpec free_spec(1.0, 0.0, {});
  for (auto [ell, big_l] : {std::pair{2, 2}, {2, 4}, {4, 4}}) {
    const TorusLattice lat(ell, big_l);
    for (double t : {0.25, 0.414, 0.6}) {
      std::array<LogNumber, 4> by_sector;
      for (Sector s : cm::kAllSectors)
        by_sector[static_cast<int>(s)] = sector_partition_enumerated(lat, t, s);
      const LogNumber combined = combine_sectors(by_sector);
      const LogNumber brute =
          brute_force_partition(lat, free_spec, std::atanh(t));
      CHECK(rel_dev(combined, brute) < 1e-11);
    }
  }
}

TEST_CASE("signed sums assemble from class sums and the sign table") {
  const TorusLattice lat(4, 4);
  const std::vector<double> t_bonds(lat.n_bonds(), 0.37);
  const auto cls = cycle_space_class_sums(lat, t_bonds);
  for (Sector s : cm::kAllSectors) {
    LogNumber expect;
    for (int h = 0; h < 2; ++h)
      for (int v = 0; v < 2; ++v) {
        const LogNumber term = cls[2 * h + v];
        expect += cm::sector_class_sign(s, h, v) > 0 ? term : -term;
      }
    const LogNumber got = signed_polygon_sum_enumerated(lat, t_bonds, s);
    CHECK(rel_dev(got, expect) < 1e-12);
  }
}

TEST_CASE("restricted pair list matches the shell Hamiltonian") {
  // When the pair list is exactly the displacement catalog the two spin
  // sums are the same function.
  const TorusLattice lat(4, 4);
  const InteractionSpec spec(1.0, 0.3, {{2, 1.0}});
  const auto pairs = displacement_pairs(lat, spec);
  for (double beta : {0.2, 0.5}) {
    const LogNumber a = brute_force_partition(lat, spec, beta);
    const LogNumber b =
        brute_force_partition_pairs(lat, 1.0, 0.3, pairs, beta);
    CHECK(rel_dev(a, b) < 1e-13);
  }
}

TEST_CASE("brute force rejects oversized lattices") {
  const TorusLattice lat(6, 6);
  CHECK_THROWS_AS(
      brute_force_partition(lat, InteractionSpec(1.0, 0.0, {}), 0.4),
      std::invalid_argument);
}
