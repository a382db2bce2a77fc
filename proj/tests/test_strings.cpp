#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lattice.hpp"
#include "lognumber.hpp"
#include "oracle.hpp"
#include "sectors.hpp"
#include "strings.hpp"

using cm::InteractionSpec;
using cm::LogNumber;
using cm::PathConvention;
using cm::SitePair;
using cm::StringPath;
using cm::TorusLattice;

namespace {

double rel_dev(const LogNumber& a, const LogNumber& b) {
  REQUIRE(!b.is_zero());
  return std::abs(a.sign() * b.sign() * std::exp(a.log_abs() - b.log_abs()) -
                  1.0);
}

std::vector<SitePair> diagonal_pairs(const TorusLattice& lat, int count) {
  const InteractionSpec spec(1.0, 0.1, {{2, 1.0}});
  auto pairs = interacting_pairs(lat, spec);
  REQUIRE(static_cast<int>(pairs.size()) >= count);
  pairs.resize(count);
  return pairs;
}

}  // namespace

TEST_CASE("path catalog shapes") {
  const TorusLattice lat(4, 4);

  // Diagonal displacement: exactly the two single-corner paths.
  const auto corner = string_catalog_pair(lat, lat.site(0, 0),
                                          lat.site(1, 1), false);
  CHECK(corner.size() == 2);
  for (const auto& p : corner) {
    CHECK(p.shape == StringPath::kCorner);
    CHECK(p.bonds.size() == 2);
    CHECK(p.mask.count() == 2);
  }

  // Axis displacement on a wider torus: one short straight path; the
  // opposite way is longer and only appears with long-way variants.
  const TorusLattice wide(6, 6);
  const auto straight = string_catalog_pair(wide, wide.site(0, 0),
                                            wide.site(2, 0), false);
  CHECK(straight.size() == 1);
  CHECK(straight[0].shape == StringPath::kHorizontal);
  CHECK(straight[0].bonds.size() == 2);
  const auto both_ways = string_catalog_pair(wide, wide.site(0, 0),
                                             wide.site(2, 0), true);
  CHECK(both_ways.size() == 2);
  CHECK(both_ways[0].bonds.size() == 2);
  CHECK(both_ways[1].bonds.size() == 4);

  // Long-way variants multiply the catalog and are sorted by length.
  const auto with_long = string_catalog_pair(lat, lat.site(0, 0),
                                             lat.site(1, 1), true);
  CHECK(with_long.size() > corner.size());
  for (size_t i = 1; i < with_long.size(); ++i)
    CHECK(with_long[i - 1].bonds.size() <= with_long[i].bonds.size());
}

TEST_CASE("deformed couplings invert on the blackened set") {
  const TorusLattice lat(4, 4);
  cm::BondMask blackened;
  blackened.set(3);
  blackened.set(17);
  const auto t_bonds = cm::deformed_couplings(lat, blackened, 0.4);
  for (int b = 0; b < lat.n_bonds(); ++b)
    CHECK(t_bonds[b] == doctest::Approx(blackened.test(b) ? 2.5 : 0.4));
}

TEST_CASE("string assembly reproduces the spin sum, all conventions") {
  const TorusLattice lat(4, 4);
  const auto pairs = diagonal_pairs(lat, 2);
  for (double beta : {0.25, 0.5}) {
    const LogNumber brute =
        brute_force_partition_pairs(lat, 1.0, 0.1, pairs, beta);
    for (PathConvention conv :
         {PathConvention::kSplit, PathConvention::kFirst,
          PathConvention::kSecond, PathConvention::kLast}) {
      std::array<LogNumber, 4> by_sector;
      for (cm::Sector s : cm::kAllSectors)
        by_sector[static_cast<int>(s)] = interacting_sector_pairs(
            lat, 1.0, 0.1, pairs, beta, s, conv);
      const LogNumber assembled = cm::combine_sectors(by_sector);
      CHECK(rel_dev(assembled, brute) < 1e-9);
    }
  }
}

TEST_CASE("long-way catalogs leave the assembled value unchanged") {
  const TorusLattice lat(4, 4);
  const auto pairs = diagonal_pairs(lat, 1);
  const double beta = 0.4;
  const LogNumber brute =
      brute_force_partition_pairs(lat, 1.0, 0.1, pairs, beta);
  std::array<LogNumber, 4> by_sector;
  for (cm::Sector s : cm::kAllSectors)
    by_sector[static_cast<int>(s)] = interacting_sector_pairs(
        lat, 1.0, 0.1, pairs, beta, s, PathConvention::kLast, true);
  CHECK(rel_dev(cm::combine_sectors(by_sector), brute) < 1e-9);
}

TEST_CASE("inequality report on a small pair set") {
  const TorusLattice lat(4, 4);
  const auto pairs = diagonal_pairs(lat, 3);
  for (double beta : {0.2, 0.44, 0.7}) {
    const auto rep = cm::lemma1_check_pairs(lat, 1.0, 0.1, pairs, beta,
                                            PathConvention::kSplit);
    CHECK(rep.ratio_ok);
    CHECK(rep.sumpos_ok);
    CHECK(rep.consistency_ok);
    CHECK(rep.ratio >= 1.0 / 3.0 - 1e-12);
    CHECK(rep.ratio <= 1.0 + 1e-12);
    CHECK(rep.sumpos_margin >= -1e-12);
    CHECK(rep.consistency_rel < 1e-8);
  }
}

TEST_CASE("free model reduces to the pure sector combination") {
  const TorusLattice lat(4, 4);
  const auto rep = cm::lemma1_check(lat, InteractionSpec(1.0, 0.0, {}), 0.44,
                                    PathConvention::kSplit);
  CHECK(rep.consistency_ok);
  CHECK(rep.ratio_ok);
  CHECK(rep.sumpos_ok);
}

TEST_CASE("ratio tends to one third at infinite temperature") {
  const TorusLattice lat(4, 4);
  const auto pairs = diagonal_pairs(lat, 2);
  const auto rep = cm::lemma1_check_pairs(lat, 1.0, 0.1, pairs, 1e-3,
                                          PathConvention::kSplit);
  CHECK(rep.ratio == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("channel slot cap rejects oversized pair sets") {
  const TorusLattice lat(4, 4);
  const auto pairs = diagonal_pairs(lat, 9);  // 18 channels > 16 slots
  CHECK_THROWS_AS(
      interacting_sector_pairs(lat, 1.0, 0.1, pairs, 0.4, cm::Sector::MM,
                               PathConvention::kSplit),
      std::invalid_argument);
}
