#ifndef CHARGEMETER_STRINGS_HPP
#define CHARGEMETER_STRINGS_HPP

#include <string>
#include <vector>

#include "lattice.hpp"
#include "lognumber.hpp"
#include "sectors.hpp"

namespace cm {

// Lattice path joining an interacting pair: straight for axis-aligned
// displacements, exactly one turn otherwise.
struct StringPath {
  enum Shape { kHorizontal, kVertical, kCorner };
  Shape shape;
  std::vector<int> bonds;  // ordered, no repeats
  BondMask mask;
};

// All simple paths for one pair, deduplicated by bond set and sorted by
// (length, ordered bond list).  With include_long_way each leg may also run
// the long way around the torus; throws when the catalog exceeds cap.
std::vector<StringPath> string_catalog_pair(const TorusLattice& lat, int a,
                                            int b, bool include_long_way,
                                            int cap = 16);

// Fixed per-channel path choice.  Each pair owns two channels; kSplit gives
// channel 1 the first catalog path and channel 2 the second where available,
// the others use one path for both channels.
enum class PathConvention { kSplit, kFirst, kSecond, kLast };

std::string convention_name(PathConvention c);

// Bond couplings t_b = 1/t on the blackened set, t elsewhere.
std::vector<double> deformed_couplings(const TorusLattice& lat,
                                       const BondMask& blackened, double t);

// Interacting sector value
//   Z_alpha = prod_pairs cosh^2(K/2) * sum_configs prod tanh(K/2)
//             * t^|bl| * 2^N cosh(beta J)^(2N) * P_alpha(deformed),
// K = beta*lambda*v, by exact enumeration over the 2^(2*pairs) channel
// subsets; capped at slot_cap active channel slots.
LogNumber interacting_sector_pairs(const TorusLattice& lat, double j,
                                   double lambda,
                                   const std::vector<SitePair>& pairs,
                                   double beta, Sector alpha,
                                   PathConvention convention,
                                   bool include_long_way = false,
                                   int slot_cap = 16);

LogNumber interacting_sector(const TorusLattice& lat,
                             const InteractionSpec& spec, double beta,
                             Sector alpha,
                             PathConvention convention = PathConvention::kSplit,
                             bool include_long_way = false);

// Inequality verdicts at one beta, all four sectors assembled with the given
// convention plus the direct spin-sum cross-check.
struct Lemma1Report {
  double beta = 0.0;
  LogNumber z_brute, z_mm, z_mp, z_pm, z_pp;
  double ratio = 0.0;          // Z / (Z_mm + Z_mp + Z_pm)
  double sumpos_margin = 0.0;  // (Z_mp + Z_pm) / (Z_mm + Z_mp + Z_pm)
  double consistency_rel = 0.0;
  bool ratio_ok = false;
  bool sumpos_ok = false;
  bool consistency_ok = false;
};

Lemma1Report lemma1_check_pairs(const TorusLattice& lat, double j,
                                double lambda,
                                const std::vector<SitePair>& pairs,
                                double beta, PathConvention convention,
                                bool include_long_way = false);

Lemma1Report lemma1_check(const TorusLattice& lat, const InteractionSpec& spec,
                          double beta,
                          PathConvention convention = PathConvention::kSplit,
                          bool include_long_way = false);

}  // namespace cm

#endif
