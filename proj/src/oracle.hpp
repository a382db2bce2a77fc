#ifndef CHARGEMETER_ORACLE_HPP
#define CHARGEMETER_ORACLE_HPP

#include <array>
#include <vector>

#include "lattice.hpp"
#include "lognumber.hpp"
#include "sectors.hpp"

namespace cm {

// Sums of prod_b t_b over all even subgraphs, split by winding class
// (indexed kClassEE..kClassOO).  Enumerates the full cycle space, so it
// is restricted to ell*L <= 20.
std::array<LogNumber, 4> cycle_space_class_sums(
    const TorusLattice& lat, const std::vector<double>& t_bonds);

// P_alpha from the enumerated class sums and the sector sign table.
LogNumber signed_polygon_sum_enumerated(const TorusLattice& lat,
                                        const std::vector<double>& t_bonds,
                                        Sector alpha);

// Z^0_alpha for uniform t via enumeration: 2^N (1-t^2)^(-N) P_alpha(t).
LogNumber sector_partition_enumerated(const TorusLattice& lat, double t,
                                      Sector alpha);

// Worst relative mismatch over the four sectors between the Pfaffian route
// and the enumerated route, scaled by the largest class magnitude.
double sign_table_residual(const TorusLattice& lat,
                           const std::vector<double>& t_bonds);

// Partition function by direct summation over all 2^N spin configurations
// (N <= 24).  Interaction energies are tracked with exact integer bond and
// pair counters, so the sweep is drift free.
LogNumber brute_force_partition(const TorusLattice& lat,
                                const InteractionSpec& spec, double beta);

// Same sweep for an explicit pair list (couplings beta*lambda*v per pair on
// top of the nearest neighbour term); used for restricted-interaction
// cross-checks.
LogNumber brute_force_partition_pairs(const TorusLattice& lat, double j,
                                      double lambda,
                                      const std::vector<SitePair>& pairs,
                                      double beta);

}  // namespace cm

#endif
