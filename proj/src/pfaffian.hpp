#ifndef CHARGEMETER_PFAFFIAN_HPP
#define CHARGEMETER_PFAFFIAN_HPP

#include <vector>

#include "lattice.hpp"
#include "lognumber.hpp"
#include "sectors.hpp"

namespace cm {

// Pfaffian of an antisymmetric n x n matrix (row-major), by skew-symmetric
// elimination with partial pivoting; destroys the input.  Signals
// near-singular elimination when every pivot candidate is below 1e-300.
LogNumber pfaffian_skew_inplace(std::vector<double>& a, int n);

// Signed multipolygon sum of sector alpha,
//   P_alpha({t_b}) = sum_Gamma (-a1)^h (-a2)^v (-1)^(hv) prod_{b in Gamma} t_b,
// evaluated as the Pfaffian of the 4N x 4N hopping matrix (four Grassmann
// variables per site, sector encoded through seam-bond sign factors).
LogNumber signed_polygon_sum_pfaffian(const TorusLattice& lat,
                                      const std::vector<double>& t_bonds,
                                      Sector alpha);

// Z^0_alpha for uniform t: 2^N (1-t^2)^(-N) P_alpha(t).
LogNumber kasteleyn_partition_t(const TorusLattice& lat, double t,
                                Sector alpha);

// Z^0_alpha for per-bond couplings: 2^N prod_b cosh(beta J_b) *
// P_alpha({tanh(beta J_b)}).
LogNumber kasteleyn_partition_bonds(const TorusLattice& lat, double beta,
                                    const std::vector<double>& j_bonds,
                                    Sector alpha);

namespace detail {
// Hopping matrix with explicit wrap-bond multipliers (w1 horizontal seam,
// w2 vertical seam); exposed for the sign-calibration regression test.
std::vector<double> sector_hopping_matrix(const TorusLattice& lat,
                                          const std::vector<double>& t_bonds,
                                          double w1, double w2);
}  // namespace detail

}  // namespace cm

#endif
