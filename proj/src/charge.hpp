#ifndef CHARGEMETER_CHARGE_HPP
#define CHARGEMETER_CHARGE_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "lattice.hpp"

namespace cm {

// Critical inverse temperature of the unperturbed model at J = 1.
inline double critical_beta0() { return 0.5 * std::log(1.0 + std::sqrt(2.0)); }

// Bulk critical free energy density 0.5*ln2 + (1/2pi) int_0^pi gamma(k) dk,
// by composite Gauss-Legendre quadrature (absolute error well under 1e-12).
double onsager_f_inf();

// Same constant through the symmetrized two-dimensional integral
// 0.5*ln2 + (1/pi^2) int_{[0,pi]^2} 0.5*log(4 - 2cos k1 - 2cos k2),
// with panels graded toward the logarithmic point at the origin.
double onsager_f_inf_2d();

// Width-ell excess of the critical strip free energy over the bulk value,
//   delta(ell) = (ell/2) sum_{r<ell} gamma((2r+1)pi/ell)
//                - ell^2 (f_inf - ln2/2),
// which tends to pi/12; c_from_delta = (6/pi) delta(ell).
double delta_ell(int ell);
double c_from_delta(int ell);

// Two-point elimination of the bulk term:
//   c = (6/pi) (f1 - f2) / (ell1^-2 - ell2^-2).
double c_pairwise(int ell1, double f1, int ell2, double f2);

struct Extrapolation {
  double value = 0.0;
  double spread = 0.0;  // max deviation among the deepest tableau entries
  int order_used = 0;
};

// Neville extrapolation to 1/ell^2 -> 0 of a per-width sequence (ell, y).
Extrapolation extrapolate_sequence(
    const std::vector<std::pair<int, double>>& points, int order);

// Pairwise c-estimates from consecutive widths of an (ell, f) series,
// extrapolated in their combined abscissa ell_i^-2 + ell_{i+1}^-2.
Extrapolation extrapolate_pairwise(
    const std::vector<std::pair<int, double>>& f_points, int order);

// Appendix ratio diagnostic
//   R = (1 + prod_r tanh(L g_{2r+1}/2) + prod_n tanh(ell g~_{2n+1}/2)) / 2
// with g_p = gamma(pi p / ell), g~_p = gamma(pi p / L); always in (1/2,3/2).
double ratio_term(int ell, int big_l);

struct RatioEntry {
  int ell, big_l;
  double r;
  double scaled;  // (ell/L) * ln R
};

struct RatioReport {
  std::vector<RatioEntry> entries;
  bool decreasing = false;
  double final_value = 0.0;
};

// Tabulates (ell/L) ln R at L = ell^2 over the given widths and checks the
// sequence decreases toward zero.
RatioReport ratio_limit_check(const std::vector<int>& ells);

struct CrossingEstimate {
  int ell_a, ell_b;
  double beta;
};

struct StripChargeResult {
  std::vector<CrossingEstimate> crossings;
  double beta_c = 0.0;  // Richardson-combined crossing estimate
  std::vector<std::pair<int, double>> f_series;
  std::vector<double> c_pairs;
  double c_hat = 0.0;
  double spread = 0.0;
};

// Full interacting pipeline: locate the crossing for each consecutive width
// pair inside [beta_lo, beta_hi], combine the crossings in 1/(ell_a*ell_b),
// evaluate f at the combined estimate, extrapolate the pairwise charges.
StripChargeResult strip_charge_pipeline(const InteractionSpec& spec,
                                        const std::vector<int>& ells,
                                        double beta_lo, double beta_hi,
                                        int order = 1,
                                        double power_tol = 1e-11,
                                        double beta_tol = 1e-8);

// Same f-sweep and extrapolation at a caller-fixed beta (no locator).
StripChargeResult strip_charge_at_beta(const InteractionSpec& spec,
                                       const std::vector<int>& ells,
                                       double beta, int order = 1,
                                       double power_tol = 1e-11);

}  // namespace cm

#endif
