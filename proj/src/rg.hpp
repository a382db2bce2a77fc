#ifndef CHARGEMETER_RG_HPP
#define CHARGEMETER_RG_HPP

#include <array>
#include <complex>
#include <vector>

namespace cm {

using Mat2 = std::array<std::complex<double>, 4>;  // row-major 2x2

Mat2 mul2(const Mat2& a, const Mat2& b);
Mat2 invert2(const Mat2& m);  // throws numeric_error when singular
double max_abs_entry(const Mat2& m);

// 4x4 rotation from the transfer variables (Hbar, H, Vbar, V) to the
// critical modes (psi+, psi-, chi+, chi-); every entry has modulus 1/2.
std::array<std::complex<double>, 16> critical_mode_rotation();
double rotation_unitarity_defect();  // max_ij |(U U^dag - 1)_ij|
std::complex<double> rotation_determinant();

// Dispersion combinations entering the mode covariances.  sigma_psi vanishes
// at k = 0 (massless point); sigma_chi >= 4 + 4 sqrt(2) on [-pi,pi]^2.
double sigma_psi(double k1, double k2);
double sigma_chi(double k1, double k2);

Mat2 c_chi_matrix(double k1, double k2);      // massive-mode covariance
Mat2 q_coupling_matrix(double k1, double k2); // psi-chi mixing block
// Massless-mode covariance after eliminating the massive mode:
// the bare psi block minus Q C_chi^{-1} Q.  Singular exactly at k = 0.
Mat2 c_psi_matrix(double k1, double k2);

// C-infinity profile: 1 for t <= 1, 0 for t >= 2, strictly decreasing
// between; fixed once so every cutoff-dependent number is reproducible.
double chi_bump(double t);

// Scale-h slice of the momentum-space partition of unity.  The h < 0 slices
// are chi(2^-h |k|) - chi(2^-h+1 |k|), supported on 2^(h-1) <= |k| <= 2^(h+1);
// the h = 0 slice is their complement 1 - chi(2|k|), so that
// sum_{h <= 0} f_h(|k|) = 1 exactly for every k != 0.
double scale_cutoff(int h, double k_norm);

// Deepest infrared scale h* = floor(log2(pi / ell)).
int deepest_scale(int ell);

// max |sum_h f_h(|k|) - 1| over an n x n momentum grid avoiding k = 0.
double partition_unity_defect(int n);

// Torus-adapted distance |delta(x)|,
// delta(x) = ((ell/pi) sin(pi x1/ell), (L/pi) sin(pi x2/L)).
double torus_sine_norm(int ell, int big_l, int x1, int x2);

enum class PropagatorKind { kScale, kFullPsi, kChi };

// Real-space two-point kernel tabulated on the centered window
// |x1| <= ell/2, |x2| <= L/2 from an antiperiodic momentum grid refined by
// `refine` in each direction.  at() wraps any x into the window using the
// grid periods (refine*ell, refine*L) and the antiperiodic sign.
struct PropagatorField {
  int period1 = 0, period2 = 0;
  int x1_lo = 0, x2_lo = 0;
  int n1 = 0, n2 = 0;
  std::vector<Mat2> values;

  const Mat2& window_at(int x1, int x2) const;
  Mat2 at(int x1, int x2) const;
  double max_abs() const;
};

// g^(h)(x) = (2 pi / (z ell L)) sum_{k in the antiperiodic grid}
//            e^{-i k x} f_h(|k|) C_psi(k)^{-1}
// with |k| taken from the representative in (-pi, pi]^2.  kFullPsi drops the
// cutoff factor (the slices sum to one), kChi uses C_chi instead.
PropagatorField build_propagator(int ell, int big_l, PropagatorKind kind,
                                 int h, int refine, double z);

PropagatorField scale_propagator(int ell, int big_l, int h, double z = 1.0);
PropagatorField full_psi_propagator(int ell, int big_l, double z = 1.0);
PropagatorField chi_propagator(int ell, int big_l, double z = 1.0);

// Single-point evaluation by the raw double momentum sum, with no window
// reduction; slow, kept for cross-checks of the tabulated fields.
Mat2 propagator_point(int ell, int big_l, PropagatorKind kind, int h,
                      double z, int x1, int x2);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit least_squares(const std::vector<double>& xs,
                        const std::vector<double>& ys);

struct ScaleDecayReport {
  std::vector<int> scales;        // h = 0 down to h*+1 (or the given floor)
  std::vector<double> sup_norms;  // max_x |g^(h)(x)| per scale
  std::vector<double> weighted;   // max_x |g^(h)(x)| (1 + 2^h |delta(x)|)^4
  double scale_slope = 0.0;       // fit of log2 sup_norm against h
  double scale_r2 = 0.0;
  double chi_slope = 0.0;         // fit of log |g_chi(s, 0)| against s
  double chi_r2 = 0.0;
};
// h_lo > 0 selects the automatic sweep h in [h*+1, 0].
ScaleDecayReport propagator_decay_check(int ell, int big_l, double z = 1.0,
                                        int h_lo = 1);

// max_{|x_i| <= side/2} entrywise gap between the torus kernel and its
// refined-grid proxy for the infinite-volume kernel.
double poisson_image_defect(int h, int ell, int big_l, int refine = 4,
                            double z = 1.0);

struct PoissonReport {
  std::vector<int> ells;
  std::vector<double> defects;
  double power = 0.0;  // fitted decay rate of defect ~ ell^-power
};
PoissonReport poisson_image_check(int h, const std::vector<int>& ells,
                                  int refine = 4, double z = 1.0);

// Finite-volume localization kernels; antiperiodic in each argument over the
// torus, with G(0) = 1, d_i(x)/x_i = 1 + O((|x|/ell)^4).
double localization_g(int ell, int big_l, int x1, int x2);
double localization_d1(int ell, int big_l, int x1, int x2);
double localization_d2(int ell, int big_l, int x1, int x2);

struct LocalizationReport {
  double g_slope = 0.0, g_r2 = 0.0;
  double d1_slope = 0.0, d1_r2 = 0.0;
  double d2_slope = 0.0, d2_r2 = 0.0;
};
// Log-log fits of |G(x)-1| and |d_i(x)/x_i - 1| over 1 <= |x| <= ell/8;
// all three slopes sit near 4.
LocalizationReport localization_quartic_check(int ell, int big_l);

}  // namespace cm

#endif
