#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lognumber.hpp"
#include "rg.hpp"

using cm::Mat2;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("mode rotation is unitary with half-modulus entries") {
  const auto u = cm::critical_mode_rotation();
  for (const auto& e : u) CHECK(std::abs(e) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cm::rotation_unitarity_defect() <= 1e-15);
  CHECK(std::abs(cm::rotation_determinant()) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dispersion combinations at distinguished momenta") {
  CHECK(cm::sigma_psi(0.0, 0.0) == 0.0);
  CHECK(cm::sigma_psi(kPi, kPi) == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(cm::sigma_chi(kPi, kPi) ==
        doctest::Approx(4.0 + 4.0 * std::sqrt(2.0)).epsilon(1e-12));
  // Massive-mode combination stays at or above its minimum everywhere.
  const double floor = 4.0 + 4.0 * std::sqrt(2.0) - 1e-12;
  for (double k1 : {0.0, 0.7, 1.9, kPi})
    for (double k2 : {0.0, 1.1, 2.6, kPi}) CHECK(cm::sigma_chi(k1, k2) >= floor);
}

TEST_CASE("massless covariance is singular only at zero momentum") {
  CHECK_THROWS_AS(cm::invert2(cm::c_psi_matrix(0.0, 0.0)), cm::numeric_error);
  // ~1/|k| growth of the inverse near the origin.
  const double n1 = cm::max_abs_entry(cm::invert2(cm::c_psi_matrix(0.1, 0.0)));
  const double n2 = cm::max_abs_entry(cm::invert2(cm::c_psi_matrix(0.01, 0.0)));
  CHECK(n2 / n1 == doctest::Approx(10.0).epsilon(0.1));
}

TEST_CASE("inverse round-trips on a generic momentum") {
  const Mat2 m = cm::c_psi_matrix(0.8, -1.3);
  const Mat2 prod = cm::mul2(m, cm::invert2(m));
  CHECK(std::abs(prod[0] - 1.0) < 1e-13);
  CHECK(std::abs(prod[3] - 1.0) < 1e-13);
  CHECK(std::abs(prod[1]) < 1e-13);
  CHECK(std::abs(prod[2]) < 1e-13);
}

TEST_CASE("cutoff profile has exact flats and monotone middle") {
  CHECK(cm::chi_bump(0.5) == 1.0);
  CHECK(cm::chi_bump(1.0) == 1.0);
  CHECK(cm::chi_bump(2.0) == 0.0);
  CHECK(cm::chi_bump(2.5) == 0.0);
  const double a = cm::chi_bump(1.3), b = cm::chi_bump(1.5), c = cm::chi_bump(1.7);
  CHECK(a > b);
  CHECK(b > c);
  CHECK(b > 0.0);
  CHECK(b < 1.0);
}

TEST_CASE("scale slices tile unity and respect their supports") {
  CHECK_THROWS_AS(cm::scale_cutoff(1, 0.5), std::invalid_argument);
  // h = -2 slice is supported on [2^-3, 2^-1].
  CHECK(cm::scale_cutoff(-2, 0.1) == 0.0);
  CHECK(cm::scale_cutoff(-2, 0.6) == 0.0);
  CHECK(cm::scale_cutoff(-2, 0.25) > 0.0);
  CHECK(cm::partition_unity_defect(64) < 1e-12);
  CHECK(cm::partition_unity_defect(100) < 1e-12);
}

TEST_CASE("deepest scale tracks the width") {
  CHECK(cm::deepest_scale(16) == -3);
  CHECK(cm::deepest_scale(32) == -4);
  CHECK(cm::deepest_scale(64) == -5);
}

TEST_CASE("tabulated field agrees with the raw momentum sum") {
  const auto field = cm::scale_propagator(16, 16, -2);
  const std::pair<int, int> probes[] = {{0, 0}, {3, 1}, {7, 5}};
  for (auto [x1, x2] : probes) {
    const Mat2 direct = cm::propagator_point(16, 16, cm::PropagatorKind::kScale,
                                             -2, 1.0, x1, x2);
    const Mat2 tab = field.at(x1, x2);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(tab[i] - direct[i]) < 1e-12);
  }
}

TEST_CASE("field wrap is antiperiodic in both directions") {
  const auto field = cm::full_psi_propagator(16, 16);
  const std::pair<int, int> probes[] = {{1, 2}, {5, 3}};
  for (auto [x1, x2] : probes) {
    const Mat2 base = field.at(x1, x2);
    const Mat2 s1 = field.at(x1 + 16, x2);
    const Mat2 s2 = field.at(x1, x2 + 16);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(s1[i] + base[i]) < 1e-12);
      CHECK(std::abs(s2[i] + base[i]) < 1e-12);
    }
  }
}

TEST_CASE("full massless kernel approaches the continuum falloff") {
  const auto field = cm::full_psi_propagator(64, 64);
  const double g = std::abs(field.at(8, 0)[0]);
  CHECK(std::abs(g - 0.125) / 0.125 < 0.1);
  // Distant point is smaller than a near one.
  CHECK(std::abs(field.at(16, 0)[0]) < std::abs(field.at(4, 0)[0]));
}

TEST_CASE("images fade with volume at fixed separation") {
  CHECK(cm::poisson_image_defect(0, 32, 32) < 5e-3);
  const auto rep = cm::poisson_image_check(0, {16, 24, 32, 48});
  REQUIRE(rep.defects.size() == 4);
  for (std::size_t i = 1; i < rep.defects.size(); ++i)
    CHECK(rep.defects[i] < rep.defects[i - 1]);
  CHECK(rep.power >= 3.5);
}

TEST_CASE("localization kernels pin the origin exactly") {
  CHECK(cm::localization_g(32, 32, 0, 0) == 1.0);
  CHECK(cm::localization_d1(32, 32, 1, 0) == 1.0);
  // Antiperiodic continuation of G.
  const double base = cm::localization_g(16, 16, 3, 2);
  CHECK(cm::localization_g(16, 16, 3 + 16, 2) ==
        doctest::Approx(-base).epsilon(1e-12));
}

TEST_CASE("localization errors scale like the fourth power") {
  const auto rep = cm::localization_quartic_check(64, 64);
  for (double s : {rep.g_slope, rep.d1_slope, rep.d2_slope}) {
    CHECK(s > 3.5);
    CHECK(s < 4.5);
  }
  for (double r : {rep.g_r2, rep.d1_r2, rep.d2_r2}) CHECK(r > 0.999);
}

TEST_CASE("scale propagators decay as designed") {
  const auto rep = cm::propagator_decay_check(64, 64);
  CHECK(rep.scale_slope > 0.9);
  CHECK(rep.scale_slope < 1.1);
  CHECK(rep.scale_r2 > 0.995);
  CHECK(rep.chi_slope < 0.0);
  CHECK(rep.chi_r2 > 0.99);
  REQUIRE(!rep.scales.empty());
  CHECK(rep.scales.front() == 0);
}

TEST_CASE("least squares reproduces an exact line") {
  const std::vector<double> xs = {0.0, 1.0, 2.0, 3.0};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(2.5 * x - 0.75);
  const auto fit = cm::least_squares(xs, ys);
  CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(fit.intercept == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}
