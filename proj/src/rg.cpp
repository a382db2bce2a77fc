#include "rg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lognumber.hpp"
#include "sectors.hpp"

namespace cm {

namespace {

constexpr double kPi = 3.14159265358979323846;
using Complex = std::complex<double>;

Mat2 sub2(const Mat2& a, const Mat2& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

}  // namespace

Mat2 mul2(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 invert2(const Mat2& m) {
  const Complex det = m[0] * m[3] - m[1] * m[2];
  if (std::abs(det) < 1e-300)
    throw numeric_error("singular 2x2 covariance block");
  return {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
}

double max_abs_entry(const Mat2& m) {
  double best = 0.0;
  for (const Complex& e : m) best = std::max(best, std::abs(e));
  return best;
}

std::array<Complex, 16> critical_mode_rotation() {
  const Complex e = std::polar(0.5, kPi / 4.0);   // e^{i pi/4} / 2
  const Complex f = std::conj(e);
  const Complex half(0.5, 0.0), mih(0.0, -0.5), pih(0.0, 0.5);
  return {e,  f,  half, mih,   //
          f,  e,  half, pih,   //
          -e, -f, half, mih,   //
          -f, -e, half, pih};
}

double rotation_unitarity_defect() {
  const auto u = critical_mode_rotation();
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Complex dot(0.0, 0.0);
      for (int k = 0; k < 4; ++k)
        dot += u[4 * i + k] * std::conj(u[4 * j + k]);
      if (i == j) dot -= 1.0;
      worst = std::max(worst, std::abs(dot));
    }
  }
  return worst;
}

std::complex<double> rotation_determinant() {
  auto u = critical_mode_rotation();
  Complex det(1.0, 0.0);
  for (int c = 0; c < 4; ++c) {
    int p = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(u[4 * r + c]) > std::abs(u[4 * p + c])) p = r;
    if (p != c) {
      for (int j = 0; j < 4; ++j) std::swap(u[4 * p + j], u[4 * c + j]);
      det = -det;
    }
    det *= u[4 * c + c];
    for (int r = c + 1; r < 4; ++r) {
      const Complex m = u[4 * r + c] / u[4 * c + c];
      for (int j = c; j < 4; ++j) u[4 * r + j] -= m * u[4 * c + j];
    }
  }
  return det;
}

double sigma_psi(double k1, double k2) {
  return std::cos(k1) + std::cos(k2) - 2.0;
}

double sigma_chi(double k1, double k2) {
  // 2 (sqrt(2)+1) / t_c0 = 6 + 4 sqrt(2), about 11.657
  return std::cos(k1) + std::cos(k2) +
         2.0 * (std::sqrt(2.0) + 1.0) / kCriticalT;
}

Mat2 c_chi_matrix(double k1, double k2) {
  const Complex i(0.0, 1.0);
  const double s1 = std::sin(k1), s2 = std::sin(k2);
  const double sc = sigma_chi(k1, k2);
  return {-i * s1 + s2, i * sc, -i * sc, -i * s1 - s2};
}

Mat2 q_coupling_matrix(double k1, double k2) {
  const Complex i(0.0, 1.0);
  const double s1 = std::sin(k1), s2 = std::sin(k2);
  const double dc = std::cos(k1) - std::cos(k2);
  return {-i * s1 - s2, i * dc, -i * dc, -i * s1 + s2};
}

Mat2 c_psi_matrix(double k1, double k2) {
  const Complex i(0.0, 1.0);
  const double s1 = std::sin(k1), s2 = std::sin(k2);
  const double sp = sigma_psi(k1, k2);
  const Mat2 bare = {-i * s1 + s2, i * sp, -i * sp, -i * s1 - s2};
  const Mat2 q = q_coupling_matrix(k1, k2);
  return sub2(bare, mul2(mul2(q, invert2(c_chi_matrix(k1, k2))), q));
}

namespace {

double smooth_ramp(double u) { return u <= 0.0 ? 0.0 : std::exp(-1.0 / u); }

}  // namespace

double chi_bump(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double a = smooth_ramp(2.0 - t), b = smooth_ramp(t - 1.0);
  return a / (a + b);
}

double scale_cutoff(int h, double k_norm) {
  if (h > 0) throw std::invalid_argument("scale index must be <= 0");
  if (!(k_norm >= 0.0))
    throw std::invalid_argument("momentum norm must be nonnegative");
  if (h == 0) return 1.0 - chi_bump(2.0 * k_norm);
  const double scaled = std::ldexp(k_norm, -h);
  return chi_bump(scaled) - chi_bump(2.0 * scaled);
}

int deepest_scale(int ell) {
  if (ell < 2) throw std::invalid_argument("width must be at least 2");
  return static_cast<int>(std::floor(std::log2(kPi / ell)));
}

double partition_unity_defect(int n) {
  if (n < 2) throw std::invalid_argument("grid must have at least 2 points");
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k1 = -kPi + (i + 0.5) * 2.0 * kPi / n;
    for (int j = 0; j < n; ++j) {
      const double k2 = -kPi + (j + 0.5) * 2.0 * kPi / n;
      const double norm = std::hypot(k1, k2);
      const int h_stop =
          std::min(0, static_cast<int>(std::floor(std::log2(norm))) - 1);
      double sum = 0.0;
      for (int h = 0; h >= h_stop; --h) sum += scale_cutoff(h, norm);
      worst = std::max(worst, std::fabs(sum - 1.0));
    }
  }
  return worst;
}

double torus_sine_norm(int ell, int big_l, int x1, int x2) {
  return std::hypot(ell / kPi * std::sin(kPi * x1 / ell),
                    big_l / kPi * std::sin(kPi * x2 / big_l));
}

const Mat2& PropagatorField::window_at(int x1, int x2) const {
  if (x1 < x1_lo || x1 >= x1_lo + n1 || x2 < x2_lo || x2 >= x2_lo + n2)
    throw std::out_of_range("point outside the tabulated window");
  return values[static_cast<std::size_t>(x2 - x2_lo) * n1 + (x1 - x1_lo)];
}

namespace {

// Wraps x by multiples of the period into [lo, lo+period); each wrap flips
// the sign once (antiperiodicity of the momentum grid).
int wrap_coordinate(int x, int lo, int period, int& flips) {
  long long d = static_cast<long long>(x) - lo;
  long long q = d >= 0 ? d / period : -((-d + period - 1) / period);
  flips += static_cast<int>(q & 1LL);
  return static_cast<int>(x - q * period);
}

}  // namespace

Mat2 PropagatorField::at(int x1, int x2) const {
  int flips = 0;
  const int r1 = wrap_coordinate(x1, x1_lo, period1, flips);
  const int r2 = wrap_coordinate(x2, x2_lo, period2, flips);
  Mat2 out = window_at(r1, r2);
  if (flips % 2 != 0)
    for (Complex& e : out) e = -e;
  return out;
}

double PropagatorField::max_abs() const {
  double best = 0.0;
  for (const Mat2& m : values) best = std::max(best, max_abs_entry(m));
  return best;
}

namespace {

std::vector<double> antiperiodic_momenta(int n) {
  std::vector<double> ks(n);
  for (int j = 0; j < n; ++j) {
    double k = 2.0 * kPi * (j + 0.5) / n;
    if (k > kPi) k -= 2.0 * kPi;
    ks[j] = k;
  }
  return ks;
}

}  // namespace

PropagatorField build_propagator(int ell, int big_l, PropagatorKind kind,
                                 int h, int refine, double z) {
  if (ell < 2 || big_l < 2 || ell % 2 != 0 || big_l % 2 != 0)
    throw std::invalid_argument("sides must be even and at least 2");
  if (ell > 128 || big_l > 128)
    throw std::invalid_argument("sides above 128 are not supported");
  if (refine < 1 || refine > 8)
    throw std::invalid_argument("refinement factor must be in [1, 8]");
  if (!(z > 0.0) || !std::isfinite(z))
    throw std::invalid_argument("field normalization must be positive");
  if (kind == PropagatorKind::kScale && h > 0)
    throw std::invalid_argument("scale index must be <= 0");

  const int m1 = refine * ell, m2 = refine * big_l;
  const std::vector<double> k1 = antiperiodic_momenta(m1);
  const std::vector<double> k2 = antiperiodic_momenta(m2);

  PropagatorField field;
  field.period1 = m1;
  field.period2 = m2;
  field.x1_lo = -ell / 2;
  field.x2_lo = -big_l / 2;
  field.n1 = ell + 1;
  field.n2 = big_l + 1;
  field.values.assign(static_cast<std::size_t>(field.n1) * field.n2,
                      Mat2{0.0, 0.0, 0.0, 0.0});

  const double pref = 2.0 * kPi / (z * m1 * m2);

  std::vector<Complex> phase2(static_cast<std::size_t>(m2) * field.n2);
  for (int j = 0; j < m2; ++j)
    for (int x = 0; x < field.n2; ++x)
      phase2[static_cast<std::size_t>(j) * field.n2 + x] =
          std::polar(1.0, -k2[j] * (field.x2_lo + x));
  std::vector<Complex> phase1(static_cast<std::size_t>(m1) * field.n1);
  for (int j = 0; j < m1; ++j)
    for (int x = 0; x < field.n1; ++x)
      phase1[static_cast<std::size_t>(j) * field.n1 + x] =
          std::polar(1.0, -k1[j] * (field.x1_lo + x));

  // partial[j1][x2] = sum_{j2} phase2 * weighted inverse covariance
  std::vector<Mat2> partial(static_cast<std::size_t>(m1) * field.n2,
                            Mat2{0.0, 0.0, 0.0, 0.0});
  for (int j1 = 0; j1 < m1; ++j1) {
    for (int j2 = 0; j2 < m2; ++j2) {
      double weight = pref;
      if (kind == PropagatorKind::kScale)
        weight *= scale_cutoff(h, std::hypot(k1[j1], k2[j2]));
      if (weight == 0.0) continue;
      const Mat2 inv = kind == PropagatorKind::kChi
                           ? invert2(c_chi_matrix(k1[j1], k2[j2]))
                           : invert2(c_psi_matrix(k1[j1], k2[j2]));
      for (int x = 0; x < field.n2; ++x) {
        const Complex ph =
            weight * phase2[static_cast<std::size_t>(j2) * field.n2 + x];
        Mat2& acc = partial[static_cast<std::size_t>(j1) * field.n2 + x];
        for (int e = 0; e < 4; ++e) acc[e] += ph * inv[e];
      }
    }
  }
  for (int x2 = 0; x2 < field.n2; ++x2) {
    for (int j1 = 0; j1 < m1; ++j1) {
      const Mat2& s = partial[static_cast<std::size_t>(j1) * field.n2 + x2];
      for (int x1 = 0; x1 < field.n1; ++x1) {
        const Complex ph = phase1[static_cast<std::size_t>(j1) * field.n1 + x1];
        Mat2& acc = field.values[static_cast<std::size_t>(x2) * field.n1 + x1];
        for (int e = 0; e < 4; ++e) acc[e] += ph * s[e];
      }
    }
  }
  return field;
}

PropagatorField scale_propagator(int ell, int big_l, int h, double z) {
  return build_propagator(ell, big_l, PropagatorKind::kScale, h, 1, z);
}

PropagatorField full_psi_propagator(int ell, int big_l, double z) {
  return build_propagator(ell, big_l, PropagatorKind::kFullPsi, 0, 1, z);
}

PropagatorField chi_propagator(int ell, int big_l, double z) {
  return build_propagator(ell, big_l, PropagatorKind::kChi, 0, 1, z);
}

Mat2 propagator_point(int ell, int big_l, PropagatorKind kind, int h,
                      double z, int x1, int x2) {
  const std::vector<double> k1 = antiperiodic_momenta(ell);
  const std::vector<double> k2 = antiperiodic_momenta(big_l);
  const double pref = 2.0 * kPi / (z * ell * big_l);
  Mat2 acc{0.0, 0.0, 0.0, 0.0};
  for (int j1 = 0; j1 < ell; ++j1) {
    for (int j2 = 0; j2 < big_l; ++j2) {
      double weight = pref;
      if (kind == PropagatorKind::kScale)
        weight *= scale_cutoff(h, std::hypot(k1[j1], k2[j2]));
      if (weight == 0.0) continue;
      const Mat2 inv = kind == PropagatorKind::kChi
                           ? invert2(c_chi_matrix(k1[j1], k2[j2]))
                           : invert2(c_psi_matrix(k1[j1], k2[j2]));
      const Complex ph =
          weight * std::polar(1.0, -(k1[j1] * x1 + k2[j2] * x2));
      for (int e = 0; e < 4; ++e) acc[e] += ph * inv[e];
    }
  }
  return acc;
}

LinearFit least_squares(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit needs at least two matched points");
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit abscissas are degenerate");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

ScaleDecayReport propagator_decay_check(int ell, int big_l, double z,
                                        int h_lo) {
  ScaleDecayReport rep;
  const int floor_h = h_lo > 0 ? deepest_scale(ell) + 1
                               : std::max(h_lo, deepest_scale(ell) + 1);
  std::vector<double> hs, logs;
  for (int h = 0; h >= floor_h; --h) {
    const PropagatorField field = scale_propagator(ell, big_l, h, z);
    double sup = 0.0, weighted = 0.0;
    for (int x2 = field.x2_lo; x2 < field.x2_lo + field.n2; ++x2) {
      for (int x1 = field.x1_lo; x1 < field.x1_lo + field.n1; ++x1) {
        const double a = max_abs_entry(field.window_at(x1, x2));
        const double d = torus_sine_norm(ell, big_l, x1, x2);
        sup = std::max(sup, a);
        weighted = std::max(
            weighted, a * std::pow(1.0 + std::ldexp(d, h), 4.0));
      }
    }
    rep.scales.push_back(h);
    rep.sup_norms.push_back(sup);
    rep.weighted.push_back(weighted);
    // The 2^h sup-norm law describes the self-similar shells: h = 0 is the
    // whole ultraviolet complement, not a shell, and at h*+1 the few grid
    // momenta left in the shell saturate the norm, so both stay out of the
    // fit (they still feed the tabulated norms above).
    if (h <= -1 && h >= floor_h + 1) {
      hs.push_back(h);
      logs.push_back(std::log2(sup));
    }
  }
  if (hs.size() >= 2) {
    const LinearFit fit = least_squares(hs, logs);
    rep.scale_slope = fit.slope;
    rep.scale_r2 = fit.r2;
  }
  const PropagatorField chi = chi_propagator(ell, big_l, z);
  std::vector<double> ss, ls;
  for (int s = 1; s <= std::min(ell, big_l) / 4; ++s) {
    ss.push_back(s);
    ls.push_back(std::log(max_abs_entry(chi.at(s, 0))));
  }
  if (ss.size() >= 2) {
    const LinearFit fit = least_squares(ss, ls);
    rep.chi_slope = fit.slope;
    rep.chi_r2 = fit.r2;
  }
  return rep;
}

double poisson_image_defect(int h, int ell, int big_l, int refine, double z) {
  if (refine < 2) throw std::invalid_argument("refinement must be >= 2");
  const PropagatorField coarse =
      build_propagator(ell, big_l, PropagatorKind::kScale, h, 1, z);
  const PropagatorField fine =
      build_propagator(ell, big_l, PropagatorKind::kScale, h, refine, z);
  double worst = 0.0;
  for (int x2 = coarse.x2_lo; x2 < coarse.x2_lo + coarse.n2; ++x2)
    for (int x1 = coarse.x1_lo; x1 < coarse.x1_lo + coarse.n1; ++x1)
      worst = std::max(worst,
                       max_abs_entry(sub2(coarse.window_at(x1, x2),
                                          fine.window_at(x1, x2))));
  return worst;
}

PoissonReport poisson_image_check(int h, const std::vector<int>& ells,
                                  int refine, double z) {
  if (ells.size() < 2)
    throw std::invalid_argument("defect fit needs at least two sizes");
  PoissonReport rep;
  std::vector<double> xs, ys;
  for (int ell : ells) {
    const double defect = poisson_image_defect(h, ell, ell, refine, z);
    rep.ells.push_back(ell);
    rep.defects.push_back(defect);
    xs.push_back(std::log(static_cast<double>(ell)));
    ys.push_back(std::log(defect));
  }
  rep.power = -least_squares(xs, ys).slope;
  return rep;
}

double localization_g(int ell, int big_l, int x1, int x2) {
  const double a = kPi * x1 / ell, b = kPi * x2 / big_l;
  return 9.0 / 8.0 * std::cos(a) * std::cos(b) -
         1.0 / 8.0 * std::cos(3.0 * a) * std::cos(3.0 * b);
}

double localization_d1(int ell, int big_l, int x1, int x2) {
  const double a = kPi * x1 / ell, b = kPi * x2 / big_l;
  return 9.0 / 8.0 * std::sin(a) / std::sin(kPi / ell) * std::cos(b) -
         1.0 / 8.0 * std::sin(3.0 * a) / std::sin(3.0 * kPi / ell) *
             std::cos(3.0 * b);
}

double localization_d2(int ell, int big_l, int x1, int x2) {
  const double a = kPi * x1 / ell, b = kPi * x2 / big_l;
  return 9.0 / 8.0 * std::cos(a) * std::sin(b) / std::sin(kPi / big_l) -
         1.0 / 8.0 * std::cos(3.0 * a) * std::sin(3.0 * b) /
             std::sin(3.0 * kPi / big_l);
}

LocalizationReport localization_quartic_check(int ell, int big_l) {
  if (ell < 48 || big_l < 48)
    throw std::invalid_argument("quartic fit needs sides of at least 48");
  LocalizationReport rep;
  std::vector<double> xs, ys;
  for (int s = 1; s <= ell / 8; ++s) {
    xs.push_back(std::log(static_cast<double>(s) / ell));
    ys.push_back(std::log(std::fabs(localization_g(ell, big_l, s, 0) - 1.0)));
  }
  LinearFit fit = least_squares(xs, ys);
  rep.g_slope = fit.slope;
  rep.g_r2 = fit.r2;

  // d1(s,0)/s - 1 = -(3/40)(pi/ell)^4 (s^2-1)(s^2-7/3) + O((s/ell)^6):
  // exact at s = 1, and the subleading s^2 terms steepen the local log-log
  // slope below s = 4, so the quartic fit starts there.
  xs.clear();
  ys.clear();
  for (int s = 4; s <= ell / 8; ++s) {
    xs.push_back(std::log(static_cast<double>(s) / ell));
    ys.push_back(
        std::log(std::fabs(localization_d1(ell, big_l, s, 0) / s - 1.0)));
  }
  fit = least_squares(xs, ys);
  rep.d1_slope = fit.slope;
  rep.d1_r2 = fit.r2;

  xs.clear();
  ys.clear();
  for (int s = 4; s <= big_l / 8; ++s) {
    xs.push_back(std::log(static_cast<double>(s) / big_l));
    ys.push_back(
        std::log(std::fabs(localization_d2(ell, big_l, 0, s) / s - 1.0)));
  }
  fit = least_squares(xs, ys);
  rep.d2_slope = fit.slope;
  rep.d2_r2 = fit.r2;
  return rep;
}

}  // namespace cm
