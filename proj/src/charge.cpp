#include "charge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lognumber.hpp"
#include "sectors.hpp"
#include "strip.hpp"

namespace cm {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct GaussRule {
  std::vector<double> x, w;  // nodes and weights on [-1,1]
};

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    rule.x[i] = -t;
    rule.x[n - 1 - i] = t;
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

template <typename F>
double panel_integral(const GaussRule& g, double a, double b, F f) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  CompensatedSum acc;
  for (std::size_t i = 0; i < g.x.size(); ++i)
    acc.add(g.w[i] * f(mid + half * g.x[i]));
  return half * acc.result();
}

}  // namespace

double onsager_f_inf() {
  static const double value = [] {
    const GaussRule g = gauss_legendre(32);
    const double edges[] = {0.0, 0.5, 1.0, 1.8, 2.6, kPi};
    CompensatedSum acc;
    for (int p = 0; p + 1 < 6; ++p)
      acc.add(panel_integral(g, edges[p], edges[p + 1],
                             [](double k) { return gamma_k(k); }));
    return 0.5 * std::log(2.0) + acc.result() / (2.0 * kPi);
  }();
  return value;
}

double onsager_f_inf_2d() {
  static const double value = [] {
    const GaussRule g = gauss_legendre(12);
    // 1D panels geometrically graded into the origin; the unresolved
    // [0, pi/2^26]^2 corner contributes below 1e-13.
    std::vector<double> edges;
    edges.push_back(0.0);
    for (int m = 26; m >= 0; --m) edges.push_back(kPi / std::pow(2.0, m));
    const int np = static_cast<int>(edges.size()) - 1;
    CompensatedSum acc;
    for (int p1 = 0; p1 < np; ++p1) {
      for (int p2 = 0; p2 < np; ++p2) {
        if (p1 == 0 && p2 == 0) continue;
        acc.add(panel_integral(g, edges[p1], edges[p1 + 1], [&](double k1) {
          return panel_integral(g, edges[p2], edges[p2 + 1], [&](double k2) {
            return 0.5 * std::log(4.0 - 2.0 * std::cos(k1) -
                                  2.0 * std::cos(k2));
          });
        }));
      }
    }
    return 0.5 * std::log(2.0) + acc.result() / (kPi * kPi);
  }();
  return value;
}

double delta_ell(int ell) {
  if (ell < 4 || ell % 2 != 0)
    throw std::invalid_argument("width must be even and at least 4");
  CompensatedSum acc;
  for (int r = 0; r < ell; ++r)
    acc.add(gamma_k((2.0 * r + 1.0) * kPi / ell));
  return 0.5 * ell * acc.result() -
         static_cast<double>(ell) * ell * (onsager_f_inf() - 0.5 * std::log(2.0));
}

double c_from_delta(int ell) { return 6.0 / kPi * delta_ell(ell); }

double c_pairwise(int ell1, double f1, int ell2, double f2) {
  if (ell1 == ell2)
    throw std::invalid_argument("pairwise estimate needs distinct widths");
  const double x1 = 1.0 / (static_cast<double>(ell1) * ell1);
  const double x2 = 1.0 / (static_cast<double>(ell2) * ell2);
  return 6.0 / kPi * (f1 - f2) / (x1 - x2);
}

namespace {

// Neville tableau toward x = 0; anchors the returned value at the smallest
// abscissas (largest widths) and reports the scatter of the deepest entries.
Extrapolation neville_to_zero(std::vector<double> xs, std::vector<double> ys,
                              int order) {
  const int m = static_cast<int>(xs.size());
  if (order < 0) throw std::invalid_argument("order must be nonnegative");
  if (m < order + 1)
    throw std::invalid_argument("not enough points for the requested order");
  Extrapolation out;
  out.order_used = std::min(order, m - 1);
  std::vector<double> prev_col = ys, col = ys;
  for (int k = 1; k <= out.order_used; ++k) {
    prev_col = col;
    for (int i = 0; i + k < m; ++i)
      col[i] = (xs[i + k] * col[i] - xs[i] * col[i + 1]) / (xs[i + k] - xs[i]);
    col.resize(m - k);
  }
  out.value = col.back();
  double spread = 0.0;
  for (double e : col) spread = std::max(spread, std::fabs(e - out.value));
  if (out.order_used > 0)
    spread = std::max(spread, std::fabs(prev_col.back() - out.value));
  out.spread = spread;
  return out;
}

void check_widths(const std::vector<std::pair<int, double>>& points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].first < 2 || points[i].first % 2 != 0)
      throw std::invalid_argument("widths must be even and at least 2");
    if (i > 0 && points[i].first <= points[i - 1].first)
      throw std::invalid_argument("widths must be strictly increasing");
    if (!std::isfinite(points[i].second))
      throw std::invalid_argument("series values must be finite");
  }
}

}  // namespace

Extrapolation extrapolate_sequence(
    const std::vector<std::pair<int, double>>& points, int order) {
  check_widths(points);
  if (static_cast<int>(points.size()) < order + 2)
    throw std::invalid_argument("need at least order+2 points");
  std::vector<double> xs, ys;
  for (const auto& [ell, y] : points) {
    xs.push_back(1.0 / (static_cast<double>(ell) * ell));
    ys.push_back(y);
  }
  return neville_to_zero(std::move(xs), std::move(ys), order);
}

Extrapolation extrapolate_pairwise(
    const std::vector<std::pair<int, double>>& f_points, int order) {
  check_widths(f_points);
  if (static_cast<int>(f_points.size()) < order + 2)
    throw std::invalid_argument("need at least order+2 points");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i + 1 < f_points.size(); ++i) {
    const auto& [l1, f1] = f_points[i];
    const auto& [l2, f2] = f_points[i + 1];
    ys.push_back(c_pairwise(l1, f1, l2, f2));
    xs.push_back(1.0 / (static_cast<double>(l1) * l1) +
                 1.0 / (static_cast<double>(l2) * l2));
  }
  return neville_to_zero(std::move(xs), std::move(ys),
                         std::min<int>(order, xs.size() - 1));
}

namespace {

double log_tanh(double x) {
  const double e = std::exp(-2.0 * x);
  return std::log1p(-e) - std::log1p(e);
}

}  // namespace

double ratio_term(int ell, int big_l) {
  if (ell < 2 || big_l < 2 || ell % 2 != 0 || big_l % 2 != 0)
    throw std::invalid_argument("sides must be even and at least 2");
  CompensatedSum s1;
  for (int r = 0; r < ell; ++r)
    s1.add(log_tanh(0.5 * big_l * gamma_k((2.0 * r + 1.0) * kPi / ell)));
  CompensatedSum s2;
  for (int n = 0; n < big_l; ++n)
    s2.add(log_tanh(0.5 * ell * gamma_k((2.0 * n + 1.0) * kPi / big_l)));
  const double r = 0.5 * (1.0 + std::exp(s1.result()) + std::exp(s2.result()));
  if (!(r > 0.5) || !(r < 1.5))
    throw numeric_error("ratio term escaped its (1/2,3/2) bound");
  return r;
}

RatioReport ratio_limit_check(const std::vector<int>& ells) {
  RatioReport rep;
  for (int ell : ells) {
    const int big_l = ell * ell;
    const double r = ratio_term(ell, big_l);
    rep.entries.push_back(
        {ell, big_l, r,
         static_cast<double>(ell) / big_l * std::log(r)});
  }
  rep.decreasing = true;
  for (std::size_t i = 1; i < rep.entries.size(); ++i)
    if (rep.entries[i].scaled >= rep.entries[i - 1].scaled)
      rep.decreasing = false;
  if (!rep.entries.empty()) rep.final_value = rep.entries.back().scaled;
  return rep;
}

StripChargeResult strip_charge_at_beta(const InteractionSpec& spec,
                                       const std::vector<int>& ells,
                                       double beta, int order,
                                       double power_tol) {
  StripChargeResult out;
  out.beta_c = beta;
  for (int ell : ells)
    out.f_series.emplace_back(ell, strip_free_energy(ell, beta, spec,
                                                     power_tol));
  for (std::size_t i = 0; i + 1 < out.f_series.size(); ++i)
    out.c_pairs.push_back(
        c_pairwise(out.f_series[i].first, out.f_series[i].second,
                   out.f_series[i + 1].first, out.f_series[i + 1].second));
  const Extrapolation ex = extrapolate_pairwise(out.f_series, order);
  out.c_hat = ex.value;
  out.spread = ex.spread;
  return out;
}

StripChargeResult strip_charge_pipeline(const InteractionSpec& spec,
                                        const std::vector<int>& ells,
                                        double beta_lo, double beta_hi,
                                        int order, double power_tol,
                                        double beta_tol) {
  if (ells.size() < 3)
    throw std::invalid_argument("pipeline needs at least three widths");
  std::vector<double> xs, betas;
  StripChargeResult out;
  for (std::size_t i = 0; i + 1 < ells.size(); ++i) {
    const double b = locate_beta_c(spec, ells[i], ells[i + 1], beta_lo,
                                   beta_hi, beta_tol, power_tol);
    out.crossings.push_back({ells[i], ells[i + 1], b});
    xs.push_back(1.0 / (static_cast<double>(ells[i]) * ells[i + 1]));
    betas.push_back(b);
  }
  const int cross_order =
      std::min<int>(order, static_cast<int>(xs.size()) - 1);
  double beta_c = betas.back();
  if (xs.size() > 1) {
    std::vector<double> col = betas;
    for (int k = 1; k <= cross_order; ++k) {
      for (std::size_t i = 0; i + k < xs.size(); ++i)
        col[i] = (xs[i + k] * col[i] - xs[i] * col[i + 1]) /
                 (xs[i + k] - xs[i]);
      col.resize(xs.size() - k);
    }
    beta_c = col.back();
  }
  StripChargeResult sweep =
      strip_charge_at_beta(spec, ells, beta_c, order, power_tol);
  sweep.crossings = std::move(out.crossings);
  return sweep;
}

}  // namespace cm
