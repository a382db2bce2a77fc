#include "sectors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cm {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string sector_name(Sector s) {
  switch (s) {
    case Sector::MM: return "mm";
    case Sector::MP: return "mp";
    case Sector::PM: return "pm";
    case Sector::PP: return "pp";
  }
  throw std::invalid_argument("bad sector");
}

Sector sector_from_name(const std::string& name) {
  for (Sector s : kAllSectors)
    if (sector_name(s) == name) return s;
  throw std::invalid_argument("unknown sector '" + name + "'");
}

std::string winding_class_name(int cls) {
  switch (cls) {
    case kClassEE: return "ee";
    case kClassEO: return "eo";
    case kClassOE: return "oe";
    case kClassOO: return "oo";
  }
  throw std::invalid_argument("bad winding class");
}

double MomentumGrid::k1(int r) const {
  const double off = (1.0 - alpha1(alpha)) / 4.0;
  return 2.0 * kPi * (r + off) / ell;
}

double MomentumGrid::k2(int n) const {
  const double off = (1.0 - alpha2(alpha)) / 4.0;
  return 2.0 * kPi * (n + off) / big_l;
}

double gamma_k(double k) {
  if (k < 0.0 || k > 2.0 * kPi + 1e-12)
    throw std::invalid_argument("gamma_k domain is [0, 2*pi]");
  const double s = std::sin(0.5 * k);
  return std::log1p(2.0 * s * s + 2.0 * s * std::sqrt(1.0 + s * s));
}

double gamma_prime(double k) {
  if (k < 0.0 || k > 2.0 * kPi + 1e-12)
    throw std::invalid_argument("gamma_prime domain is [0, 2*pi]");
  const double s = std::sin(0.5 * k);
  return std::cos(0.5 * k) / std::sqrt(1.0 + s * s);
}

double log_2cosh(double x) {
  if (x < 0.0) x = -x;
  return x + std::log1p(std::exp(-2.0 * x));
}

double log_2sinh(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("log_2sinh needs x > 0");
  return x + std::log1p(-std::exp(-2.0 * x));
}

LogNumber sector_partition_uniform(const TorusLattice& lat, double t,
                                   Sector alpha) {
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("t must lie in (0, 1)");
  const int ell = lat.ell(), big_l = lat.big_l();
  const long long n_sites = static_cast<long long>(ell) * big_l;
  const MomentumGrid grid{ell, big_l, alpha};

  std::vector<double> c1(ell), c2(big_l);
  for (int r = 0; r < ell; ++r) c1[r] = std::cos(grid.k1(r));
  for (int n = 0; n < big_l; ++n) c2[n] = std::cos(grid.k2(n));

  const double a = (1.0 + t * t) * (1.0 + t * t);
  const double b = 2.0 * t * (1.0 - t * t);

  CompensatedSum half_log_product;
  if (alpha == Sector::PP) {
    // t = kCriticalT is an exact root of 2 - (1+t)^2; keep the sign exact.
    if (t == kCriticalT) return LogNumber();
    for (int r = 0; r < ell; ++r)
      for (int n = 0; n < big_l; ++n) {
        if ((r == 0 && n == 0) || (r == ell / 2 && n == big_l / 2)) continue;
        half_log_product.add(std::log(a - b * (c1[r] + c2[n])));
      }
    const double p1 = 2.0 - (1.0 + t) * (1.0 + t);
    const double p2 = 2.0 - (1.0 - t) * (1.0 - t);
    const double pref = p1 * p2;
    if (pref == 0.0) return LogNumber();
    const double log_abs = n_sites * (std::log(2.0) - std::log1p(-t * t)) +
                           std::log(std::abs(pref)) +
                           0.5 * half_log_product.result();
    return LogNumber::from_log(pref > 0.0 ? 1 : -1, log_abs);
  }

  for (int r = 0; r < ell; ++r)
    for (int n = 0; n < big_l; ++n)
      half_log_product.add(std::log(a - b * (c1[r] + c2[n])));
  const double log_abs = n_sites * (std::log(2.0) - std::log1p(-t * t)) +
                         0.5 * half_log_product.result();
  return LogNumber::from_log(1, log_abs);
}

LogNumber critical_sector_ff(const TorusLattice& lat, Sector alpha,
                             bool exchange_axes) {
  if (alpha == Sector::PP) return LogNumber();
  const int ell = lat.ell(), big_l = lat.big_l();
  // Product axis: gamma evaluated on the ell grid with L-long hyperbolic
  // factors, or the other way round when exchanged.
  const int na = exchange_axes ? big_l : ell;
  const int nb = exchange_axes ? ell : big_l;

  // Which hyperbolic function and which index parity each sector takes:
  //   along ell:  MM cosh/odd, MP sinh/odd, PM cosh/even
  //   along L:    MM cosh/odd, MP cosh/even, PM sinh/odd
  bool use_sinh, odd_indices;
  if (alpha == Sector::MM) {
    use_sinh = false;
    odd_indices = true;
  } else if (alpha == Sector::MP) {
    use_sinh = exchange_axes ? false : true;
    odd_indices = exchange_axes ? false : true;
  } else {  // PM
    use_sinh = exchange_axes ? true : false;
    odd_indices = exchange_axes ? true : false;
  }

  CompensatedSum log_sum;
  for (int r = 0; r < na; ++r) {
    const int p = odd_indices ? 2 * r + 1 : 2 * r;
    const double g = gamma_k(kPi * p / na);
    const double x = 0.5 * nb * g;
    log_sum.add(use_sinh ? log_2sinh(x) : log_2cosh(x));
  }
  const double log_abs =
      0.5 * ell * big_l * std::log(2.0) + log_sum.result();
  return LogNumber::from_log(1, log_abs);
}

LogNumber combine_sectors(const std::array<LogNumber, 4>& by_sector) {
  LogNumber sum = by_sector[static_cast<int>(Sector::MM)] +
                  by_sector[static_cast<int>(Sector::MP)] +
                  by_sector[static_cast<int>(Sector::PM)] -
                  by_sector[static_cast<int>(Sector::PP)];
  double max_log = -std::numeric_limits<double>::infinity();
  for (const LogNumber& z : by_sector)
    if (!z.is_zero()) max_log = std::max(max_log, z.log_abs());
  if (!std::isinf(max_log)) {
    const bool cancelled =
        sum.is_zero() || (sum.log_abs() - max_log < std::log(1e-8));
    if (cancelled)
      throw numeric_error(
          "sector combination lost more than 8 digits to cancellation; use "
          "exact enumeration instead");
  }
  return sum * LogNumber::from_value(0.5);
}

}  // namespace cm
