#ifndef CHARGEMETER_SECTORS_HPP
#define CHARGEMETER_SECTORS_HPP

#include <array>
#include <string>

#include "lattice.hpp"
#include "lognumber.hpp"

namespace cm {

// Boundary sectors (alpha1, alpha2); M = -1 (antiperiodic), P = +1.
enum class Sector { MM = 0, MP = 1, PM = 2, PP = 3 };

constexpr std::array<Sector, 4> kAllSectors = {Sector::MM, Sector::MP,
                                               Sector::PM, Sector::PP};

inline int alpha1(Sector s) {
  return (s == Sector::PM || s == Sector::PP) ? 1 : -1;
}
inline int alpha2(Sector s) {
  return (s == Sector::MP || s == Sector::PP) ? 1 : -1;
}
std::string sector_name(Sector s);    // "mm", "mp", "pm", "pp"
Sector sector_from_name(const std::string& name);

// Winding classes of even subgraphs, indexed 2*h_parity + v_parity.
constexpr int kClassEE = 0, kClassEO = 1, kClassOE = 2, kClassOO = 3;
std::string winding_class_name(int cls);  // "ee", "eo", "oe", "oo"

// Sign carried by winding class (h,v) inside sector alpha:
// (-alpha1)^h * (-alpha2)^v * (-1)^(h*v).
inline int sector_class_sign(Sector s, int h, int v) {
  int sign = 1;
  if (h) sign *= -alpha1(s);
  if (v) sign *= -alpha2(s);
  if (h && v) sign = -sign;
  return sign;
}

// tanh(beta_c J) = sqrt(2) - 1, correctly rounded; "critical" means exactly
// this double.
constexpr double kCriticalT = 0.41421356237309504880168872420969808;

// Allowed momenta of sector alpha: k = 2*pi*(r + (1-alpha1)/4)/ell,
// 2*pi*(n + (1-alpha2)/4)/L, r < ell, n < L.
struct MomentumGrid {
  int ell, big_l;
  Sector alpha;
  double k1(int r) const;
  double k2(int n) const;
};

// Uniform-coupling sector partition function as a product over the sector's
// momentum grid, prefactor (2 cosh^2(beta J))^(ell L) with cosh^2 = 1/(1-t^2).
// The PP sector carries the signed scalar prefactor (2-(1+t)^2)(2-(1-t)^2)
// and excludes k = (0,0), (pi,pi); it is exactly zero at t = kCriticalT and
// negative beyond.
LogNumber sector_partition_uniform(const TorusLattice& lat, double t,
                                   Sector alpha);

// Critical-point (t = kCriticalT) closed forms as cosh/sinh products over
// one axis; exchange_axes selects the equivalent product over the other
// axis.  PP returns exact zero.
LogNumber critical_sector_ff(const TorusLattice& lat, Sector alpha,
                             bool exchange_axes = false);

// (Zmm + Zmp + Zpm - Zpp) / 2; throws numeric_error when the combination
// cancels below 1e-8 of the largest input magnitude.
LogNumber combine_sectors(const std::array<LogNumber, 4>& by_sector);

// gamma(k) = arccosh(2 - cos k) >= 0 on [0, 2*pi], and its derivative
// (one-sided at the conical point k = 0, where gamma'(0+) = 1).
double gamma_k(double k);
double gamma_prime(double k);

// log(2 cosh x) and log(2 sinh x) stable for large x >= 0.
double log_2cosh(double x);
double log_2sinh(double x);

}  // namespace cm

#endif
