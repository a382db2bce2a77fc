#include "strings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>

#include "oracle.hpp"
#include "pfaffian.hpp"

namespace cm {

namespace {

std::vector<int> horizontal_leg(const TorusLattice& lat, int x, int y,
                                int steps, int dir) {
  std::vector<int> bonds;
  int cx = x;
  for (int i = 0; i < steps; ++i) {
    const int tail = dir > 0 ? lat.site(cx, y) : lat.site(cx - 1, y);
    bonds.push_back(lat.horizontal_bond(tail));
    cx += dir;
  }
  return bonds;
}

std::vector<int> vertical_leg(const TorusLattice& lat, int x, int y, int steps,
                              int dir) {
  std::vector<int> bonds;
  int cy = y;
  for (int i = 0; i < steps; ++i) {
    const int tail = dir > 0 ? lat.site(x, cy) : lat.site(x, cy - 1);
    bonds.push_back(lat.vertical_bond(tail));
    cy += dir;
  }
  return bonds;
}

struct Leg {
  int steps, dir;
};

// Both ways around the torus for one axis, or just the minimal one(s).
std::vector<Leg> leg_choices(int forward, int period, bool include_long_way) {
  if (forward == 0) return {};
  const int backward = period - forward;
  std::vector<Leg> legs;
  if (include_long_way || forward <= backward) legs.push_back({forward, +1});
  if (include_long_way || backward <= forward) legs.push_back({backward, -1});
  return legs;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

std::vector<StringPath> string_catalog_pair(const TorusLattice& lat, int a,
                                            int b, bool include_long_way,
                                            int cap) {
  if (a == b) throw std::invalid_argument("string endpoints must differ");
  const int xa = lat.x_of(a), ya = lat.y_of(a);
  const int xb = lat.x_of(b), yb = lat.y_of(b);
  const int de = ((xb - xa) % lat.ell() + lat.ell()) % lat.ell();
  const int dn = ((yb - ya) % lat.big_l() + lat.big_l()) % lat.big_l();
  const auto hlegs = leg_choices(de, lat.ell(), include_long_way);
  const auto vlegs = leg_choices(dn, lat.big_l(), include_long_way);

  std::vector<std::pair<StringPath::Shape, std::vector<int>>> raw;
  if (vlegs.empty()) {
    for (const Leg& h : hlegs)
      raw.emplace_back(StringPath::kHorizontal,
                       horizontal_leg(lat, xa, ya, h.steps, h.dir));
  } else if (hlegs.empty()) {
    for (const Leg& v : vlegs)
      raw.emplace_back(StringPath::kVertical,
                       vertical_leg(lat, xa, ya, v.steps, v.dir));
  } else {
    for (const Leg& h : hlegs) {
      for (const Leg& v : vlegs) {
        raw.emplace_back(
            StringPath::kCorner,
            concat(horizontal_leg(lat, xa, ya, h.steps, h.dir),
                   vertical_leg(lat, xb, ya, v.steps, v.dir)));
        raw.emplace_back(
            StringPath::kCorner,
            concat(vertical_leg(lat, xa, ya, v.steps, v.dir),
                   horizontal_leg(lat, xa, yb, h.steps, h.dir)));
      }
    }
  }

  std::vector<StringPath> catalog;
  std::set<std::vector<int>> seen;
  for (auto& [shape, bonds] : raw) {
    std::vector<int> key = bonds;
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) != key.end())
      continue;  // a leg lapped itself; not a simple path
    if (!seen.insert(std::move(key)).second) continue;
    StringPath p;
    p.shape = shape;
    p.bonds = std::move(bonds);
    for (int bd : p.bonds) p.mask.set(bd);
    catalog.push_back(std::move(p));
  }
  std::sort(catalog.begin(), catalog.end(),
            [](const StringPath& l, const StringPath& r) {
              if (l.bonds.size() != r.bonds.size())
                return l.bonds.size() < r.bonds.size();
              return l.bonds < r.bonds;
            });
  if (static_cast<int>(catalog.size()) > cap)
    throw std::invalid_argument("string catalog exceeds the per-pair cap");
  return catalog;
}

std::string convention_name(PathConvention c) {
  switch (c) {
    case PathConvention::kSplit: return "split";
    case PathConvention::kFirst: return "first";
    case PathConvention::kSecond: return "second";
    case PathConvention::kLast: return "last";
  }
  return "unknown";
}

std::vector<double> deformed_couplings(const TorusLattice& lat,
                                       const BondMask& blackened, double t) {
  if (!(t > 0.0) || !(t < 1.0))
    throw std::invalid_argument("tanh coupling must lie in (0,1)");
  std::vector<double> t_bonds(lat.n_bonds(), t);
  for (int b = 0; b < lat.n_bonds(); ++b)
    if (blackened.test(b)) t_bonds[b] = 1.0 / t;
  return t_bonds;
}

namespace {

std::pair<int, int> convention_picks(std::size_t catalog_size,
                                     PathConvention c) {
  const int last = static_cast<int>(catalog_size) - 1;
  switch (c) {
    case PathConvention::kSplit: return {0, std::min(1, last)};
    case PathConvention::kFirst: return {0, 0};
    case PathConvention::kSecond: {
      const int m = std::min(1, last);
      return {m, m};
    }
    case PathConvention::kLast: return {last, last};
  }
  return {0, 0};
}

struct ChannelSlot {
  double log_tau;
  BondMask mask;
};

}  // namespace

LogNumber interacting_sector_pairs(const TorusLattice& lat, double j,
                                   double lambda,
                                   const std::vector<SitePair>& pairs,
                                   double beta, Sector alpha,
                                   PathConvention convention,
                                   bool include_long_way, int slot_cap) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("beta must be positive");
  if (!(j > 0.0)) throw std::invalid_argument("J must be positive");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");

  const double t = std::tanh(beta * j);
  const int n = lat.n_sites();
  double log_pref = n * (std::log(2.0) - std::log1p(-t * t));

  std::vector<ChannelSlot> slots;
  for (const SitePair& p : pairs) {
    const double k = beta * lambda * p.v;
    if (k == 0.0) continue;
    const double tau = std::tanh(0.5 * k);  // > 0 for lambda >= 0
    log_pref += 2.0 * (log_2cosh(0.5 * k) - std::log(2.0));
    const auto catalog = string_catalog_pair(lat, p.a, p.b, include_long_way);
    const auto [i1, i2] = convention_picks(catalog.size(), convention);
    slots.push_back({std::log(tau), catalog[i1].mask});
    slots.push_back({std::log(tau), catalog[i2].mask});
  }
  if (static_cast<int>(slots.size()) > slot_cap)
    throw std::invalid_argument(
        "string expansion exceeds the channel slot cap; restrict the pair "
        "list");

  const std::vector<double> uniform(lat.n_bonds(), t);
  if (slots.empty()) {
    LogNumber poly = signed_polygon_sum_pfaffian(lat, uniform, alpha);
    return LogNumber::from_log(+1, log_pref) * poly;
  }

  const int k = static_cast<int>(slots.size());
  const double log_t = std::log(t);
  const std::uint64_t total = 1ull << k;
  LogNumber acc;
  BondMask bl;
  std::uint32_t active = 0;
  std::vector<double> t_bonds(lat.n_bonds());
  for (std::uint64_t i = 0;; ++i) {
    // Config weight prod tanh * t^|bl|, rebuilt fresh; nonnegative since
    // every tau > 0 and t in (0,1).
    double logw = 0.0;
    for (int s = 0; s < k; ++s)
      if (active & (1u << s)) logw += slots[s].log_tau;
    logw += static_cast<double>(bl.count()) * log_t;
    for (int bd = 0; bd < lat.n_bonds(); ++bd)
      t_bonds[bd] = bl.test(bd) ? 1.0 / t : t;
    LogNumber poly = signed_polygon_sum_pfaffian(lat, t_bonds, alpha);
    acc += LogNumber::from_log(+1, logw) * poly;
    if (i + 1 == total) break;
    const int g = __builtin_ctzll(i + 1);
    active ^= 1u << g;
    bl ^= slots[g].mask;
  }
  return LogNumber::from_log(+1, log_pref) * acc;
}

LogNumber interacting_sector(const TorusLattice& lat,
                             const InteractionSpec& spec, double beta,
                             Sector alpha, PathConvention convention,
                             bool include_long_way) {
  const std::vector<SitePair> pairs =
      spec.has_pairs() ? interacting_pairs(lat, spec)
                       : std::vector<SitePair>{};
  return interacting_sector_pairs(lat, spec.j(), spec.lambda(), pairs, beta,
                                  alpha, convention, include_long_way);
}

Lemma1Report lemma1_check_pairs(const TorusLattice& lat, double j,
                                double lambda,
                                const std::vector<SitePair>& pairs,
                                double beta, PathConvention convention,
                                bool include_long_way) {
  Lemma1Report rep;
  rep.beta = beta;
  rep.z_brute = brute_force_partition_pairs(lat, j, lambda, pairs, beta);
  rep.z_mm = interacting_sector_pairs(lat, j, lambda, pairs, beta, Sector::MM,
                                      convention, include_long_way);
  rep.z_mp = interacting_sector_pairs(lat, j, lambda, pairs, beta, Sector::MP,
                                      convention, include_long_way);
  rep.z_pm = interacting_sector_pairs(lat, j, lambda, pairs, beta, Sector::PM,
                                      convention, include_long_way);
  rep.z_pp = interacting_sector_pairs(lat, j, lambda, pairs, beta, Sector::PP,
                                      convention, include_long_way);

  LogNumber denom = rep.z_mm;
  denom += rep.z_mp;
  denom += rep.z_pm;
  rep.ratio = (rep.z_brute / denom).value();
  LogNumber sumpos = rep.z_mp;
  sumpos += rep.z_pm;
  rep.sumpos_margin = sumpos.is_zero() ? 0.0 : (sumpos / denom).value();
  rep.sumpos_ok = sumpos.sign() >= 0;
  rep.ratio_ok = rep.ratio >= 1.0 / 3.0 && rep.ratio <= 1.0;

  LogNumber assembled = denom;
  assembled -= rep.z_pp;
  assembled *= LogNumber::from_value(0.5);
  rep.consistency_rel = std::fabs((assembled / rep.z_brute).value() - 1.0);
  rep.consistency_ok = rep.consistency_rel < 1e-8;
  return rep;
}

Lemma1Report lemma1_check(const TorusLattice& lat, const InteractionSpec& spec,
                          double beta, PathConvention convention,
                          bool include_long_way) {
  const std::vector<SitePair> pairs =
      spec.has_pairs() ? interacting_pairs(lat, spec)
                       : std::vector<SitePair>{};
  return lemma1_check_pairs(lat, spec.j(), spec.lambda(), pairs, beta,
                            convention, include_long_way);
}

}  // namespace cm
