#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "pfaffian.hpp"

namespace cm {

namespace {

int lowest_set_bit(std::uint64_t x) {
  return __builtin_ctzll(x);
}

}  // namespace

std::array<LogNumber, 4> cycle_space_class_sums(
    const TorusLattice& lat, const std::vector<double>& t_bonds) {
  if (lat.n_sites() > 20)
    throw std::invalid_argument(
        "cycle space enumeration is limited to 20 sites");
  if (!lat.mask_capable())
    throw std::invalid_argument("lattice exceeds bond mask capacity");
  if (t_bonds.size() != static_cast<std::size_t>(lat.n_bonds()))
    throw std::invalid_argument("bond weight vector size mismatch");

  const int nb = lat.n_bonds();
  std::vector<double> log_abs_t(nb);
  std::vector<int> sign_t(nb);
  for (int b = 0; b < nb; ++b) {
    const double t = t_bonds[b];
    sign_t[b] = t > 0.0 ? 1 : (t < 0.0 ? -1 : 0);
    log_abs_t[b] = std::log(std::fabs(t));
  }

  // Generators: all plaquettes but the last one, plus the two winding loops.
  std::vector<BondMask> gens;
  std::vector<int> gen_h, gen_v;
  for (int s = 0; s < lat.n_sites() - 1; ++s) {
    gens.push_back(lat.plaquette_mask(s));
    gen_h.push_back(0);
    gen_v.push_back(0);
  }
  gens.push_back(lat.winding_loop_h());
  gen_h.push_back(1);
  gen_v.push_back(0);
  gens.push_back(lat.winding_loop_v());
  gen_h.push_back(0);
  gen_v.push_back(1);

  const int ng = static_cast<int>(gens.size());
  std::array<LogNumber, 4> sums{};  // all zero

  BondMask cur;
  int h = 0, v = 0;
  const std::uint64_t total = 1ull << ng;
  for (std::uint64_t i = 0;; ++i) {
    // Weight of the current subgraph, accumulated fresh in the log domain.
    int sign = 1;
    double logw = 0.0;
    for (int b = 0; b < nb; ++b) {
      if (!cur.test(b)) continue;
      sign *= sign_t[b];
      logw += log_abs_t[b];
    }
    if (sign != 0)
      sums[2 * h + v] += LogNumber::from_log(sign, logw);
    if (i + 1 == total) break;
    const int g = lowest_set_bit(i + 1);
    cur ^= gens[g];
    h ^= gen_h[g];
    v ^= gen_v[g];
  }
  return sums;
}

LogNumber signed_polygon_sum_enumerated(const TorusLattice& lat,
                                        const std::vector<double>& t_bonds,
                                        Sector alpha) {
  const auto sums = cycle_space_class_sums(lat, t_bonds);
  LogNumber total;
  for (int cls = 0; cls < 4; ++cls) {
    const int h = cls >> 1, v = cls & 1;
    const int sgn = sector_class_sign(alpha, h, v);
    total += sgn < 0 ? -sums[cls] : sums[cls];
  }
  return total;
}

LogNumber sector_partition_enumerated(const TorusLattice& lat, double t,
                                      Sector alpha) {
  if (!(t > 0.0) || !(t < 1.0))
    throw std::invalid_argument("tanh coupling must lie in (0,1)");
  std::vector<double> t_bonds(lat.n_bonds(), t);
  LogNumber poly = signed_polygon_sum_enumerated(lat, t_bonds, alpha);
  LogNumber pref = LogNumber::from_log(
      +1, lat.n_sites() * (std::log(2.0) - std::log1p(-t * t)));
  return pref * poly;
}

double sign_table_residual(const TorusLattice& lat,
                           const std::vector<double>& t_bonds) {
  const auto sums = cycle_space_class_sums(lat, t_bonds);
  double scale_log = 0.0;
  for (const auto& z : sums)
    if (!z.is_zero()) scale_log = std::max(scale_log, z.log_abs());
  double worst = 0.0;
  for (Sector alpha : kAllSectors) {
    LogNumber ref;
    for (int cls = 0; cls < 4; ++cls) {
      const int sgn = sector_class_sign(alpha, cls >> 1, cls & 1);
      ref += sgn < 0 ? -sums[cls] : sums[cls];
    }
    const LogNumber pf = signed_polygon_sum_pfaffian(lat, t_bonds, alpha);
    const LogNumber diff = pf - ref;
    if (diff.is_zero()) continue;
    worst = std::max(worst, std::exp(diff.log_abs() - scale_log));
  }
  return worst;
}

namespace {

struct PairAdjacency {
  std::vector<double> bucket_v;                        // distinct couplings
  std::vector<std::vector<std::pair<int, int>>> adj;   // site -> (other, bucket)
  std::vector<long long> initial_count;                // pairs per bucket
};

PairAdjacency build_pair_adjacency(int nsites,
                                   const std::vector<SitePair>& pairs) {
  PairAdjacency pa;
  pa.adj.resize(nsites);
  for (const auto& p : pairs) {
    if (p.a == p.b)
      throw std::invalid_argument("pair list contains a self pair");
    int bucket = -1;
    for (std::size_t i = 0; i < pa.bucket_v.size(); ++i)
      if (pa.bucket_v[i] == p.v) {
        bucket = static_cast<int>(i);
        break;
      }
    if (bucket < 0) {
      bucket = static_cast<int>(pa.bucket_v.size());
      pa.bucket_v.push_back(p.v);
      pa.initial_count.push_back(0);
    }
    pa.adj[p.a].emplace_back(p.b, bucket);
    pa.adj[p.b].emplace_back(p.a, bucket);
    pa.initial_count[bucket] += 1;
  }
  return pa;
}

LogNumber brute_force_sweep(const TorusLattice& lat, double j, double lambda,
                            const std::vector<SitePair>& pairs, double beta) {
  const int n = lat.n_sites();
  if (n > 24)
    throw std::invalid_argument(
        "direct spin enumeration is limited to 24 sites");
  if (!std::isfinite(beta) || beta < 0.0)
    throw std::invalid_argument("beta must be finite and nonnegative");

  // Bond adjacency keeps one entry per incident bond, so doubled wrap bonds
  // on side-2 tori are counted twice as required.
  std::vector<std::vector<int>> bond_adj(n);
  for (int b = 0; b < lat.n_bonds(); ++b) {
    const Bond& bd = lat.bond(b);
    bond_adj[bd.a].push_back(bd.b);
    bond_adj[bd.b].push_back(bd.a);
  }
  const PairAdjacency pa = build_pair_adjacency(n, pairs);
  const int nbuckets = static_cast<int>(pa.bucket_v.size());

  const std::uint64_t total = 1ull << n;
  std::vector<signed char> spin(n);
  std::vector<long long> pair_count(nbuckets);
  long long nn_count = 0;

  auto reset = [&] {
    std::fill(spin.begin(), spin.end(), static_cast<signed char>(1));
    nn_count = lat.n_bonds();
    for (int k = 0; k < nbuckets; ++k) pair_count[k] = pa.initial_count[k];
  };
  auto energy = [&] {
    double e = -j * static_cast<double>(nn_count);
    for (int k = 0; k < nbuckets; ++k)
      e -= lambda * pa.bucket_v[k] * static_cast<double>(pair_count[k]);
    return e;
  };
  auto flip = [&](int s) {
    const int old = spin[s];
    for (int u : bond_adj[s]) nn_count -= 2ll * old * spin[u];
    for (const auto& [u, bk] : pa.adj[s])
      pair_count[bk] -= 2ll * old * spin[u];
    spin[s] = static_cast<signed char>(-old);
  };

  // Pass 1: ground state energy over the Gray code sweep.
  reset();
  double e_min = energy();
  for (std::uint64_t i = 1; i < total; ++i) {
    flip(lowest_set_bit(i));
    e_min = std::min(e_min, energy());
  }

  // Pass 2: compensated sum of the shifted Boltzmann weights.
  reset();
  CompensatedSum acc;
  acc.add(std::exp(-beta * (energy() - e_min)));
  for (std::uint64_t i = 1; i < total; ++i) {
    flip(lowest_set_bit(i));
    acc.add(std::exp(-beta * (energy() - e_min)));
  }
  return LogNumber::from_log(+1, -beta * e_min + std::log(acc.result()));
}

}  // namespace

LogNumber brute_force_partition(const TorusLattice& lat,
                                const InteractionSpec& spec, double beta) {
  const std::vector<SitePair> pairs = interacting_pairs(lat, spec);
  return brute_force_sweep(lat, spec.j(), spec.lambda(), pairs, beta);
}

LogNumber brute_force_partition_pairs(const TorusLattice& lat, double j,
                                      double lambda,
                                      const std::vector<SitePair>& pairs,
                                      double beta) {
  return brute_force_sweep(lat, j, lambda, pairs, beta);
}

}  // namespace cm
