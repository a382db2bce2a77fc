#include "lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cm {

namespace {
int mod(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}
}  // namespace

TorusLattice::TorusLattice(int ell, int big_l) : ell_(ell), big_l_(big_l) {
  if (ell < 2 || big_l < 2 || ell % 2 != 0 || big_l % 2 != 0)
    throw std::invalid_argument("torus sides must be even and >= 2");
  if (static_cast<long long>(ell) * big_l > (1LL << 22))
    throw std::invalid_argument("torus too large");
  n_sites_ = ell_ * big_l_;
  bonds_.resize(2 * n_sites_);
  for (int y = 0; y < big_l_; ++y) {
    for (int x = 0; x < ell_; ++x) {
      const int s = y * ell_ + x;
      Bond& h = bonds_[2 * s];
      h.a = s;
      h.b = site(x + 1, y);
      h.horizontal = true;
      h.wrap = (x == ell_ - 1);
      if (h.wrap) wrap_h_.push_back(2 * s);
      Bond& v = bonds_[2 * s + 1];
      v.a = s;
      v.b = site(x, y + 1);
      v.horizontal = false;
      v.wrap = (y == big_l_ - 1);
      if (v.wrap) wrap_v_.push_back(2 * s + 1);
    }
  }
}

int TorusLattice::site(int x, int y) const {
  return mod(y, big_l_) * ell_ + mod(x, ell_);
}

BondMask TorusLattice::plaquette_mask(int s) const {
  if (!mask_capable()) throw std::invalid_argument("lattice too large for bond masks");
  const int x = x_of(s), y = y_of(s);
  BondMask m;
  m.set(horizontal_bond(s));
  m.set(vertical_bond(site(x + 1, y)));
  m.set(horizontal_bond(site(x, y + 1)));
  m.set(vertical_bond(s));
  return m;
}

BondMask TorusLattice::winding_loop_h() const {
  if (!mask_capable()) throw std::invalid_argument("lattice too large for bond masks");
  BondMask m;
  for (int x = 0; x < ell_; ++x) m.set(horizontal_bond(site(x, 0)));
  return m;
}

BondMask TorusLattice::winding_loop_v() const {
  if (!mask_capable()) throw std::invalid_argument("lattice too large for bond masks");
  BondMask m;
  for (int y = 0; y < big_l_; ++y) m.set(vertical_bond(site(0, y)));
  return m;
}

InteractionSpec::InteractionSpec(double j, double lambda,
                                 const std::map<int, double>& v_shells)
    : j_(j), lambda_(lambda) {
  if (!(j > 0.0) || !std::isfinite(j))
    throw std::invalid_argument("J must be positive and finite");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be >= 0 and finite");
  for (const auto& [r2, v] : v_shells) {
    if (r2 < 2)
      throw std::invalid_argument(
          "shell r2 must be >= 2 (on-site and nearest-neighbour shells are "
          "fixed to zero)");
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("shell value must be >= 0 and finite");
    if (v == 0.0) continue;
    // A shell is kept only if some integer displacement realises it.
    bool realizable = false;
    const int m = static_cast<int>(std::sqrt(static_cast<double>(r2))) + 1;
    for (int dx = -m; dx <= m && !realizable; ++dx)
      for (int dy = -m; dy <= m; ++dy)
        if (dx * dx + dy * dy == r2) {
          realizable = true;
          break;
        }
    if (!realizable)
      throw std::invalid_argument("shell r2=" + std::to_string(r2) +
                                  " has no integer displacement");
    shells_[r2] = v;
    if (r2 > max_r2_) max_r2_ = r2;
  }
  for (const auto& [r2, v] : shells_) {
    const int m = static_cast<int>(std::sqrt(static_cast<double>(r2))) + 1;
    for (int dy = 0; dy <= m; ++dy)
      for (int dx = -m; dx <= m; ++dx) {
        if (dx * dx + dy * dy != r2) continue;
        if (dy > 0 || (dy == 0 && dx > 0)) half_disp_.push_back({dx, dy, v});
      }
  }
}

double InteractionSpec::v(int dx, int dy) const {
  auto it = shells_.find(dx * dx + dy * dy);
  return it == shells_.end() ? 0.0 : it->second;
}

std::vector<SitePair> displacement_pairs(const TorusLattice& lat,
                                         const InteractionSpec& spec) {
  std::vector<SitePair> pairs;
  if (!spec.has_pairs()) return pairs;
  pairs.reserve(lat.n_sites() * spec.half_space_displacements().size());
  for (int s = 0; s < lat.n_sites(); ++s) {
    const int x = lat.x_of(s), y = lat.y_of(s);
    for (const auto& d : spec.half_space_displacements())
      pairs.push_back({s, lat.site(x + d.dx, y + d.dy), d.v});
  }
  return pairs;
}

std::vector<SitePair> interacting_pairs(const TorusLattice& lat,
                                        const InteractionSpec& spec) {
  if (spec.has_pairs()) {
    const int lmin = std::min(lat.ell(), lat.big_l());
    if (4 * spec.max_r2() >= lmin * lmin)
      throw std::invalid_argument(
          "interaction range must satisfy 2*sqrt(max r2) < min(ell, L)");
  }
  return displacement_pairs(lat, spec);
}

SpinConfig::SpinConfig(const TorusLattice& lat, std::uint64_t bits) {
  spins_.resize(lat.n_sites());
  for (int s = 0; s < lat.n_sites(); ++s)
    spins_[s] = ((bits >> s) & 1u) ? -1 : 1;
}

SpinConfig::SpinConfig(std::vector<int> spins) : spins_(std::move(spins)) {
  for (int v : spins_)
    if (v != 1 && v != -1) throw std::invalid_argument("spins must be +-1");
}

SpinConfig SpinConfig::flipped() const {
  SpinConfig r = *this;
  for (auto& v : r.spins_) v = -v;
  return r;
}

SpinConfig SpinConfig::translated(const TorusLattice& lat, int dx,
                                  int dy) const {
  SpinConfig r = *this;
  for (int s = 0; s < static_cast<int>(spins_.size()); ++s)
    r.spins_[lat.site(lat.x_of(s) + dx, lat.y_of(s) + dy)] = spins_[s];
  return r;
}

double energy(const TorusLattice& lat, const InteractionSpec& spec,
              const SpinConfig& sigma) {
  if (sigma.size() != lat.n_sites())
    throw std::invalid_argument("configuration size mismatch");
  double nn = 0.0;
  for (const Bond& b : lat.bonds()) nn += sigma.spin(b.a) * sigma.spin(b.b);
  double pair_sum = 0.0;
  if (spec.has_pairs()) {
    for (const SitePair& p : interacting_pairs(lat, spec))
      pair_sum += p.v * sigma.spin(p.a) * sigma.spin(p.b);
  }
  return -spec.j() * nn - spec.lambda() * pair_sum;
}

std::pair<int, int> winding_parity(const TorusLattice& lat,
                                   const EvenSubgraph& g) {
  std::vector<int> degree(lat.n_sites(), 0);
  for (int b = 0; b < lat.n_bonds(); ++b) {
    if (!g.bonds.test(b)) continue;
    degree[lat.bond(b).a]++;
    degree[lat.bond(b).b]++;
  }
  for (int s = 0; s < lat.n_sites(); ++s)
    if (degree[s] % 2 != 0)
      throw std::invalid_argument("subgraph has an odd-degree vertex");
  int h = 0, v = 0;
  for (int b : lat.horizontal_wrap_bonds()) h ^= g.bonds.test(b) ? 1 : 0;
  for (int b : lat.vertical_wrap_bonds()) v ^= g.bonds.test(b) ? 1 : 0;
  return {h, v};
}

}  // namespace cm
