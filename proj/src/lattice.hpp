#ifndef CHARGEMETER_LATTICE_HPP
#define CHARGEMETER_LATTICE_HPP

#include <bitset>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace cm {

// Bond masks cover lattices up to 64 sites (128 bonds).
constexpr int kMaxMaskBonds = 128;
using BondMask = std::bitset<kMaxMaskBonds>;

struct Bond {
  int a = 0;          // tail site index
  int b = 0;          // head site index
  bool horizontal = false;
  bool wrap = false;  // crosses the seam in its direction
};

// Even x even torus, sites indexed row-major (site = y*ell + x).
// Bond 2*i is horizontal from site i to i+e1, bond 2*i+1 vertical to i+e2,
// so every bond is owned by its tail site and wrap bonds sit at x = ell-1
// (horizontal) and y = L-1 (vertical).
class TorusLattice {
 public:
  TorusLattice(int ell, int big_l);

  int ell() const { return ell_; }
  int big_l() const { return big_l_; }
  int n_sites() const { return n_sites_; }
  int n_bonds() const { return 2 * n_sites_; }

  int site(int x, int y) const;  // coordinates taken mod (ell, L)
  int x_of(int s) const { return s % ell_; }
  int y_of(int s) const { return s / ell_; }

  const Bond& bond(int b) const { return bonds_[b]; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  int horizontal_bond(int s) const { return 2 * s; }
  int vertical_bond(int s) const { return 2 * s + 1; }

  // Bonds whose parity decides the winding class of an even subgraph.
  const std::vector<int>& horizontal_wrap_bonds() const { return wrap_h_; }
  const std::vector<int>& vertical_wrap_bonds() const { return wrap_v_; }

  bool mask_capable() const { return n_bonds() <= kMaxMaskBonds; }
  BondMask plaquette_mask(int s) const;
  BondMask winding_loop_h() const;  // horizontal bonds of row 0
  BondMask winding_loop_v() const;  // vertical bonds of column 0

 private:
  int ell_, big_l_, n_sites_;
  std::vector<Bond> bonds_;
  std::vector<int> wrap_h_, wrap_v_;
};

// Pair interaction on top of the nearest-neighbour coupling J: shells keyed
// by squared displacement length, all couplings ferromagnetic.
class InteractionSpec {
 public:
  InteractionSpec(double j, double lambda,
                  const std::map<int, double>& v_shells);

  double j() const { return j_; }
  double lambda() const { return lambda_; }
  const std::map<int, double>& shells() const { return shells_; }
  // 0 when the displacement is not on an active shell.
  double v(int dx, int dy) const;
  int max_r2() const { return max_r2_; }
  bool has_pairs() const { return lambda_ > 0.0 && !shells_.empty(); }

  // All integer displacements on active shells, canonical half space
  // (d2 > 0, or d2 == 0 and d1 > 0), each with its shell value.
  struct Displacement {
    int dx, dy;
    double v;
  };
  const std::vector<Displacement>& half_space_displacements() const {
    return half_disp_;
  }

 private:
  double j_, lambda_;
  std::map<int, double> shells_;
  std::vector<Displacement> half_disp_;
  int max_r2_ = 0;
};

struct SitePair {
  int a, b;   // site indices, a is the canonical tail
  double v;   // shell value
};

// One entry per (site, half-space displacement); this defines the pair sum
// of the Hamiltonian at any size, so the same unordered pair may appear
// twice on tori smaller than the interaction range.
std::vector<SitePair> displacement_pairs(const TorusLattice& lat,
                                         const InteractionSpec& spec);

// Each unordered interacting pair exactly once; requires
// 2*sqrt(max_r2) < min(ell, L) so minimal images are unambiguous.
std::vector<SitePair> interacting_pairs(const TorusLattice& lat,
                                        const InteractionSpec& spec);

class SpinConfig {
 public:
  SpinConfig(const TorusLattice& lat, std::uint64_t bits);
  explicit SpinConfig(std::vector<int> spins);
  int spin(int site) const { return spins_[site]; }
  int size() const { return static_cast<int>(spins_.size()); }
  SpinConfig flipped() const;
  SpinConfig translated(const TorusLattice& lat, int dx, int dy) const;

 private:
  std::vector<int> spins_;
};

// H(sigma) = -J sum_bonds sigma sigma - lambda sum_pairs v sigma sigma.
double energy(const TorusLattice& lat, const InteractionSpec& spec,
              const SpinConfig& sigma);

struct EvenSubgraph {
  BondMask bonds;
};

// Seam-crossing parities (h, v); rejects masks with an odd-degree vertex.
std::pair<int, int> winding_parity(const TorusLattice& lat,
                                   const EvenSubgraph& g);

}  // namespace cm

#endif
