#ifndef CHARGEMETER_STRIP_HPP
#define CHARGEMETER_STRIP_HPP

#include <vector>

#include "lattice.hpp"
#include "lognumber.hpp"

namespace cm {

// Worker count for the block-parallel operator apply, from the
// CHARGE_METER_THREADS environment variable (default 1, clamped to [1,16]).
// Results are bitwise identical for every setting.
int charge_meter_threads();

// Row-to-row transfer operator of the strip of even width ell:
//   T[s',s] = exp(beta*(E_intra(s)/2 + E_intra(s')/2 + E_inter(s,s')))
// with E_intra the in-row bond and pair energy of one ring and E_inter the
// vertical bonds plus diagonal-shell pairs between adjacent rings.  The
// symmetric split keeps T symmetric; all entries are positive.  Pair shells
// must not reach further than one ring apart (|d2| <= 1, and |d1| <= 1 when
// |d2| = 1).
class TransferOperator {
 public:
  TransferOperator(int ell, double beta, const InteractionSpec& spec);

  int ell() const { return ell_; }
  int dim() const { return 1 << ell_; }
  double beta() const { return beta_; }

  // w = T v, matrix-free in O(ell * 2^ell) with a 2^(ell+3) transient.
  std::vector<double> apply(const std::vector<double>& v) const;

  // Dense T for cross-checks (ell <= 8); row-major dim x dim.
  std::vector<double> dense_matrix() const;
  // Similarity-transformed variant with the intra energy attached fully to
  // the source row; same spectrum, used by the splitting-invariance test.
  std::vector<double> dense_matrix_source_weighted() const;

 private:
  double inter_energy(int s_lo, int s_hi) const;

  int ell_;
  double beta_;
  double j_;
  double diag_left_, diag_right_;     // couplings to s_{j-1} and s_{j+1}
  std::vector<double> intra_energy_;  // E_intra per row state
  std::vector<double> half_weight_;   // exp(beta*E_intra/2)
  int n_threads_;
};

struct SpectralData {
  double log_lambda1 = 0.0;
  double log_lambda2 = 0.0;  // log |lambda2|; -inf when lambda2 vanishes
  double xi = 0.0;           // 1/(log lambda1 - log |lambda2|)
  int iterations = 0;
};

// Leading two eigenvalues by power iteration; lambda2 through deflation
// against the converged Perron vector.  tol bounds the change of the log
// eigenvalue between sweeps, tol in (1e-14, 1e-6).
SpectralData dominant_pair(const TransferOperator& op, double tol);

// f(ell, beta) = log lambda1 / ell, the width-ell strip free energy density.
double strip_free_energy(int ell, double beta, const InteractionSpec& spec,
                         double tol = 1e-11);

// Root of g(beta) = xi_ell/ell - xi_ell2/ell2 inside [beta_lo, beta_hi]
// (phenomenological renormalization crossing); signals when the bracket
// carries no sign change.
double locate_beta_c(const InteractionSpec& spec, int ell, int ell2,
                     double beta_lo, double beta_hi, double tol = 1e-10,
                     double power_tol = 1e-11);

}  // namespace cm

#endif
