#include "strip.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cm {

int charge_meter_threads() {
  const char* env = std::getenv("CHARGE_METER_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long parsed = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || parsed < 1) return 1;
  return static_cast<int>(std::min(parsed, 16l));
}

namespace {

constexpr int kMaxWidth = 16;

double spin_of(int bit) { return bit ? -1.0 : 1.0; }

// Runs fn over [0,n) split into contiguous blocks; every element has one
// writer, so the partitioning cannot change results.
template <typename Fn>
void parallel_for(std::size_t n, int n_threads, Fn fn) {
  if (n_threads <= 1 || n < 4096) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> workers;
  const std::size_t chunk = (n + n_threads - 1) / n_threads;
  for (int w = 0; w < n_threads; ++w) {
    const std::size_t lo = std::min(n, w * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([=] { fn(lo, hi); });
  }
  for (auto& th : workers) th.join();
}

double compensated_dot(const std::vector<double>& a,
                       const std::vector<double>& b) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.result();
}

}  // namespace

TransferOperator::TransferOperator(int ell, double beta,
                                   const InteractionSpec& spec)
    : ell_(ell), beta_(beta), j_(spec.j()) {
  if (ell < 2 || ell > kMaxWidth || ell % 2 != 0)
    throw std::invalid_argument("strip width must be even and within [2,16]");
  if (!std::isfinite(beta) || beta < 0.0)
    throw std::invalid_argument("beta must be finite and nonnegative");

  diag_left_ = diag_right_ = 0.0;
  std::vector<std::pair<int, double>> in_row;  // (d1 > 0, lambda*v)
  for (const auto& d : spec.half_space_displacements()) {
    if (d.dy > 1 || (d.dy == 1 && std::abs(d.dx) > 1))
      throw std::invalid_argument(
          "strip operator supports pair shells reaching at most one ring "
          "apart (|d2| <= 1 with |d1| <= 1 across rings)");
    if (d.dy == 0)
      in_row.emplace_back(d.dx, spec.lambda() * d.v);
    else if (d.dx == 1)
      diag_left_ += spec.lambda() * d.v;
    else
      diag_right_ += spec.lambda() * d.v;
  }
  if (spec.has_pairs() && 4 * spec.max_r2() >= ell * ell)
    throw std::invalid_argument(
        "pair range too large for the strip width: need 2*sqrt(max_r2) < "
        "ell");
  if (diag_left_ != diag_right_)
    throw std::invalid_argument(
        "cross-ring couplings must be left-right symmetric");

  const int dim = 1 << ell_;
  intra_energy_.resize(dim);
  half_weight_.resize(dim);
  for (int s = 0; s < dim; ++s) {
    double ring = 0.0;
    for (int i = 0; i < ell_; ++i) {
      const double si = spin_of((s >> i) & 1);
      ring += si * spin_of((s >> ((i + 1) % ell_)) & 1);
    }
    double e = j_ * ring;
    for (const auto& [d1, w] : in_row)
      for (int i = 0; i < ell_; ++i)
        e += w * spin_of((s >> i) & 1) * spin_of((s >> ((i + d1) % ell_)) & 1);
    intra_energy_[s] = e;
    half_weight_[s] = std::exp(0.5 * beta_ * e);
  }
  n_threads_ = charge_meter_threads();
}

double TransferOperator::inter_energy(int s_lo, int s_hi) const {
  double e = 0.0;
  for (int i = 0; i < ell_; ++i) {
    const double up = spin_of((s_hi >> i) & 1);
    e += j_ * up * spin_of((s_lo >> i) & 1);
    e += diag_left_ * up * spin_of((s_lo >> ((i - 1 + ell_) % ell_)) & 1);
    e += diag_right_ * up * spin_of((s_lo >> ((i + 1) % ell_)) & 1);
  }
  return e;
}

std::vector<double> TransferOperator::apply(const std::vector<double>& v) const {
  const std::size_t dim = static_cast<std::size_t>(1) << ell_;
  if (v.size() != dim)
    throw std::invalid_argument("state vector length mismatch");

  // Factor for target bit j: F(a; b,c,d) with a = s'_j, (b,c,d) =
  // (s_{j-1}, s_j, s_{j+1}); identical at every j by translation invariance.
  double ftab[2][8];
  for (int a = 0; a < 2; ++a)
    for (int key = 0; key < 8; ++key) {
      const double sa = spin_of(a);
      const double sb = spin_of((key >> 2) & 1);
      const double sc = spin_of((key >> 1) & 1);
      const double sd = spin_of(key & 1);
      ftab[a][key] = std::exp(
          beta_ * sa * (j_ * sc + diag_left_ * sb + diag_right_ * sd));
    }

  std::vector<double> cur(dim), next;
  for (std::size_t s = 0; s < dim; ++s) cur[s] = v[s] * half_weight_[s];

  std::vector<int> pos_s(ell_), pos_sp(ell_, -1);
  for (int m = 0; m < ell_; ++m) pos_s[m] = m;
  int nbits = ell_;

  auto drop_position = [&](int p) {
    for (int m = 0; m < ell_; ++m) {
      if (pos_s[m] > p) --pos_s[m];
      if (pos_sp[m] > p) --pos_sp[m];
    }
  };
  auto contract = [&](int m) {
    if (pos_s[m] < 0) return;
    const int p = pos_s[m];
    const std::size_t half = static_cast<std::size_t>(1) << (nbits - 1);
    const std::size_t low_mask = (static_cast<std::size_t>(1) << p) - 1;
    const std::size_t bit = static_cast<std::size_t>(1) << p;
    next.resize(half);
    parallel_for(half, n_threads_, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const std::size_t base = ((i >> p) << (p + 1)) | (i & low_mask);
        next[i] = cur[base] + cur[base | bit];
      }
    });
    cur.swap(next);
    pos_s[m] = -1;
    drop_position(p);
    --nbits;
  };

  for (int j = 0; j < ell_; ++j) {
    const int pb = pos_s[(j - 1 + ell_) % ell_];
    const int pc = pos_s[j];
    const int pd = pos_s[(j + 1) % ell_];
    const std::size_t sz = static_cast<std::size_t>(1) << nbits;
    next.resize(sz * 2);
    parallel_for(sz, n_threads_, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const int key = static_cast<int>((((i >> pb) & 1) << 2) |
                                         (((i >> pc) & 1) << 1) |
                                         ((i >> pd) & 1));
        next[i] = cur[i] * ftab[0][key];
        next[i | sz] = cur[i] * ftab[1][key];
      }
    });
    cur.swap(next);
    pos_sp[j] = nbits++;
    if (j >= 2 && j <= ell_ - 2) contract(j - 1);
  }
  contract(ell_ - 2);
  contract(ell_ - 1);
  contract(0);

  std::vector<double> out(dim);
  parallel_for(dim, n_threads_, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t sp = lo; sp < hi; ++sp) {
      std::size_t src = 0;
      for (int m = 0; m < ell_; ++m)
        src |= ((sp >> m) & 1) << pos_sp[m];
      out[sp] = cur[src] * half_weight_[sp];
    }
  });
  for (double x : out)
    if (!std::isfinite(x))
      throw numeric_error("transfer operator apply produced a non-finite "
                          "value; reduce beta or the width");
  return out;
}

std::vector<double> TransferOperator::dense_matrix() const {
  if (ell_ > 8)
    throw std::invalid_argument("dense transfer matrix limited to ell <= 8");
  const int dim = 1 << ell_;
  std::vector<double> t(static_cast<std::size_t>(dim) * dim);
  for (int sp = 0; sp < dim; ++sp)
    for (int s = 0; s < dim; ++s)
      t[static_cast<std::size_t>(sp) * dim + s] =
          std::exp(beta_ * (0.5 * intra_energy_[s] + 0.5 * intra_energy_[sp] +
                            inter_energy(s, sp)));
  return t;
}

std::vector<double> TransferOperator::dense_matrix_source_weighted() const {
  if (ell_ > 8)
    throw std::invalid_argument("dense transfer matrix limited to ell <= 8");
  const int dim = 1 << ell_;
  std::vector<double> t(static_cast<std::size_t>(dim) * dim);
  for (int sp = 0; sp < dim; ++sp)
    for (int s = 0; s < dim; ++s)
      t[static_cast<std::size_t>(sp) * dim + s] =
          std::exp(beta_ * (intra_energy_[s] + inter_energy(s, sp)));
  return t;
}

namespace {

double norm2(const std::vector<double>& v) {
  return std::sqrt(compensated_dot(v, v));
}

void scale(std::vector<double>& v, double f) {
  for (double& x : v) x *= f;
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

SpectralData dominant_pair(const TransferOperator& op, double tol) {
  if (!(tol > 1e-14) || !(tol < 1e-6))
    throw std::invalid_argument("spectral tolerance must lie in (1e-14,1e-6)");
  const std::size_t n = op.dim();
  constexpr int kMaxIter = 100000;
  SpectralData out;

  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double log_l1 = 0.0, prev = std::numeric_limits<double>::quiet_NaN();
  int it = 0;
  for (;; ++it) {
    if (it >= kMaxIter)
      throw numeric_error("power iteration for lambda1 did not converge");
    std::vector<double> w = op.apply(v);
    const double rayleigh = compensated_dot(v, w);
    if (!(rayleigh > 0.0))
      throw numeric_error("transfer operator lost positivity");
    log_l1 = std::log(rayleigh);
    scale(w, 1.0 / norm2(w));
    v.swap(w);
    if (it >= 2 && std::fabs(log_l1 - prev) < tol) break;
    prev = log_l1;
  }
  out.log_lambda1 = log_l1;

  // Deterministic start with both flip parities populated.
  std::vector<double> u(n);
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  for (std::size_t i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    u[i] = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
  }
  axpy(u, -compensated_dot(u, v), v);
  const double u0 = norm2(u);
  if (u0 > 0.0) scale(u, 1.0 / u0);

  const double lambda1 = std::exp(log_l1);
  double log_l2 = -std::numeric_limits<double>::infinity();
  double sign_free_log = 0.0;
  prev = std::numeric_limits<double>::quiet_NaN();
  for (int it2 = 0;; ++it2) {
    if (it2 >= kMaxIter)
      throw numeric_error("power iteration for lambda2 did not converge");
    ++it;
    std::vector<double> w = op.apply(u);
    axpy(w, -compensated_dot(w, v), v);
    const double rayleigh = compensated_dot(u, w);
    const double wn = norm2(w);
    if (wn < 1e-13 * lambda1 || rayleigh == 0.0) {
      // Rank-deficient beyond the Perron mode (infinite temperature).
      log_l2 = -std::numeric_limits<double>::infinity();
      break;
    }
    sign_free_log = std::log(std::fabs(rayleigh));
    scale(w, 1.0 / wn);
    u.swap(w);
    if (it2 >= 2 && std::fabs(sign_free_log - prev) < tol) {
      log_l2 = sign_free_log;
      break;
    }
    prev = sign_free_log;
  }
  out.log_lambda2 = log_l2;
  out.iterations = it + 1;
  if (std::isinf(log_l2)) {
    out.xi = 0.0;
  } else {
    if (log_l2 >= log_l1)
      throw numeric_error("spectral gap closed; eigenvalue order violated");
    out.xi = 1.0 / (log_l1 - log_l2);
  }
  return out;
}

double strip_free_energy(int ell, double beta, const InteractionSpec& spec,
                         double tol) {
  const TransferOperator op(ell, beta, spec);
  return dominant_pair(op, tol).log_lambda1 / ell;
}

double locate_beta_c(const InteractionSpec& spec, int ell, int ell2,
                     double beta_lo, double beta_hi, double tol,
                     double power_tol) {
  if (ell == ell2)
    throw std::invalid_argument("crossing needs two distinct widths");
  if (!(beta_lo > 0.0) || !(beta_hi > beta_lo))
    throw std::invalid_argument("invalid beta bracket");
  auto g = [&](double beta) {
    const SpectralData a = dominant_pair(TransferOperator(ell, beta, spec),
                                         power_tol);
    const SpectralData b = dominant_pair(TransferOperator(ell2, beta, spec),
                                         power_tol);
    return a.xi / ell - b.xi / ell2;
  };
  double lo = beta_lo, hi = beta_hi;
  double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0))
    throw std::invalid_argument(
        "bracket carries no sign change of the width-scaled correlation "
        "length difference");
  // Illinois variant of regula falsi.
  int side = 0;
  for (int k = 0; k < 200; ++k) {
    const double mid = (glo * hi - ghi * lo) / (glo - ghi);
    const double gm = g(mid);
    if (gm == 0.0 || hi - lo < tol) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
      if (side == -1) ghi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      ghi = gm;
      if (side == +1) glo *= 0.5;
      side = +1;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cm
