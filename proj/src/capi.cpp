#include "chargemeter.h"

#include <map>
#include <string>
#include <vector>

#include "charge.hpp"
#include "cli.hpp"
#include "lattice.hpp"
#include "lognumber.hpp"
#include "oracle.hpp"
#include "pfaffian.hpp"
#include "rg.hpp"
#include "sectors.hpp"
#include "strings.hpp"
#include "strip.hpp"

struct cm_model {
  cm::TorusLattice lattice;
  cm::InteractionSpec spec;
};

namespace {

thread_local std::string g_last_error;

// Runs the body, translating exceptions to the C error codes and
// recording the message for cm_last_error.
template <typename Fn>
int guarded(Fn&& body) {
  try {
    body();
    g_last_error.clear();
    return CM_OK;
  } catch (const cm::numeric_error& e) {
    g_last_error = e.what();
    return CM_ENUMERIC;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return CM_EINVAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CM_ENUMERIC;
  }
}

int require(bool ok, const char* what) {
  if (ok) return CM_OK;
  g_last_error = what;
  return CM_EINVAL;
}

cm::Sector to_sector(cm_sector alpha) {
  if (alpha < CM_SECTOR_MM || alpha > CM_SECTOR_PP)
    throw std::invalid_argument("sector must be one of the four cm_sector values");
  return static_cast<cm::Sector>(alpha);
}

cm_lognum to_c(const cm::LogNumber& z) {
  return {z.sign(), z.log_abs()};
}

}  // namespace

extern "C" {

int cm_model_create(int ell, int big_l, double j, double lambda,
                    const cm_v_shell* shells, int n_shells, cm_model** out) {
  if (int rc = require(out != nullptr, "out must not be NULL")) return rc;
  if (int rc = require(n_shells >= 0 && (n_shells == 0 || shells != nullptr),
                       "shells must be provided when n_shells > 0"))
    return rc;
  *out = nullptr;
  return guarded([&] {
    std::map<int, double> shell_map;
    for (int i = 0; i < n_shells; ++i) {
      if (!shell_map.emplace(shells[i].r2, shells[i].v).second)
        throw std::invalid_argument("duplicate shell radius^2");
    }
    *out = new cm_model{cm::TorusLattice(ell, big_l),
                        cm::InteractionSpec(j, lambda, shell_map)};
  });
}

void cm_model_destroy(cm_model* model) { delete model; }

int cm_sector_partition(const cm_model* model, double t, cm_sector alpha,
                        cm_lognum* out) {
  if (int rc = require(model && out, "model and out must not be NULL")) return rc;
  return guarded([&] {
    *out = to_c(cm::sector_partition_uniform(model->lattice, t, to_sector(alpha)));
  });
}

int cm_sector_partition_pfaffian(const cm_model* model, double t,
                                 cm_sector alpha, cm_lognum* out) {
  if (int rc = require(model && out, "model and out must not be NULL")) return rc;
  return guarded([&] {
    *out = to_c(cm::kasteleyn_partition_t(model->lattice, t, to_sector(alpha)));
  });
}

int cm_combined_partition(const cm_model* model, double t, cm_lognum* out) {
  if (int rc = require(model && out, "model and out must not be NULL")) return rc;
  return guarded([&] {
    std::array<cm::LogNumber, 4> by_sector;
    for (cm::Sector s : cm::kAllSectors)
      by_sector[static_cast<int>(s)] =
          cm::sector_partition_uniform(model->lattice, t, s);
    *out = to_c(cm::combine_sectors(by_sector));
  });
}

int cm_brute_force_partition(const cm_model* model, double beta,
                             cm_lognum* out) {
  if (int rc = require(model && out, "model and out must not be NULL")) return rc;
  return guarded([&] {
    *out = to_c(cm::brute_force_partition(model->lattice, model->spec, beta));
  });
}

int cm_strip_free_energy(const cm_model* model, int ell, double beta,
                         double tol, double* out) {
  if (int rc = require(model && out, "model and out must not be NULL")) return rc;
  return guarded([&] {
    *out = cm::strip_free_energy(ell, beta, model->spec, tol);
  });
}

int cm_locate_beta_c(const cm_model* model, int ell1, int ell2,
                     double beta_lo, double beta_hi, double* out) {
  if (int rc = require(model && out, "model and out must not be NULL")) return rc;
  return guarded([&] {
    *out = cm::locate_beta_c(model->spec, ell1, ell2, beta_lo, beta_hi);
  });
}

int cm_lemma1(const cm_model* model, double beta, int convention,
              int max_pairs, double* ratio, double* sumpos_margin,
              double* consistency_rel) {
  if (int rc = require(model && ratio && sumpos_margin && consistency_rel,
                       "model and all outputs must not be NULL"))
    return rc;
  return guarded([&] {
    if (convention < 0 || convention > 3)
      throw std::invalid_argument("convention must be in [0, 3]");
    if (max_pairs < 0)
      throw std::invalid_argument("max_pairs must be nonnegative");
    std::vector<cm::SitePair> pairs =
        model->spec.has_pairs() ? cm::interacting_pairs(model->lattice,
                                                        model->spec)
                                : std::vector<cm::SitePair>{};
    if (max_pairs > 0 && static_cast<int>(pairs.size()) > max_pairs)
      pairs.resize(max_pairs);
    const cm::Lemma1Report rep = cm::lemma1_check_pairs(
        model->lattice, model->spec.j(), model->spec.lambda(), pairs, beta,
        static_cast<cm::PathConvention>(convention));
    *ratio = rep.ratio;
    *sumpos_margin = rep.sumpos_margin;
    *consistency_rel = rep.consistency_rel;
  });
}

int cm_onsager_f_inf(double* out) {
  if (int rc = require(out != nullptr, "out must not be NULL")) return rc;
  return guarded([&] { *out = cm::onsager_f_inf(); });
}

int cm_delta_ell(int ell, double* out) {
  if (int rc = require(out != nullptr, "out must not be NULL")) return rc;
  return guarded([&] { *out = cm::delta_ell(ell); });
}

int cm_charge_at_width(int ell, double* out) {
  if (int rc = require(out != nullptr, "out must not be NULL")) return rc;
  return guarded([&] { *out = cm::c_from_delta(ell); });
}

int cm_charge_from_series(const int* ells, const double* f, int n, int order,
                          double* c_hat, double* spread) {
  if (int rc = require(ells && f && c_hat, "ells, f and c_hat must not be NULL"))
    return rc;
  return guarded([&] {
    std::vector<std::pair<int, double>> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(ells[i], f[i]);
    const cm::Extrapolation ex = cm::extrapolate_pairwise(pts, order);
    *c_hat = ex.value;
    if (spread) *spread = ex.spread;
  });
}

int cm_ratio_term(int ell, int big_l, double* out) {
  if (int rc = require(out != nullptr, "out must not be NULL")) return rc;
  return guarded([&] { *out = cm::ratio_term(ell, big_l); });
}

int cm_partition_unity_defect(int n_grid, double* out) {
  if (int rc = require(out != nullptr, "out must not be NULL")) return rc;
  return guarded([&] { *out = cm::partition_unity_defect(n_grid); });
}

int cm_rotation_unitarity_defect(double* out) {
  if (int rc = require(out != nullptr, "out must not be NULL")) return rc;
  return guarded([&] { *out = cm::rotation_unitarity_defect(); });
}

int cm_cli_run(int argc, const char* const* argv, int* exit_code) {
  if (int rc = require(argv != nullptr && exit_code != nullptr && argc >= 1,
                       "argv and exit_code must not be NULL, argc >= 1"))
    return rc;
  // The CLI maps its own exceptions to exit codes; nothing escapes.
  *exit_code = cm::cli_run(argc, argv);
  g_last_error.clear();
  return CM_OK;
}

const char* cm_last_error(void) { return g_last_error.c_str(); }

const char* cm_version(void) { return "1.0.0"; }

}  // extern "C"
