#ifndef CHARGEMETER_H
#define CHARGEMETER_H

/* C interface of the charge-meter shared library.
 *
 * Every function returns CM_OK on success or an error code; results go
 * through out-parameters. cm_last_error() describes the most recent
 * failure on the calling thread. Partition function magnitudes are
 * returned in the log domain as {sign, log_abs} because the raw values
 * overflow double for moderate lattices.
 */

#ifdef __cplusplus
extern "C" {
#endif

enum {
  CM_OK = 0,
  CM_EINVAL = 2,  /* invalid argument or malformed input */
  CM_ENUMERIC = 3 /* numerical failure: non-convergence, cancellation */
};

typedef enum {
  CM_SECTOR_MM = 0, /* antiperiodic-antiperiodic */
  CM_SECTOR_MP = 1,
  CM_SECTOR_PM = 2,
  CM_SECTOR_PP = 3
} cm_sector;

typedef struct {
  int sign; /* -1, 0 or +1 */
  double log_abs;
} cm_lognum;

typedef struct {
  int r2;   /* squared displacement length of the shell */
  double v; /* shell coupling value */
} cm_v_shell;

/* Opaque torus + interaction description. */
typedef struct cm_model cm_model;

/* Builds a model on an even x even torus with nearest-neighbour strength
 * j and pair perturbation lambda * v over the given shells. shells may be
 * NULL when n_shells is 0. */
int cm_model_create(int ell, int big_l, double j, double lambda,
                    const cm_v_shell* shells, int n_shells, cm_model** out);
void cm_model_destroy(cm_model* model);

/* Unperturbed sector values at uniform coupling t = tanh(beta j):
 * momentum-product form and Pfaffian form. */
int cm_sector_partition(const cm_model* model, double t, cm_sector alpha,
                        cm_lognum* out);
int cm_sector_partition_pfaffian(const cm_model* model, double t,
                                 cm_sector alpha, cm_lognum* out);

/* Half combination (Zmm + Zmp + Zpm - Zpp) / 2 of the product-form
 * sectors. */
int cm_combined_partition(const cm_model* model, double t, cm_lognum* out);

/* Direct spin sum including the pair interaction (<= 24 sites). */
int cm_brute_force_partition(const cm_model* model, double beta,
                             cm_lognum* out);

/* Width-ell strip free energy density log(lambda_1)/ell of the model's
 * interaction at inverse temperature beta. */
int cm_strip_free_energy(const cm_model* model, int ell, double beta,
                         double tol, double* out);

/* Crossing of xi/ell between two strip widths inside [beta_lo, beta_hi]. */
int cm_locate_beta_c(const cm_model* model, int ell1, int ell2,
                     double beta_lo, double beta_hi, double* out);

/* Sector inequality diagnostics at one beta; convention picks the string
 * path assignment (0 split, 1 first, 2 second, 3 last). The string
 * expansion enumerates two channels per interacting pair and is capped at
 * 16 channel slots, so a full diagonal shell does not fit: max_pairs > 0
 * restricts the run to the first max_pairs interacting pairs (site-major
 * order), max_pairs = 0 keeps them all. */
int cm_lemma1(const cm_model* model, double beta, int convention,
              int max_pairs, double* ratio, double* sumpos_margin,
              double* consistency_rel);

/* Bulk critical free energy density of the square-lattice model. */
int cm_onsager_f_inf(double* out);

/* Finite-width excess delta(ell) and its charge reading (6/pi) delta. */
int cm_delta_ell(int ell, double* out);
int cm_charge_at_width(int ell, double* out);

/* Extrapolated charge from a strip free-energy series f(ells[i]):
 * consecutive-pair estimates combined by Neville extrapolation of the
 * given order. spread may be NULL. */
int cm_charge_from_series(const int* ells, const double* f, int n, int order,
                          double* c_hat, double* spread);

/* Torus ratio diagnostic R(ell, L); always in (1/2, 3/2). */
int cm_ratio_term(int ell, int big_l, double* out);

/* Momentum-space toolkit scalars. */
int cm_partition_unity_defect(int n_grid, double* out);
int cm_rotation_unitarity_defect(double* out);

/* Full command-line front end; argv[0] is the program name. The CLI's
 * process exit code (0 success, 2 validation, 3 numeric) is written to
 * exit_code. Returns CM_EINVAL only for NULL arguments. */
int cm_cli_run(int argc, const char* const* argv, int* exit_code);

/* Message for the last failing call on this thread; empty string when no
 * failure has occurred. The pointer stays valid until the next call. */
const char* cm_last_error(void);

const char* cm_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CHARGEMETER_H */
