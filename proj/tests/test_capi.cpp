#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chargemeter.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct ModelGuard {
  cm_model* m = nullptr;
  ~ModelGuard() { cm_model_destroy(m); }
};

double lognum_value(const cm_lognum& v) {
  return v.sign * std::exp(v.log_abs);
}

}  // namespace

TEST_CASE("model creation validates its arguments") {
  ModelGuard g;
  CHECK(cm_model_create(4, 4, 1.0, 0.0, nullptr, 0, &g.m) == CM_OK);
  CHECK(g.m != nullptr);

  cm_model* bad = nullptr;
  CHECK(cm_model_create(5, 4, 1.0, 0.0, nullptr, 0, &bad) == CM_EINVAL);
  CHECK(bad == nullptr);
  CHECK(std::strlen(cm_last_error()) > 0);

  CHECK(cm_model_create(4, 4, 1.0, 0.0, nullptr, 0, nullptr) == CM_EINVAL);

  // lambda > 0 with no shells carries no pairs; constructor accepts it.
  const cm_v_shell shell = {2, 1.0};
  ModelGuard g2;
  CHECK(cm_model_create(4, 4, 1.0, 0.3, &shell, 1, &g2.m) == CM_OK);
  cm_model_destroy(nullptr);  // must be a no-op
}

TEST_CASE("sector routes agree and recombine to the spin sum") {
  ModelGuard g;
  REQUIRE(cm_model_create(2, 2, 1.0, 0.0, nullptr, 0, &g.m) == CM_OK);
  const double beta = 0.44;
  const double t = std::tanh(beta);

  cm_lognum combined, brute;
  REQUIRE(cm_combined_partition(g.m, t, &combined) == CM_OK);
  REQUIRE(cm_brute_force_partition(g.m, beta, &brute) == CM_OK);
  CHECK(combined.sign == brute.sign);
  CHECK(combined.log_abs == doctest::Approx(brute.log_abs).epsilon(1e-12));
  // Closed form of the 2x2 spin sum.
  const double closed = 2.0 * std::exp(8.0 * beta) + 12.0 +
                        2.0 * std::exp(-8.0 * beta);
  CHECK(lognum_value(brute) == doctest::Approx(closed).epsilon(1e-12));

  for (int s = 0; s < 4; ++s) {
    cm_lognum prod, pf;
    REQUIRE(cm_sector_partition(g.m, t, static_cast<cm_sector>(s), &prod) ==
            CM_OK);
    REQUIRE(cm_sector_partition_pfaffian(g.m, t, static_cast<cm_sector>(s),
                                         &pf) == CM_OK);
    CHECK(prod.sign == pf.sign);
    if (prod.sign != 0)
      CHECK(prod.log_abs == doctest::Approx(pf.log_abs).epsilon(1e-11));
  }

  cm_lognum out;
  CHECK(cm_sector_partition(g.m, 1.5, CM_SECTOR_MM, &out) == CM_EINVAL);
  CHECK(cm_sector_partition(g.m, t, static_cast<cm_sector>(7), &out) ==
        CM_EINVAL);
  CHECK(cm_sector_partition(nullptr, t, CM_SECTOR_MM, &out) == CM_EINVAL);
}

TEST_CASE("strip free energy and crossing work through the C layer") {
  ModelGuard g;
  REQUIRE(cm_model_create(8, 8, 1.0, 0.0, nullptr, 0, &g.m) == CM_OK);
  const double beta_c0 = 0.5 * std::log(1.0 + std::sqrt(2.0));
  double f = 0.0;
  REQUIRE(cm_strip_free_energy(g.m, 8, beta_c0, 1e-11, &f) == CM_OK);
  double f_inf = 0.0;
  REQUIRE(cm_onsager_f_inf(&f_inf) == CM_OK);
  CHECK(f > f_inf);
  CHECK(f - f_inf < 0.02);

  double beta_c = 0.0;
  REQUIRE(cm_locate_beta_c(g.m, 6, 8, 0.35, 0.55, &beta_c) == CM_OK);
  CHECK(std::abs(beta_c - beta_c0) < 5e-3);
  CHECK(cm_locate_beta_c(g.m, 6, 8, 0.1, 0.2, &beta_c) == CM_EINVAL);
}

TEST_CASE("charge readings through the C layer") {
  double f_inf = 0.0;
  REQUIRE(cm_onsager_f_inf(&f_inf) == CM_OK);
  const double catalan = 0.915965594177219015054603514932384110774;
  CHECK(f_inf == doctest::Approx(0.5 * std::log(2.0) +
                                 2.0 * catalan / 3.14159265358979323846)
                     .epsilon(1e-10));

  double c256 = 0.0;
  REQUIRE(cm_charge_at_width(256, &c256) == CM_OK);
  CHECK(std::abs(c256 - 0.5) < 5e-3);
  double d = 0.0;
  REQUIRE(cm_delta_ell(64, &d) == CM_OK);
  CHECK(std::abs(d - 3.14159265358979323846 / 12.0) < 1e-3);
  CHECK(cm_delta_ell(7, &d) == CM_EINVAL);

  // Synthetic series with a known charge.
  const double pi = 3.14159265358979323846;
  const int ells[] = {8, 10, 12, 14};
  double f[4];
  for (int i = 0; i < 4; ++i) {
    const double x = 1.0 / (static_cast<double>(ells[i]) * ells[i]);
    f[i] = 0.92 + (pi * 0.5 / 6.0) * x + 2.0 * x * x;
  }
  double c_hat = 0.0, spread = 0.0;
  REQUIRE(cm_charge_from_series(ells, f, 4, 1, &c_hat, &spread) == CM_OK);
  CHECK(std::abs(c_hat - 0.5) < 1e-8);
  REQUIRE(cm_charge_from_series(ells, f, 4, 1, &c_hat, nullptr) == CM_OK);
  CHECK(cm_charge_from_series(nullptr, f, 4, 1, &c_hat, nullptr) ==
        CM_EINVAL);
  CHECK(cm_charge_from_series(ells, f, 2, 1, &c_hat, nullptr) == CM_EINVAL);
}

TEST_CASE("inequality diagnostics and rg scalars") {
  // The full diagonal shell on 4x4 has 32 pairs, beyond the 16-channel
  // string budget; max_pairs = 4 restricts the sweep to a feasible subset.
  ModelGuard g;
  const cm_v_shell shell = {2, 1.0};
  REQUIRE(cm_model_create(4, 4, 1.0, 0.1, &shell, 1, &g.m) == CM_OK);
  double ratio = 0.0, margin = 0.0, consistency = 1.0;
  REQUIRE(cm_lemma1(g.m, 0.44, 0, 4, &ratio, &margin, &consistency) == CM_OK);
  CHECK(ratio > 0.0);
  CHECK(ratio <= 1.0 + 1e-12);
  CHECK(margin > 0.0);
  CHECK(consistency < 1e-8);
  // Unrestricted run exceeds the channel budget and is rejected, not
  // silently truncated.
  CHECK(cm_lemma1(g.m, 0.44, 0, 0, &ratio, &margin, &consistency) ==
        CM_EINVAL);
  CHECK(cm_lemma1(g.m, 0.44, 5, 4, &ratio, &margin, &consistency) ==
        CM_EINVAL);
  CHECK(cm_lemma1(g.m, 0.44, 0, -1, &ratio, &margin, &consistency) ==
        CM_EINVAL);
  CHECK(cm_lemma1(g.m, -1.0, 0, 4, &ratio, &margin, &consistency) ==
        CM_EINVAL);

  double r = 0.0;
  REQUIRE(cm_ratio_term(8, 64, &r) == CM_OK);
  CHECK(r > 0.5);
  CHECK(r < 1.5);

  double defect = 1.0;
  REQUIRE(cm_partition_unity_defect(64, &defect) == CM_OK);
  CHECK(defect < 1e-12);
  double u = 1.0;
  REQUIRE(cm_rotation_unitarity_defect(&u) == CM_OK);
  CHECK(u <= 1e-15);
}

TEST_CASE("error text is cleared by a successful call") {
  double out = 0.0;
  CHECK(cm_delta_ell(3, &out) == CM_EINVAL);
  CHECK(std::strlen(cm_last_error()) > 0);
  CHECK(cm_delta_ell(8, &out) == CM_OK);
  CHECK(std::strlen(cm_last_error()) == 0);
}

TEST_CASE("embedded CLI runs through the shared library") {
  int code = -1;
  const char* help[] = {"chargemeter", "--help"};
  REQUIRE(cm_cli_run(2, help, &code) == CM_OK);
  CHECK(code == 0);

  const char* bad[] = {"chargemeter", "--no-such-flag"};
  REQUIRE(cm_cli_run(2, bad, &code) == CM_OK);
  CHECK(code == 2);

  const std::string path = "capi_cli_out.json";
  const char* exact[] = {"chargemeter",       "exact",    "--ell=2",
                         "--L=2",             "--sector", "combined",
                         "--output",          path.c_str()};
  REQUIRE(cm_cli_run(8, exact, &code) == CM_OK);
  CHECK(code == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("\"schema_version\":\"1\"") != std::string::npos);
  CHECK(ss.str().find("\"sector\":\"combined\"") != std::string::npos);
  std::remove(path.c_str());

  CHECK(cm_cli_run(2, nullptr, &code) == CM_EINVAL);
  CHECK(cm_cli_run(2, help, nullptr) == CM_EINVAL);
}

TEST_CASE("version string is set") {
  CHECK(std::strlen(cm_version()) > 0);
}
