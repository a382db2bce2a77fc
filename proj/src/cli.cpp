#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "charge.hpp"
#include "config.hpp"
#include "lattice.hpp"
#include "lognumber.hpp"
#include "oracle.hpp"
#include "pfaffian.hpp"
#include "report.hpp"
#include "rg.hpp"
#include "sectors.hpp"
#include "strings.hpp"
#include "strip.hpp"
#include "suites.hpp"

namespace cm {
namespace {

[[noreturn]] void reject(const std::string& what) {
  throw std::invalid_argument(what);
}

// Key-by-key precedence: explicit flag, then config value, then fallback.
std::optional<std::string> run_get(const ExperimentConfig& cfg,
                                   const std::string& key) {
  const auto it = cfg.run.find(key);
  if (it == cfg.run.end()) return std::nullopt;
  return it->second;
}

void check_run_keys(const ExperimentConfig& cfg,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : cfg.run) {
    (void)value;
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known)
      reject("config: run key '" + key + "' is not in this subcommand's schema");
  }
}

double merge_double(const CLI::Option* opt, double flag_value,
                    const ExperimentConfig& cfg, const std::string& run_key,
                    double fallback) {
  if (opt->count()) return flag_value;
  if (const auto v = run_get(cfg, run_key)) return parse_double(*v);
  return fallback;
}

std::string merge_string(const CLI::Option* opt, const std::string& flag_value,
                         const ExperimentConfig& cfg,
                         const std::string& run_key,
                         const std::string& fallback) {
  if (opt->count()) return flag_value;
  if (const auto v = run_get(cfg, run_key)) return *v;
  return fallback;
}

int require_side(const CLI::Option* opt, int flag_value,
                 const std::optional<int>& cfg_value, const char* what) {
  if (opt->count()) return flag_value;
  if (cfg_value) return *cfg_value;
  reject(std::string(what) + " required (flag or [lattice] block)");
}

std::vector<int> require_ell_list(const CLI::Option* opt,
                                  const std::string& flag_value,
                                  const ExperimentConfig& cfg) {
  std::vector<int> ells;
  if (opt->count())
    ells = parse_int_list(flag_value);
  else
    ells = cfg.ell_list;
  if (ells.empty()) reject("ell list required (--ell-list or [lattice] ell_list)");
  return ells;
}

// Shared output selection; format must be one this subcommand can emit.
struct OutputOpts {
  std::string format;
  std::string path;
};

OutputOpts resolve_output(const CLI::Option* fmt_opt,
                          const std::string& fmt_flag,
                          const CLI::Option* path_opt,
                          const std::string& path_flag,
                          const ExperimentConfig& cfg,
                          const std::string& default_format,
                          std::initializer_list<const char*> allowed) {
  OutputOpts out;
  out.format = fmt_opt->count() ? fmt_flag
                                : (cfg.format.empty() ? default_format : cfg.format);
  out.path = path_opt->count() ? path_flag : cfg.path;
  bool ok = false;
  for (const char* a : allowed) ok = ok || out.format == a;
  if (!ok) reject("this subcommand cannot emit format '" + out.format + "'");
  return out;
}

InteractionSpec build_spec(double j, double lambda,
                           const std::map<int, double>& shells) {
  if (lambda > 0.0 && shells.empty())
    reject("lambda > 0 requires a nonempty v_shells list");
  return InteractionSpec(j, lambda, lambda > 0.0 ? shells
                                                 : std::map<int, double>{});
}

std::vector<double> read_couplings_csv(const std::string& path, int n_bonds) {
  std::ifstream in(path);
  if (!in) reject("cannot open couplings file '" + path + "'");
  std::vector<double> t_bonds(n_bonds,
                              std::numeric_limits<double>::quiet_NaN());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (lineno == 1 && line.find("bond_index") != std::string::npos) continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos)
      reject("couplings line " + std::to_string(lineno) +
             ": expected bond_index,t_b");
    const int idx = parse_int(line.substr(0, comma));
    const double v = parse_double(line.substr(comma + 1));
    if (idx < 0 || idx >= n_bonds)
      reject("couplings line " + std::to_string(lineno) +
             ": bond index out of range");
    if (!std::isnan(t_bonds[idx]))
      reject("couplings line " + std::to_string(lineno) + ": duplicate bond");
    t_bonds[idx] = v;
  }
  for (int b = 0; b < n_bonds; ++b)
    if (std::isnan(t_bonds[b]))
      reject("couplings file misses bond " + std::to_string(b));
  return t_bonds;
}

std::vector<std::string> split_checks(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// --- exact ------------------------------------------------------------------

struct ExactOpts {
  std::string config;
  int ell = 0, big_l = 0;
  double t = 0.0, beta = 0.0, j = 1.0;
  std::string sector = "combined";
  std::string form = "product";
  std::string format, path;
  CLI::Option *o_ell = nullptr, *o_big_l = nullptr, *o_t = nullptr,
              *o_beta = nullptr, *o_j = nullptr, *o_sector = nullptr,
              *o_form = nullptr, *o_format = nullptr, *o_path = nullptr;
};

int run_exact(const ExactOpts& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) cfg = load_config_file(a.config);
  check_run_keys(cfg, {"t", "beta", "sector", "form"});

  const int ell = require_side(a.o_ell, a.ell, cfg.ell, "ell");
  const int big_l = require_side(a.o_big_l, a.big_l, cfg.big_l, "L");
  const TorusLattice lat(ell, big_l);

  const double j = a.o_j->count() ? a.j : cfg.j;
  const bool has_t = a.o_t->count() || run_get(cfg, "t").has_value();
  const bool has_beta = a.o_beta->count() || run_get(cfg, "beta").has_value();
  if (has_t && has_beta) reject("give either --t or --beta, not both");
  double t = kCriticalT;
  if (has_t) t = merge_double(a.o_t, a.t, cfg, "t", kCriticalT);
  if (has_beta) t = std::tanh(merge_double(a.o_beta, a.beta, cfg, "beta", 0.0) * j);
  if (!(t > 0.0 && t < 1.0)) reject("coupling t must lie in (0, 1)");

  const std::string sector =
      merge_string(a.o_sector, a.sector, cfg, "sector", "combined");
  const std::string form = merge_string(a.o_form, a.form, cfg, "form", "product");
  if (form != "product" && form != "ff" && form != "pfaffian")
    reject("form must be product, ff or pfaffian");
  if (form == "ff" && t != kCriticalT)
    reject("the cosh/sinh closed form is defined at the critical coupling only");

  auto eval = [&](Sector s) {
    if (form == "product") return sector_partition_uniform(lat, t, s);
    if (form == "ff") return critical_sector_ff(lat, s);
    return kasteleyn_partition_t(lat, t, s);
  };
  LogNumber z;
  if (sector == "combined") {
    std::array<LogNumber, 4> by_sector;
    for (Sector s : kAllSectors) by_sector[static_cast<int>(s)] = eval(s);
    z = combine_sectors(by_sector);
  } else {
    z = eval(sector_from_name(sector));
  }

  const OutputOpts out = resolve_output(a.o_format, a.format, a.o_path, a.path,
                                        cfg, "json", {"json"});
  JsonObject rep = make_report();
  rep.put("ell", ell)
      .put("L", big_l)
      .put("t", t)
      .put("sector", sector)
      .put("form", form)
      .put("sign", z.sign())
      .put("log_abs", z.log_abs())
      .put("log10_abs", z.log10_abs());
  write_output(out.path, rep.str() + "\n");
  return 0;
}

// --- oracle -----------------------------------------------------------------

struct OracleOpts {
  std::string config;
  int ell = 0, big_l = 0;
  double t = 0.0;
  std::string couplings_file;
  std::string checkname;
  std::string format, path;
  CLI::Option *o_ell = nullptr, *o_big_l = nullptr, *o_t = nullptr,
              *o_file = nullptr, *o_check = nullptr, *o_format = nullptr,
              *o_path = nullptr;
};

int run_oracle(const OracleOpts& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) cfg = load_config_file(a.config);
  check_run_keys(cfg, {"t", "check", "couplings_file"});

  const int ell = require_side(a.o_ell, a.ell, cfg.ell, "ell");
  const int big_l = require_side(a.o_big_l, a.big_l, cfg.big_l, "L");
  const TorusLattice lat(ell, big_l);
  if (lat.n_sites() > 20)
    reject("enumeration oracle is limited to ell*L <= 20 sites");

  const std::string checkname =
      merge_string(a.o_check, a.checkname, cfg, "check", "");
  if (checkname.empty()) reject("--check required");
  const std::string file =
      merge_string(a.o_file, a.couplings_file, cfg, "couplings_file", "");
  const bool has_file = !file.empty();
  const double t = merge_double(a.o_t, a.t, cfg, "t", kCriticalT);
  if (a.o_t->count() && has_file)
    reject("give either --t or --couplings-file, not both");
  if (!(t > 0.0 && t < 1.0)) reject("coupling t must lie in (0, 1)");

  const OutputOpts out = resolve_output(a.o_format, a.format, a.o_path, a.path,
                                        cfg, "json", {"json"});
  JsonObject rep = make_report();
  rep.put("ell", ell).put("L", big_l).put("check", checkname);

  if (checkname == "signs") {
    std::vector<double> t_bonds =
        has_file ? read_couplings_csv(file, lat.n_bonds())
                 : std::vector<double>(lat.n_bonds(), t);
    const double residual = sign_table_residual(lat, t_bonds);
    rep.put("residual", residual).put("pass", residual < 1e-9);
  } else if (checkname == "combine") {
    if (has_file) reject("check 'combine' needs a uniform coupling --t");
    std::array<LogNumber, 4> by_sector;
    for (Sector s : kAllSectors)
      by_sector[static_cast<int>(s)] = sector_partition_enumerated(lat, t, s);
    const LogNumber combined = combine_sectors(by_sector);
    const LogNumber brute =
        brute_force_partition(lat, InteractionSpec(1.0, 0.0, {}), std::atanh(t));
    const double rel = std::abs(combined.sign() * brute.sign() *
                                    std::exp(combined.log_abs() - brute.log_abs()) -
                                1.0);
    rep.put("rel_dev", rel).put("pass", rel < 1e-10);
  } else if (checkname == "lemma1-free") {
    if (has_file) reject("check 'lemma1-free' needs a uniform coupling --t");
    const Lemma1Report l = lemma1_check(lat, InteractionSpec(1.0, 0.0, {}),
                                        std::atanh(t), PathConvention::kSplit);
    rep.put("ratio", l.ratio)
        .put("sumpos_margin", l.sumpos_margin)
        .put("consistency_rel", l.consistency_rel)
        .put("pass", l.ratio_ok && l.sumpos_ok && l.consistency_ok);
  } else {
    reject("check must be signs, combine or lemma1-free");
  }
  write_output(out.path, rep.str() + "\n");
  return 0;
}

// --- lemma1 -----------------------------------------------------------------

struct Lemma1Opts {
  std::string config;
  int ell = 0, big_l = 0;
  double j = 1.0, lambda = 0.0;
  int max_pairs = 0;
  std::string v_shells, beta_grid, convention = "split";
  std::string format, path;
  CLI::Option *o_ell = nullptr, *o_big_l = nullptr, *o_j = nullptr,
              *o_lambda = nullptr, *o_shells = nullptr, *o_grid = nullptr,
              *o_conv = nullptr, *o_max = nullptr, *o_format = nullptr,
              *o_path = nullptr;
};

PathConvention convention_from_name(const std::string& name) {
  if (name == "split") return PathConvention::kSplit;
  if (name == "first") return PathConvention::kFirst;
  if (name == "second") return PathConvention::kSecond;
  if (name == "last") return PathConvention::kLast;
  reject("convention must be split, first, second or last");
}

int run_lemma1(const Lemma1Opts& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) cfg = load_config_file(a.config);
  check_run_keys(cfg, {"beta_grid", "convention", "max_pairs"});

  const int ell = require_side(a.o_ell, a.ell, cfg.ell, "ell");
  const int big_l = require_side(a.o_big_l, a.big_l, cfg.big_l, "L");
  const TorusLattice lat(ell, big_l);
  const double j = a.o_j->count() ? a.j : cfg.j;
  const double lambda = a.o_lambda->count() ? a.lambda : cfg.lambda;
  const std::map<int, double> shells =
      a.o_shells->count() ? parse_v_shells(a.v_shells) : cfg.v_shells;
  const InteractionSpec spec = build_spec(j, lambda, shells);

  const std::string grid_text =
      merge_string(a.o_grid, a.beta_grid, cfg, "beta_grid", "");
  if (grid_text.empty()) reject("--beta-grid required");
  const std::vector<double> betas = parse_double_list(grid_text);
  const PathConvention conv = convention_from_name(
      merge_string(a.o_conv, a.convention, cfg, "convention", "split"));

  // The expansion enumerates 2^(2*pairs) string configurations under a
  // 16-slot budget; a full shell does not fit, so the sweep can be
  // restricted to the first max_pairs interacting pairs (site-major).
  const int max_pairs =
      a.o_max->count()
          ? a.max_pairs
          : parse_int(run_get(cfg, "max_pairs").value_or("0"));
  if (max_pairs < 0) reject("--max-pairs must be nonnegative");
  std::vector<SitePair> pairs = spec.has_pairs()
                                    ? interacting_pairs(lat, spec)
                                    : std::vector<SitePair>{};
  if (max_pairs > 0 && static_cast<int>(pairs.size()) > max_pairs)
    pairs.resize(max_pairs);

  const OutputOpts out = resolve_output(a.o_format, a.format, a.o_path, a.path,
                                        cfg, "csv", {"csv"});
  CsvTable table({"beta", "log_z", "log_z_mm", "log_z_mp", "log_z_pm", "ratio",
                  "sumpos_margin", "ratio_ok", "sumpos_ok", "consistency_ok"});
  for (double beta : betas) {
    if (!(beta > 0.0)) reject("beta grid entries must be positive");
    const Lemma1Report l =
        lemma1_check_pairs(lat, spec.j(), spec.lambda(), pairs, beta, conv);
    table.add_row({CsvTable::cell(beta), CsvTable::cell(l.z_brute.log_abs()),
                   CsvTable::cell(l.z_mm.log_abs()),
                   CsvTable::cell(l.z_mp.log_abs()),
                   CsvTable::cell(l.z_pm.log_abs()), CsvTable::cell(l.ratio),
                   CsvTable::cell(l.sumpos_margin),
                   l.ratio_ok ? "1" : "0", l.sumpos_ok ? "1" : "0",
                   l.consistency_ok ? "1" : "0"});
  }
  write_output(out.path, table.str());
  return 0;
}

// --- strip --------------------------------------------------------------------

struct StripOpts {
  std::string config;
  std::string ell_list;
  double beta = 0.0, j = 1.0, lambda = 0.0, tol = 1e-11;
  double beta_lo = 0.25, beta_hi = 0.55;
  bool auto_critical = false;
  std::string v_shells;
  std::string format, path;
  CLI::Option *o_list = nullptr, *o_beta = nullptr, *o_j = nullptr,
              *o_lambda = nullptr, *o_tol = nullptr, *o_shells = nullptr,
              *o_auto = nullptr, *o_lo = nullptr, *o_hi = nullptr,
              *o_format = nullptr, *o_path = nullptr;
};

int run_strip(const StripOpts& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) cfg = load_config_file(a.config);
  check_run_keys(cfg, {"beta", "auto_critical", "tol", "beta_lo", "beta_hi"});

  const std::vector<int> ells = require_ell_list(a.o_list, a.ell_list, cfg);
  const double j = a.o_j->count() ? a.j : cfg.j;
  const double lambda = a.o_lambda->count() ? a.lambda : cfg.lambda;
  const std::map<int, double> shells =
      a.o_shells->count() ? parse_v_shells(a.v_shells) : cfg.v_shells;
  const InteractionSpec spec = build_spec(j, lambda, shells);
  const double tol = merge_double(a.o_tol, a.tol, cfg, "tol", 1e-11);

  const bool auto_critical =
      a.o_auto->count() ? a.auto_critical
                        : run_get(cfg, "auto_critical").value_or("0") == "1";
  const bool has_beta = a.o_beta->count() || run_get(cfg, "beta").has_value();
  if (auto_critical == has_beta)
    reject("give exactly one of --beta and --auto-critical");

  double beta = 0.0;
  if (auto_critical) {
    if (ells.size() < 2) reject("--auto-critical needs at least two widths");
    const double lo = merge_double(a.o_lo, a.beta_lo, cfg, "beta_lo", 0.25);
    const double hi = merge_double(a.o_hi, a.beta_hi, cfg, "beta_hi", 0.55);
    if (ells.size() == 2) {
      beta = locate_beta_c(spec, ells[0], ells[1], lo, hi, 1e-8, tol);
    } else {
      beta = strip_charge_pipeline(spec, ells, lo, hi, 1, tol).beta_c;
    }
  } else {
    beta = merge_double(a.o_beta, a.beta, cfg, "beta", 0.0);
    if (!(beta > 0.0)) reject("beta must be positive");
  }

  const OutputOpts out = resolve_output(a.o_format, a.format, a.o_path, a.path,
                                        cfg, "csv", {"csv"});
  CsvTable table({"ell", "beta", "f", "xi", "iterations"});
  for (int ell : ells) {
    const TransferOperator op(ell, beta, spec);
    const SpectralData sd = dominant_pair(op, tol);
    table.add_row({CsvTable::cell(ell), CsvTable::cell(beta),
                   CsvTable::cell(sd.log_lambda1 / ell), CsvTable::cell(sd.xi),
                   CsvTable::cell(sd.iterations)});
  }
  write_output(out.path, table.str());
  return 0;
}

// --- charge ---------------------------------------------------------------------

struct ChargeOpts {
  std::string config;
  std::string mode = "analytic";
  std::string ell_list;
  double j = 1.0, lambda = 0.0, beta = 0.0;
  double beta_lo = 0.25, beta_hi = 0.55;
  bool auto_critical = false;
  int order = -1;
  std::string v_shells;
  std::string format, path;
  CLI::Option *o_mode = nullptr, *o_list = nullptr, *o_j = nullptr,
              *o_lambda = nullptr, *o_beta = nullptr, *o_auto = nullptr,
              *o_lo = nullptr, *o_hi = nullptr, *o_order = nullptr,
              *o_shells = nullptr, *o_format = nullptr, *o_path = nullptr;
};

int run_charge(const ChargeOpts& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) cfg = load_config_file(a.config);
  check_run_keys(cfg, {"mode", "beta", "auto_critical", "beta_lo", "beta_hi",
                       "extrapolation_order"});

  const std::string mode = merge_string(a.o_mode, a.mode, cfg, "mode", "analytic");
  if (mode != "analytic" && mode != "strip")
    reject("mode must be analytic or strip");
  const std::vector<int> ells = require_ell_list(a.o_list, a.ell_list, cfg);
  if (ells.size() < 2) reject("need at least two widths");
  int order = a.o_order->count()
                  ? a.order
                  : (run_get(cfg, "extrapolation_order")
                         ? parse_int(*run_get(cfg, "extrapolation_order"))
                         : (mode == "analytic" ? 2 : 1));
  if (order < 0) reject("extrapolation order must be nonnegative");

  const OutputOpts out = resolve_output(a.o_format, a.format, a.o_path, a.path,
                                        cfg, "csv", {"csv", "json"});
  CsvTable table({"ell", "f_or_delta", "c_pairwise", "c_extrapolated"});

  double c_hat = 0.0, spread = 0.0, beta_used = 0.0;
  std::vector<double> col_value, col_charge;
  if (mode == "analytic") {
    const double lambda = a.o_lambda->count() ? a.lambda : cfg.lambda;
    if (lambda != 0.0)
      reject("analytic mode is the unperturbed model; use --mode strip");
    std::vector<std::pair<int, double>> pts;
    for (int ell : ells) {
      col_value.push_back(delta_ell(ell));
      col_charge.push_back(c_from_delta(ell));
      pts.emplace_back(ell, col_charge.back());
    }
    order = std::min<int>(order, static_cast<int>(pts.size()) - 2);
    const Extrapolation ex = extrapolate_sequence(pts, order);
    c_hat = ex.value;
    spread = ex.spread;
    beta_used = critical_beta0();
  } else {
    const double j = a.o_j->count() ? a.j : cfg.j;
    const double lambda = a.o_lambda->count() ? a.lambda : cfg.lambda;
    const std::map<int, double> shells =
        a.o_shells->count() ? parse_v_shells(a.v_shells) : cfg.v_shells;
    const InteractionSpec spec = build_spec(j, lambda, shells);
    const bool auto_critical =
        a.o_auto->count() ? a.auto_critical
                          : run_get(cfg, "auto_critical").value_or("0") == "1";
    const bool has_beta = a.o_beta->count() || run_get(cfg, "beta").has_value();
    if (auto_critical == has_beta)
      reject("give exactly one of --beta and --auto-critical");
    StripChargeResult res;
    if (auto_critical) {
      const double lo = merge_double(a.o_lo, a.beta_lo, cfg, "beta_lo", 0.25);
      const double hi = merge_double(a.o_hi, a.beta_hi, cfg, "beta_hi", 0.55);
      if (ells.size() == 2) {
        const double beta = locate_beta_c(spec, ells[0], ells[1], lo, hi);
        res = strip_charge_at_beta(spec, ells, beta, order);
        res.beta_c = beta;
      } else {
        res = strip_charge_pipeline(spec, ells, lo, hi, order);
      }
      beta_used = res.beta_c;
    } else {
      beta_used = merge_double(a.o_beta, a.beta, cfg, "beta", 0.0);
      if (!(beta_used > 0.0)) reject("beta must be positive");
      res = strip_charge_at_beta(spec, ells, beta_used, order);
    }
    for (const auto& [ell, f] : res.f_series) {
      (void)ell;
      col_value.push_back(f);
    }
    col_charge.assign(ells.size(), std::numeric_limits<double>::quiet_NaN());
    for (size_t i = 0; i < res.c_pairs.size(); ++i)
      col_charge[i + 1] = res.c_pairs[i];
    c_hat = res.c_hat;
    spread = res.spread;
  }

  for (size_t i = 0; i < ells.size(); ++i)
    table.add_row({CsvTable::cell(ells[i]), CsvTable::cell(col_value[i]),
                   CsvTable::cell(col_charge[i]), CsvTable::cell(c_hat)});

  JsonObject summary = make_report();
  summary.put("mode", mode)
      .put("extrapolation_order", order)
      .put("c_hat", c_hat)
      .put("spread", spread)
      .put("beta_c_used", beta_used);

  if (out.format == "json") {
    JsonObject full = make_report();
    full.put("mode", mode)
        .put("extrapolation_order", order)
        .put_raw("ell", json_array(ells))
        .put_raw("f_or_delta", json_array(col_value))
        .put_raw("c_pairwise", json_array(col_charge))
        .put("c_hat", c_hat)
        .put("spread", spread)
        .put("beta_c_used", beta_used);
    write_output(out.path, full.str() + "\n");
  } else {
    write_output(out.path, table.str());
    // The summary always lands on stdout so pipelines can read the verdict
    // even when the table goes to a file.
    if (!out.path.empty()) std::cout << summary.str() << "\n";
  }
  return 0;
}

// --- rg-check ----------------------------------------------------------------------

struct RgOpts {
  std::string config;
  int ell = 64, big_l = 64;
  std::string h_range;
  std::string checks = "unity,decay,poisson,localization,rotation";
  std::string format, path;
  CLI::Option *o_ell = nullptr, *o_big_l = nullptr, *o_range = nullptr,
              *o_checks = nullptr, *o_format = nullptr, *o_path = nullptr;
};

int run_rg_check(const RgOpts& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) cfg = load_config_file(a.config);
  check_run_keys(cfg, {"h_range", "checks"});

  const int ell = a.o_ell->count() ? a.ell : cfg.ell.value_or(64);
  const int big_l = a.o_big_l->count() ? a.big_l : cfg.big_l.value_or(64);
  int h_lo = 1;  // sentinel: auto window
  const std::string range =
      merge_string(a.o_range, a.h_range, cfg, "h_range", "");
  if (!range.empty()) {
    const size_t colon = range.find(':');
    if (colon == std::string::npos) reject("--h-range must be lo:hi");
    h_lo = parse_int(range.substr(0, colon));
    const int h_hi = parse_int(range.substr(colon + 1));
    if (h_lo > h_hi || h_hi > 0 || h_lo < -20) reject("bad --h-range window");
  }

  std::set<std::string> wanted;
  for (const std::string& c : split_checks(
           merge_string(a.o_checks, a.checks, cfg, "checks",
                        "unity,decay,poisson,localization,rotation")))
    wanted.insert(c);
  const std::set<std::string> known = {"unity", "decay", "poisson",
                                       "localization", "rotation"};
  for (const std::string& c : wanted)
    if (!known.count(c)) reject("unknown check '" + c + "'");
  if (wanted.empty()) reject("empty check list");

  const OutputOpts out = resolve_output(a.o_format, a.format, a.o_path, a.path,
                                        cfg, "json", {"json"});
  JsonObject rep = make_report();
  rep.put("ell", ell).put("L", big_l);

  if (wanted.count("unity")) {
    JsonObject o;
    o.put("defect", partition_unity_defect(100));
    rep.put_raw("unity", o.str());
  }
  if (wanted.count("rotation")) {
    JsonObject o;
    o.put("unitarity_defect", rotation_unitarity_defect())
        .put("abs_det", std::abs(rotation_determinant()));
    rep.put_raw("rotation", o.str());
  }
  if (wanted.count("decay")) {
    const ScaleDecayReport d = propagator_decay_check(ell, big_l, 1.0, h_lo);
    JsonObject o;
    o.put_raw("scales", json_array(d.scales))
        .put_raw("sup_norms", json_array(d.sup_norms))
        .put("scale_slope", d.scale_slope)
        .put("scale_r2", d.scale_r2)
        .put("chi_slope", d.chi_slope)
        .put("chi_r2", d.chi_r2);
    rep.put_raw("decay", o.str());
  }
  if (wanted.count("poisson")) {
    const PoissonReport p = poisson_image_check(0, {16, 24, 32});
    JsonObject o;
    o.put_raw("ells", json_array(p.ells))
        .put_raw("defects", json_array(p.defects))
        .put("power", p.power);
    rep.put_raw("poisson", o.str());
  }
  if (wanted.count("localization")) {
    const LocalizationReport l = localization_quartic_check(ell, big_l);
    JsonObject o;
    o.put("g_slope", l.g_slope)
        .put("g_r2", l.g_r2)
        .put("d1_slope", l.d1_slope)
        .put("d1_r2", l.d1_r2)
        .put("d2_slope", l.d2_slope)
        .put("d2_r2", l.d2_r2);
    rep.put_raw("localization", o.str());
  }
  write_output(out.path, rep.str() + "\n");
  return 0;
}

// --- reproduce ----------------------------------------------------------------------

struct ReproduceOpts {
  std::string config;
  std::string suite;
  double lambda = -1.0;
  std::string path;
  CLI::Option *o_suite = nullptr, *o_lambda = nullptr, *o_path = nullptr;
};

int run_reproduce(const ReproduceOpts& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) cfg = load_config_file(a.config);
  check_run_keys(cfg, {"suite", "lambda"});

  const std::string suite = merge_string(a.o_suite, a.suite, cfg, "suite", "");
  if (suite.empty()) reject("--suite required (or 'all')");
  const bool has_lambda =
      a.o_lambda->count() || run_get(cfg, "lambda").has_value();
  if (has_lambda && suite != "theorem1")
    reject("--lambda applies to the theorem1 suite only");

  std::vector<SuiteResult> results;
  if (suite == "all") {
    for (const std::string& name : suite_names())
      results.push_back(run_suite(name));
  } else if (has_lambda) {
    const double lambda =
        merge_double(a.o_lambda, a.lambda, cfg, "lambda", 0.0);
    results.push_back(run_theorem1_single(lambda));
  } else {
    results.push_back(run_suite(suite));
  }

  std::string text;
  bool all_passed = true;
  for (const SuiteResult& r : results) {
    text += format_suite_result(r);
    all_passed = all_passed && r.passed;
  }
  const std::string path = a.o_path->count() ? a.path : cfg.path;
  write_output(path, text);
  if (!path.empty()) std::cout << (all_passed ? "PASS\n" : "FAIL\n");
  return all_passed ? 0 : 3;
}

}  // namespace

int cli_run(int argc, const char* const* argv) {
  CLI::App app{"Finite-size central charge laboratory for the planar "
               "pair-perturbed spin model"};
  app.require_subcommand(1);

  ExactOpts ex;
  {
    CLI::App* s = app.add_subcommand(
        "exact", "Sector values of the unperturbed torus partition function");
    s->add_option("--config", ex.config, "experiment config file");
    ex.o_ell = s->add_option("--ell", ex.ell, "horizontal side (even)");
    ex.o_big_l = s->add_option("--L", ex.big_l, "vertical side (even)");
    ex.o_t = s->add_option("--t", ex.t, "uniform coupling tanh(beta J)");
    ex.o_beta = s->add_option("--beta", ex.beta, "inverse temperature");
    ex.o_j = s->add_option("--J", ex.j, "bond strength (with --beta)");
    ex.o_sector =
        s->add_option("--sector", ex.sector, "mm|mp|pm|pp|combined");
    ex.o_form = s->add_option("--form", ex.form, "product|ff|pfaffian");
    ex.o_format = s->add_option("--format", ex.format, "json");
    ex.o_path = s->add_option("--output", ex.path, "output file (default stdout)");
  }

  OracleOpts orc;
  {
    CLI::App* s = app.add_subcommand(
        "oracle", "Cycle-space enumeration cross-checks (small tori)");
    s->add_option("--config", orc.config, "experiment config file");
    orc.o_ell = s->add_option("--ell", orc.ell, "horizontal side (even)");
    orc.o_big_l = s->add_option("--L", orc.big_l, "vertical side (even)");
    orc.o_t = s->add_option("--t", orc.t, "uniform coupling");
    orc.o_file = s->add_option("--couplings-file", orc.couplings_file,
                               "CSV bond_index,t_b covering every bond");
    orc.o_check =
        s->add_option("--check", orc.checkname, "signs|combine|lemma1-free");
    orc.o_format = s->add_option("--format", orc.format, "json");
    orc.o_path = s->add_option("--output", orc.path, "output file");
  }

  Lemma1Opts lm;
  {
    CLI::App* s = app.add_subcommand(
        "lemma1", "Sector inequality sweep over an inverse-temperature grid");
    s->add_option("--config", lm.config, "experiment config file");
    lm.o_ell = s->add_option("--ell", lm.ell, "horizontal side (even)");
    lm.o_big_l = s->add_option("--L", lm.big_l, "vertical side (even)");
    lm.o_j = s->add_option("--J", lm.j, "bond strength");
    lm.o_lambda = s->add_option("--lambda", lm.lambda, "pair coupling");
    lm.o_shells = s->add_option("--v-shells", lm.v_shells,
                                "shell list r2:v,r2:v");
    lm.o_grid = s->add_option("--beta-grid", lm.beta_grid,
                              "comma-separated beta values");
    lm.o_max = s->add_option("--max-pairs", lm.max_pairs,
                             "restrict to the first N interacting pairs "
                             "(0 = all)");
    lm.o_conv = s->add_option("--convention", lm.convention,
                              "string path convention split|first|second|last");
    lm.o_format = s->add_option("--format", lm.format, "csv");
    lm.o_path = s->add_option("--output", lm.path, "output file");
  }

  StripOpts st;
  {
    CLI::App* s = app.add_subcommand(
        "strip", "Transfer-operator free energy and correlation length");
    s->add_option("--config", st.config, "experiment config file");
    st.o_list = s->add_option("--ell-list", st.ell_list, "widths, e.g. 8,10,12");
    st.o_beta = s->add_option("--beta", st.beta, "inverse temperature");
    st.o_auto = s->add_flag("--auto-critical", st.auto_critical,
                            "locate beta_c from width crossings first");
    st.o_lo = s->add_option("--beta-lo", st.beta_lo, "crossing bracket low");
    st.o_hi = s->add_option("--beta-hi", st.beta_hi, "crossing bracket high");
    st.o_j = s->add_option("--J", st.j, "bond strength");
    st.o_lambda = s->add_option("--lambda", st.lambda, "pair coupling");
    st.o_shells = s->add_option("--v-shells", st.v_shells, "shell list r2:v");
    st.o_tol = s->add_option("--tol", st.tol, "power-iteration tolerance");
    st.o_format = s->add_option("--format", st.format, "csv");
    st.o_path = s->add_option("--output", st.path, "output file");
  }

  ChargeOpts ch;
  {
    CLI::App* s = app.add_subcommand(
        "charge", "Central charge from finite-size corrections");
    s->add_option("--config", ch.config, "experiment config file");
    ch.o_mode = s->add_option("--mode", ch.mode, "analytic|strip");
    ch.o_list = s->add_option("--ell-list", ch.ell_list, "widths");
    ch.o_j = s->add_option("--J", ch.j, "bond strength");
    ch.o_lambda = s->add_option("--lambda", ch.lambda, "pair coupling");
    ch.o_shells = s->add_option("--v-shells", ch.v_shells, "shell list r2:v");
    ch.o_beta = s->add_option("--beta", ch.beta, "fixed beta (strip mode)");
    ch.o_auto = s->add_flag("--auto-critical", ch.auto_critical,
                            "locate beta_c first (strip mode)");
    ch.o_lo = s->add_option("--beta-lo", ch.beta_lo, "crossing bracket low");
    ch.o_hi = s->add_option("--beta-hi", ch.beta_hi, "crossing bracket high");
    ch.o_order = s->add_option("--extrapolation-order", ch.order,
                               "Neville depth (default 2 analytic, 1 strip)");
    ch.o_format = s->add_option("--format", ch.format, "csv|json");
    ch.o_path = s->add_option("--output", ch.path, "output file");
  }

  RgOpts rg;
  {
    CLI::App* s = app.add_subcommand(
        "rg-check", "Momentum-space toolkit diagnostics");
    s->add_option("--config", rg.config, "experiment config file");
    rg.o_ell = s->add_option("--ell", rg.ell, "horizontal side (default 64)");
    rg.o_big_l = s->add_option("--L", rg.big_l, "vertical side (default 64)");
    rg.o_range = s->add_option("--h-range", rg.h_range,
                               "scale window lo:hi for the decay sweep");
    rg.o_checks = s->add_option(
        "--checks", rg.checks, "subset of unity,decay,poisson,localization,rotation");
    rg.o_format = s->add_option("--format", rg.format, "json");
    rg.o_path = s->add_option("--output", rg.path, "output file");
  }

  ReproduceOpts rp;
  {
    CLI::App* s = app.add_subcommand(
        "reproduce", "Run a named verification suite (or 'all')");
    s->add_option("--config", rp.config, "experiment config file");
    rp.o_suite = s->add_option("--suite", rp.suite, "suite name or 'all'");
    rp.o_lambda = s->add_option("--lambda", rp.lambda,
                                "theorem1 only: run a single coupling");
    rp.o_path = s->add_option("--output", rp.path, "write the report here");
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand("exact")) return run_exact(ex);
    if (app.got_subcommand("oracle")) return run_oracle(orc);
    if (app.got_subcommand("lemma1")) return run_lemma1(lm);
    if (app.got_subcommand("strip")) return run_strip(st);
    if (app.got_subcommand("charge")) return run_charge(ch);
    if (app.got_subcommand("rg-check")) return run_rg_check(rg);
    if (app.got_subcommand("reproduce")) return run_reproduce(rp);
    reject("no subcommand given");
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace cm
