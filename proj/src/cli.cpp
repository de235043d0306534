#include "fwerlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fwerlab/correlation.hpp"
#include "fwerlab/equicorr.hpp"
#include "fwerlab/gauss.hpp"

namespace fwerlab {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

const char* command_name(Command c) {
  switch (c) {
    case Command::table1: return "table1";
    case Command::eval: return "eval";
    case Command::limits: return "limits";
    case Command::slepian: return "slepian";
    case Command::kfwer: return "kfwer";
  }
  return "?";
}

const char* format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::humanTable: return "table";
  }
  return "?";
}

McConfig mc_config_from(const RunConfig& cfg) {
  McConfig mc;
  mc.replications = cfg.mc_replications;
  mc.seed = cfg.seed;
  mc.sampler = cfg.sampler_override.value_or(MaxSampler::inverseCdfMax);
  mc.threads = cfg.threads;
  return mc;
}

std::string mc_tag(const McConfig& mc) {
  return mc.sampler == MaxSampler::directMax ? "mc/direct" : "mc/inverse";
}

void emit(const RunConfig& cfg, const std::vector<ReportRow>& rows,
          const std::string& human, std::ostream& out) {
  switch (cfg.output_format) {
    case OutputFormat::csv:
      out << to_csv(rows);
      break;
    case OutputFormat::json:
      out << to_json_report(cfg, rows);
      break;
    case OutputFormat::humanTable:
      out << human;
      break;
  }
  out.flush();
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fmt_se(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2g", v);
  return buf;
}

int run_table1(const RunConfig& cfg_in, std::ostream& out, std::ostream& err) {
  RunConfig cfg = cfg_in;
  if (cfg.ns.empty()) {
    cfg.ns = {10000, 100000, 1000000, 10000000, 100000000};
  }
  if (cfg.rhos.empty()) {
    cfg.rhos = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  }
  const McConfig mc = mc_config_from(cfg);
  bool numeric_failure = false;

  const auto t_grid = Clock::now();
  const auto grid = table_one_run(cfg.alpha, cfg.ns, cfg.rhos, mc);
  const double grid_ms = ms_since(t_grid);
  std::int64_t mc_cells = 0;
  for (std::size_t r = 0; r < cfg.rhos.size(); ++r) {
    mc_cells += (cfg.rhos[r] > 0.0 && cfg.rhos[r] < 1.0)
                    ? static_cast<std::int64_t>(cfg.ns.size())
                    : 0;
  }
  const double per_cell_ms =
      mc_cells > 0 ? grid_ms / static_cast<double>(mc_cells) : 0.0;

  std::vector<ReportRow> rows;
  // quadrature and approximation grids rendered alongside in human mode
  std::vector<std::vector<std::string>> quad_cells(cfg.rhos.size());
  std::vector<std::vector<std::string>> approx_cells(cfg.rhos.size());

  for (std::size_t r = 0; r < cfg.rhos.size(); ++r) {
    const double rho = cfg.rhos[r];
    for (std::size_t c = 0; c < cfg.ns.size(); ++c) {
      const std::int64_t n = cfg.ns[c];
      const EstimateResult& cell = grid[r][c];
      ReportRow row;
      row.n = n;
      row.rho = rho;
      row.method = cell.method_tag;
      row.value = cell.estimate;
      row.uncertainty = cell.std_error;
      row.elapsed_ms = (cell.replications > 0) ? per_cell_ms : 0.0;
      rows.push_back(row);

      if (rho > 0.0 && rho < 1.0) {
        const auto t0 = Clock::now();
        try {
          const FwerValue q =
              fwer_quadrature(EquicorrProblem(n, cfg.alpha, rho), {});
          rows.push_back({n, rho, "quadrature", q.value, q.error_estimate,
                          ms_since(t0), ""});
          quad_cells[r].push_back(fmt6(q.value));
        } catch (const QuadratureConvergenceError& e) {
          rows.push_back({n, rho, "quadrature", e.best_estimate,
                          e.error_estimate, ms_since(t0),
                          "did not converge"});
          quad_cells[r].push_back("n/c");
          numeric_failure = true;
          err << "table1: quadrature did not converge at n=" << n
              << " rho=" << rho << "\n";
        }
      } else {
        quad_cells[r].push_back("-");
      }

      if (rho < 1.0) {
        const FwerValue a =
            fwer_asymptotic_approx(EquicorrProblem(n, cfg.alpha, rho));
        rows.push_back({n, rho, "approx", a.value, a.error_estimate, 0.0, ""});
        approx_cells[r].push_back(fmt6(a.value));
      } else {
        approx_cells[r].push_back("-");
      }
    }
  }

  std::ostringstream human;
  auto print_grid = [&](const std::string& title,
                        const std::function<std::string(std::size_t,
                                                        std::size_t)>& cell,
                        const std::function<std::string(std::size_t,
                                                        std::size_t)>& sub) {
    human << title << "\n";
    human << "rho\\n     ";
    for (const auto n : cfg.ns) {
      char buf[24];
      std::snprintf(buf, sizeof(buf), "%12lld", static_cast<long long>(n));
      human << buf;
    }
    human << "\n";
    for (std::size_t r = 0; r < cfg.rhos.size(); ++r) {
      char head[24];
      std::snprintf(head, sizeof(head), "%-9.2f", cfg.rhos[r]);
      human << head;
      for (std::size_t c = 0; c < cfg.ns.size(); ++c) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%12s", cell(r, c).c_str());
        human << buf;
      }
      human << "\n";
      if (sub) {
        bool any = false;
        std::ostringstream line;
        line << "         ";
        for (std::size_t c = 0; c < cfg.ns.size(); ++c) {
          const std::string s = sub(r, c);
          any = any || !s.empty();
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%12s", s.c_str());
          line << buf;
        }
        if (any) {
          human << line.str() << "\n";
        }
      }
    }
    human << "\n";
  };

  print_grid(
      "FWER estimates (alpha = " + fmt6(cfg.alpha) +
          "; closed form at rho in {0,1}, Monte Carlo elsewhere, SE beneath)",
      [&](std::size_t r, std::size_t c) {
        // exact cells carry the reference table's 8-decimal precision
        if (grid[r][c].replications == 0) {
          char buf[40];
          std::snprintf(buf, sizeof(buf), "%.8f", grid[r][c].estimate);
          return std::string(buf);
        }
        return fmt6(grid[r][c].estimate);
      },
      [&](std::size_t r, std::size_t c) {
        return grid[r][c].replications > 0
                   ? "(" + fmt_se(grid[r][c].std_error) + ")"
                   : std::string();
      });
  print_grid(
      "Deterministic quadrature of the exchangeable integral",
      [&](std::size_t r, std::size_t c) { return quad_cells[r][c]; }, nullptr);
  print_grid(
      "Large-n approximation 1 - exp(-alpha n^{-rho/(1-rho)})",
      [&](std::size_t r, std::size_t c) { return approx_cells[r][c]; },
      nullptr);

  emit(cfg, rows, human.str(), out);
  return numeric_failure ? kExitNumeric : kExitOk;
}

int run_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.ns.size() != 1 || cfg.rhos.size() != 1) {
    err << "eval: requires exactly one --n and one --rho\n";
    return kExitUsage;
  }
  const EquicorrProblem p(cfg.ns[0], cfg.alpha, cfg.rhos[0]);
  const McConfig mc = mc_config_from(cfg);
  std::vector<ReportRow> rows;

  const Cutoff c = bonferroni_cutoff(p);
  rows.push_back({p.n, p.rho, "cutoff", c.value, 0.0, 0.0, ""});

  {
    const auto t0 = Clock::now();
    const FwerValue v = fwer_equicorr(p, {});
    const char* tag = v.method == FwerMethod::closedForm ? "fwer/closed-form"
                                                         : "fwer/quadrature";
    const char* note =
        (p.rho == 0.0 || p.rho == 1.0) ? "closed form used" : "";
    rows.push_back(
        {p.n, p.rho, tag, v.value, v.error_estimate, ms_since(t0), note});
  }

  if (p.rho < 1.0) {
    const auto t0 = Clock::now();
    const EstimateResult est = estimate_fwer(p, mc);
    rows.push_back({p.n, p.rho, "fwer/" + mc_tag(mc), est.estimate,
                    est.std_error, ms_since(t0), ""});
  }

  if (p.rho < 1.0) {
    const FwerValue a = fwer_asymptotic_approx(p);
    rows.push_back({p.n, p.rho, "approx", a.value, a.error_estimate, 0.0,
                    "unquantified accuracy"});
  }

  rows.push_back({p.n, p.rho, "bound/alpha-linear",
                  cfg.alpha * (1.0 - p.rho), 0.0, 0.0, ""});

  std::ostringstream human;
  human << "n = " << p.n << ", alpha = " << cfg.alpha << ", rho = " << p.rho
        << "\n\n"
        << to_human_table(rows);
  if (p.rho == 1.0) {
    human << "\nfwer/mc: skipped (degenerate)\n";
  }
  emit(cfg, rows, human.str(), out);
  return kExitOk;
}

int run_limits(const RunConfig& cfg_in, std::ostream& out, std::ostream& err) {
  RunConfig cfg = cfg_in;
  if (cfg.ns.empty()) {
    cfg.ns = {100, 1000, 10000, 100000, 1000000, 10000000, 100000000};
  }
  if (cfg.rhos.size() != 1) {
    err << "limits: requires exactly one --rho\n";
    return kExitUsage;
  }
  const double rho = cfg.rhos[0];
  if (!(rho >= 0.0) || rho >= 1.0) {
    err << "limits: rho must lie in [0,1)\n";
    return kExitUsage;
  }
  for (std::size_t i = 0; i + 1 < cfg.ns.size(); ++i) {
    if (cfg.ns[i] >= cfg.ns[i + 1]) {
      err << "limits: --ns must be strictly ascending\n";
      return kExitUsage;
    }
  }

  std::vector<ReportRow> rows;
  const char* fwer_note = rho == 0.0 ? "no decay (independence)" : "";
  for (const std::int64_t n : cfg.ns) {
    const EquicorrProblem p(n, cfg.alpha, rho);
    const double ratio =
        bonferroni_cutoff(p).value / sqrt_2logn_bound(n);
    rows.push_back({n, rho, "cutoff-ratio", ratio, 0.0, 0.0, ""});

    double power;
    if (rho == 0.0) {
      power = std::exp(log_cdf_pow(bonferroni_cutoff(p).value, n));
    } else {
      power = cdf_power_at_scaled_cutoff(cfg.alpha, rho, {n})[0].second;
    }
    rows.push_back({n, rho, "cdf-power", power, 0.0, 0.0, ""});

    const auto t0 = Clock::now();
    const FwerValue v = fwer_equicorr(p, {});
    rows.push_back(
        {n, rho, "fwer", v.value, v.error_estimate, ms_since(t0), fwer_note});

    const FwerValue a = fwer_asymptotic_approx(p);
    rows.push_back({n, rho, "approx", a.value, a.error_estimate, 0.0, ""});
  }

  std::ostringstream human;
  human << "convergence diagnostics at alpha = " << cfg.alpha
        << ", rho = " << rho << "\n";
  human << std::string(78, '-') << "\n";
  char head[120];
  std::snprintf(head, sizeof(head), "%12s %14s %16s %14s %14s\n", "n",
                "cutoff-ratio", "cdf-power", "fwer", "approx");
  human << head;
  for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
    char line[160];
    std::snprintf(line, sizeof(line), "%12lld %14.6f %16.10f %14.8f %14.3e\n",
                  static_cast<long long>(cfg.ns[i]),
                  rows[4 * i + 0].value, rows[4 * i + 1].value,
                  rows[4 * i + 2].value, rows[4 * i + 3].value);
    human << line;
  }
  if (rho == 0.0) {
    human << "note: no decay (independence); fwer stays near 1 - exp(-alpha)\n";
  }
  emit(cfg, rows, human.str(), out);
  return kExitOk;
}

int run_slepian(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.matrix_path.empty()) {
    err << "slepian: --matrix PATH is required\n";
    return kExitUsage;
  }
  CorrelationMatrix sigma = [&] {
    if (cfg.matrix_path.size() > 5 &&
        cfg.matrix_path.substr(cfg.matrix_path.size() - 5) == ".json") {
      return load_correlation_json(cfg.matrix_path);
    }
    return load_correlation_csv(cfg.matrix_path);
  }();

  const double delta = sigma.min_off_diag();
  if (!(delta > 0.0)) {
    err << "slepian: bound inapplicable, minimum off-diagonal correlation is "
        << delta << " (requires > 0)\n";
    return kExitInapplicable;
  }

  const std::int64_t n = sigma.size();
  const auto t0 = Clock::now();
  const FwerValue bound = slepian_upper_bound(sigma, cfg.alpha, {});
  const double bound_ms = ms_since(t0);

  const auto t1 = Clock::now();
  const EstimateResult est = estimate_fwer_general(sigma, cfg.alpha,
                                                   mc_config_from(cfg));
  const double mc_ms = ms_since(t1);

  const bool pass = est.estimate <= bound.value + 4.0 * est.std_error;
  std::vector<ReportRow> rows = {
      {n, delta, "min-off-diag", delta, 0.0, 0.0, ""},
      {n, delta, "equicorr-bound", bound.value, bound.error_estimate, bound_ms,
       ""},
      {n, delta, "mc/general", est.estimate, est.std_error, mc_ms, ""},
      {n, delta, "bound-check", pass ? 1.0 : 0.0, 0.0, 0.0,
       pass ? "PASS" : "FAIL"},
  };

  std::ostringstream human;
  human << "matrix: " << cfg.matrix_path << "  (n = " << n << ")\n";
  if (sigma.eigenvalues_clipped()) {
    human << "warning: input was numerically indefinite; tiny negative "
             "eigenvalues were clipped to zero\n";
    err << "slepian: clipped tiny negative eigenvalues of " << cfg.matrix_path
        << "\n";
  }
  human << "min off-diagonal delta = " << format_g12(delta) << "\n"
        << "equicorrelated upper bound FWER(n, alpha, delta) = "
        << fmt6(bound.value) << "\n"
        << "Monte Carlo estimate for the matrix = " << fmt6(est.estimate)
        << " (se " << fmt_se(est.std_error) << ")\n"
        << "estimate <= bound + 4 se: " << (pass ? "PASS" : "FAIL") << "\n";
  emit(cfg, rows, human.str(), out);
  return kExitOk;
}

int run_kfwer(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.k.has_value()) {
    err << "kfwer: --k is required\n";
    return kExitUsage;
  }
  if (cfg.ns.size() != 1 || cfg.rhos.size() != 1) {
    err << "kfwer: requires exactly one --n and one --rho\n";
    return kExitUsage;
  }
  const std::int64_t k = *cfg.k;
  const EquicorrProblem p(cfg.ns[0], cfg.alpha, cfg.rhos[0]);
  if (p.rho >= 1.0) {
    err << "kfwer: rho must lie in [0,1) for the Monte Carlo engine\n";
    return kExitUsage;
  }
  const Cutoff cb = bonferroni_cutoff(p);
  const Cutoff ck = kfwer_cutoff(p, k);  // throws if k*alpha >= 1

  McConfig mc = mc_config_from(cfg);
  mc.seed = derive_seed(cfg.seed, 0);
  const auto t0 = Clock::now();
  const EstimateResult kf = estimate_kfwer(p, k, mc);
  const double kf_ms = ms_since(t0);

  // Corollary-style reference: plain FWER at the inflated level k*alpha,
  // with an independent stream
  const EquicorrProblem p_star(p.n, static_cast<double>(k) * p.alpha, p.rho);
  McConfig mc2 = mc_config_from(cfg);
  mc2.seed = derive_seed(cfg.seed, 1);
  const auto t1 = Clock::now();
  const EstimateResult fw = estimate_fwer(p_star, mc2);
  const double fw_ms = ms_since(t1);

  const double combined_se =
      std::sqrt(kf.std_error * kf.std_error + fw.std_error * fw.std_error);
  const bool pass = kf.estimate <= fw.estimate + 4.0 * combined_se;

  std::vector<ReportRow> rows = {
      {p.n, p.rho, "cutoff/bonferroni", cb.value, 0.0, 0.0, ""},
      {p.n, p.rho, "cutoff/kfwer", ck.value, 0.0, 0.0, ""},
      {p.n, p.rho, "mc/kfwer", kf.estimate, kf.std_error, kf_ms, ""},
      {p.n, p.rho, "mc/fwer-at-k-alpha", fw.estimate, fw.std_error, fw_ms, ""},
      {p.n, p.rho, "bound-check", pass ? 1.0 : 0.0, 0.0, 0.0,
       pass ? "PASS" : "FAIL"},
  };

  std::ostringstream human;
  human << "n = " << p.n << ", alpha = " << p.alpha << ", rho = " << p.rho
        << ", k = " << k << "\n\n"
        << to_human_table(rows) << "\n"
        << "k-FWER <= FWER(k*alpha) + 4 combined se: "
        << (pass ? "PASS" : "FAIL") << "\n";
  emit(cfg, rows, human.str(), out);
  return kExitOk;
}

}  // namespace

std::string to_json_report(const RunConfig& cfg,
                           const std::vector<ReportRow>& rows) {
  nlohmann::json j;
  j["version"] = kVersion;
  nlohmann::json config;
  config["command"] = command_name(cfg.command);
  config["alpha"] = cfg.alpha;
  config["ns"] = cfg.ns;
  config["rhos"] = cfg.rhos;
  if (cfg.k.has_value()) {
    config["k"] = *cfg.k;
  }
  config["replications"] = cfg.mc_replications;
  config["seed"] = cfg.seed;
  if (cfg.sampler_override.has_value()) {
    config["sampler"] = *cfg.sampler_override == MaxSampler::directMax
                            ? "direct"
                            : "inverse";
  }
  config["format"] = format_name(cfg.output_format);
  if (cfg.output_path.has_value()) {
    config["out"] = *cfg.output_path;
  }
  if (!cfg.matrix_path.empty()) {
    config["matrix"] = cfg.matrix_path;
  }
  j["config"] = config;

  nlohmann::json jrows = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r;
    r["n"] = row.n;
    r["rho"] = row.rho;
    r["method"] = row.method;
    if (std::isfinite(row.value)) {
      r["value"] = row.value;
    } else {
      r["value"] = nullptr;
    }
    if (std::isfinite(row.uncertainty)) {
      r["uncertainty"] = row.uncertainty;
    } else {
      r["uncertainty"] = nullptr;
    }
    if (!row.note.empty()) {
      r["note"] = row.note;
    }
    jrows.push_back(std::move(r));
  }
  j["rows"] = jrows;
  return j.dump(2) + "\n";
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::table1: return run_table1(cfg, out, err);
      case Command::eval: return run_eval(cfg, out, err);
      case Command::limits: return run_limits(cfg, out, err);
      case Command::slepian: return run_slepian(cfg, out, err);
      case Command::kfwer: return run_kfwer(cfg, out, err);
    }
    err << "unknown command\n";
    return kExitUsage;
  } catch (const QuadratureConvergenceError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::domain_error& e) {
    err << "invalid arguments: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace fwerlab
