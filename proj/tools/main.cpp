#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "fwerlab/cli.hpp"

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FWERLAB_SEED")) {
    char* end = nullptr;
    const std::uint64_t v = std::strtoull(env, &end, 10);
    if (end != env) {
      return v;
    }
  }
  return 42;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fwerlab;

  CLI::App app{
      "fwerlab: familywise error rates of the Bonferroni rule under "
      "correlated Gaussian models (closed forms, quadrature, Monte Carlo)"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.seed = default_seed();
  std::string sampler;
  std::string format = "table";
  std::string out_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--alpha", cfg.alpha, "target FWER level in (0,1)");
    sub->add_option("--reps", cfg.mc_replications,
                    "Monte Carlo replications (default 1e6)");
    sub->add_option("--seed", cfg.seed,
                    "RNG seed; overrides FWERLAB_SEED, default 42");
    sub->add_option("--sampler", sampler, "max sampler")
        ->check(CLI::IsMember({"direct", "inverse"}));
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json", "table"}));
    sub->add_option("--out", out_path, "write the report to PATH");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
  };

  auto* t1 = app.add_subcommand(
      "table1", "grid of FWER estimates, rows rho and columns n");
  t1->add_option("--ns,--n", cfg.ns, "hypothesis counts")->delimiter(',');
  t1->add_option("--rhos,--rho", cfg.rhos, "correlations")->delimiter(',');
  add_common(t1);

  auto* ev = app.add_subcommand(
      "eval", "evaluate one (n, alpha, rho) by every method side by side");
  ev->add_option("--n,--ns", cfg.ns, "hypothesis count")
      ->delimiter(',')
      ->required();
  ev->add_option("--rho,--rhos", cfg.rhos, "correlation")
      ->delimiter(',')
      ->required();
  add_common(ev);

  auto* lim = app.add_subcommand(
      "limits", "cutoff-ratio / no-exceedance / FWER convergence table");
  lim->add_option("--ns,--n", cfg.ns, "ascending hypothesis counts")
      ->delimiter(',');
  lim->add_option("--rho,--rhos", cfg.rhos, "correlation in [0,1)")
      ->delimiter(',')
      ->required();
  add_common(lim);

  auto* sl = app.add_subcommand(
      "slepian", "equicorrelated upper bound check for a correlation matrix");
  sl->add_option("--matrix", cfg.matrix_path,
                 "correlation matrix file (.csv dense or .json)")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(sl);

  auto* kf = app.add_subcommand(
      "kfwer", "k-FWER estimate and its FWER(k*alpha) reference bound");
  kf->add_option("--n,--ns", cfg.ns, "hypothesis count")
      ->delimiter(',')
      ->required();
  kf->add_option("--rho,--rhos", cfg.rhos, "correlation")
      ->delimiter(',')
      ->required();
  std::int64_t k_value = 1;
  kf->add_option("--k", k_value, "false rejections tolerated")->required();
  add_common(kf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (t1->parsed()) cfg.command = Command::table1;
  if (ev->parsed()) cfg.command = Command::eval;
  if (lim->parsed()) cfg.command = Command::limits;
  if (sl->parsed()) cfg.command = Command::slepian;
  if (kf->parsed()) {
    cfg.command = Command::kfwer;
    cfg.k = k_value;
  }

  if (sampler == "direct") {
    cfg.sampler_override = MaxSampler::directMax;
  } else if (sampler == "inverse") {
    cfg.sampler_override = MaxSampler::inverseCdfMax;
  }
  if (format == "csv") {
    cfg.output_format = OutputFormat::csv;
  } else if (format == "json") {
    cfg.output_format = OutputFormat::json;
  } else {
    cfg.output_format = OutputFormat::humanTable;
  }
  if (!out_path.empty()) {
    cfg.output_path = out_path;
  }

  if (cfg.output_path.has_value()) {
    std::ofstream file(*cfg.output_path);
    if (!file) {
      std::cerr << "cannot open output file: " << *cfg.output_path << "\n";
      return kExitUsage;
    }
    return run_command(cfg, file, std::cerr);
  }
  return run_command(cfg, std::cout, std::cerr);
}
