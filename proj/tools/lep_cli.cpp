#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lep/lep.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed, samples;
  std::optional<unsigned> workers;
  bool raw = false;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "flat key = value run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed (u64)");
  cmd->add_option("--workers", f.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--samples", f.samples, "samples per domain")->check(CLI::PositiveNumber);
  cmd->add_flag("--raw", f.raw, "observe the raw interface (no loop erasure)");
  cmd->add_option("--out", f.out, "output directory");
}

lep::RunConfig resolve(const CommonFlags& f) {
  lep::RunConfig c = f.config.empty() ? lep::RunConfig{} : lep::load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.samples) c.samples = *f.samples;
  if (f.workers) c.workers = *f.workers;
  if (f.raw) c.raw = true;
  if (f.out) c.out = *f.out;
  lep::validate_config(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loop-erased percolation explorer experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lep::kVersion);

  CommonFlags fh, pr, dim, orc, sle;
  auto* c_fh = app.add_subcommand("firsthit", "averaged first-hit cdfs and their distance matrix");
  auto* c_pr = app.add_subcommand("passright", "pass-right functions with SLE overlays");
  auto* c_dim = app.add_subcommand("dimension", "mean erased length against L and the scaling fit");
  auto* c_orc = app.add_subcommand("oracle", "exact enumeration against Monte Carlo on a tiny domain");
  auto* c_sle = app.add_subcommand("sle-curve", "tabulate the SLE pass-right formula");
  add_common(c_fh, fh);
  add_common(c_pr, pr);
  add_common(c_dim, dim);
  add_common(c_orc, orc);
  add_common(c_sle, sle);
  std::vector<double> kappas{8.0 / 3.0, 6.0};
  c_sle->add_option("--kappa", kappas, "kappa values in (0, 8)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_fh->parsed()) {
      const auto c = resolve(fh);
      auto res = lep::run_campaign(c, true, false);
      lep::write_campaign(c, res, std::cout);
    } else if (c_pr->parsed()) {
      const auto c = resolve(pr);
      auto res = lep::run_campaign(c, false, true);
      lep::write_campaign(c, res, std::cout);
    } else if (c_dim->parsed()) {
      const auto c = resolve(dim);
      auto res = lep::run_dimension(c);
      lep::write_dimension(c, res, std::cout);
    } else if (c_orc->parsed()) {
      const auto c = resolve(orc);
      const auto r = lep::run_oracle_config(c, std::cout);
      if (!r.pass()) {
        std::cerr << "oracle: FAIL (tv_raw " << r.tv_raw << ", tv_erased " << r.tv_erased << ")\n";
        return 1;
      }
    } else if (c_sle->parsed()) {
      const auto c = resolve(sle);
      lep::write_sle_curve(c, kappas, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "lep: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
