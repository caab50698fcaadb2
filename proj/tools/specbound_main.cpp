// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end. Every subcommand produces one report, written as
// JSON (default, or --out x.json) or as the flat CSV view (--out x.csv).
// Exit codes: 0 success, 2 a recorded invariant or certification check
// failed, 1 anything else (bad usage, unreadable input, degenerate math).

#include <exception>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specbound/harness.hpp"

namespace {

using specbound::ExperimentConfig;
using specbound::ExperimentReport;
using specbound::NoiseSpec;

// Option values that need validation or mapping after parsing.
struct RawOptions {
  std::string delimiter = ",";
  std::string noise = "gaussian";
  std::string out;
  std::vector<double> ratios;
  double epsilon = 0.0;
  double delta = 0.0;
  double sensitivity = 1.0;
  double energy_fraction = 0.0;
};

void add_input_options(CLI::App* cmd, ExperimentConfig* cfg, RawOptions* raw) {
  cmd->add_option("--input", cfg->input_csv,
                  "CSV of data rows; the study runs on their covariance");
  cmd->add_option("--synthetic", cfg->synthetic,
                  "synthetic spectrum: decay[:base=B,n=N], "
                  "steps[:n=N[,tok,...]], or census");
  cmd->add_option("--delimiter", raw->delimiter, "CSV field separator")
      ->check(CLI::Validator(
          [](std::string& s) {
            return s.size() == 1 ? std::string()
                                 : std::string("must be one character");
          },
          "CHAR"));
  cmd->add_flag("--header", cfg->header, "skip the first CSV line");
  cmd->add_flag("--normalize-rows", cfg->normalize_rows,
                "scale each data row to unit norm before centering");
}

void add_rank_options(CLI::App* cmd, ExperimentConfig* cfg) {
  cmd->add_option("--p", cfg->p, "approximation rank");
  cmd->add_option("--energy", cfg->energy,
                  "pick the smallest rank reaching this energy fraction");
}

void add_trial_options(CLI::App* cmd, ExperimentConfig* cfg,
                       RawOptions* raw) {
  cmd->add_option("--noise", raw->noise, "noise ensemble")
      ->check(CLI::IsMember({"gaussian", "rademacher"}));
  cmd->add_flag("--goe-diagonal", cfg->goe_diagonal,
                "double the diagonal variance of the Gaussian ensemble");
  cmd->add_option("--levels", cfg->levels, "number of noise scales")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--include-zero", cfg->include_zero,
                "prepend the exact zero-noise level");
  cmd->add_option("--trials", cfg->trials, "trials per noise scale")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg->seed, "root seed for all draws");
}

void add_out_option(CLI::App* cmd, RawOptions* raw) {
  cmd->add_option("--out", raw->out,
                  "output path ending in .json or .csv (default: JSON to "
                  "stdout)");
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void emit(const ExperimentReport& rep, const std::string& out) {
  if (out.empty()) {
    std::cout << rep.json.dump();
  } else if (ends_with(out, ".json")) {
    specbound::write_file(out, rep.json.dump());
  } else if (ends_with(out, ".csv")) {
    specbound::write_file(out, specbound::to_csv(rep.csv_rows));
  } else {
    throw std::invalid_argument("--out path must end in .json or .csv");
  }
}

void finalize_config(ExperimentConfig* cfg, const RawOptions& raw) {
  cfg->delimiter = raw.delimiter[0];
  cfg->noise_kind = raw.noise == "rademacher"
                        ? NoiseSpec::Kind::kRademacher
                        : NoiseSpec::Kind::kWignerGaussian;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Truncation error bounds for noisy symmetric matrices: empirical "
      "studies, quadrature certification, and private low-rank release"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  RawOptions raw;
  std::function<ExperimentReport()> runner;

  CLI::App* bounds = app.add_subcommand(
      "bounds-study", "compare truncation error bounds across noise scales");
  add_input_options(bounds, &cfg, &raw);
  add_rank_options(bounds, &cfg);
  add_trial_options(bounds, &cfg, &raw);
  add_out_option(bounds, &raw);
  bounds->callback([&] { runner = [&] { return run_bound_study(cfg); }; });

  CLI::App* metric = app.add_subcommand(
      "metric-study",
      "compare spectral, Frobenius, and residual-change distances");
  add_input_options(metric, &cfg, &raw);
  add_rank_options(metric, &cfg);
  add_trial_options(metric, &cfg, &raw);
  add_out_option(metric, &raw);
  metric->callback([&] { runner = [&] { return run_metric_study(cfg); }; });

  CLI::App* beyond = app.add_subcommand(
      "beyond-gap",
      "push noise through the gap condition and track bound quotients");
  add_input_options(beyond, &cfg, &raw);
  add_rank_options(beyond, &cfg);
  add_trial_options(beyond, &cfg, &raw);
  beyond
      ->add_option("--ratios", raw.ratios,
                   "noise-to-gap ratios (default 0.05..0.50)")
      ->delimiter(',');
  add_out_option(beyond, &raw);
  beyond->callback(
      [&] { runner = [&] { return run_beyond_gap(cfg, raw.ratios); }; });

  CLI::App* boot = app.add_subcommand(
      "bootstrap-suite",
      "certify the contour quadrature against its analytic caps");
  add_input_options(boot, &cfg, &raw);
  add_rank_options(boot, &cfg);
  boot->add_option("--seed", cfg.seed, "root seed for all draws");
  add_out_option(boot, &raw);
  boot->callback([&] { runner = [&] { return run_bootstrap_suite(cfg); }; });

  CLI::App* dp = app.add_subcommand(
      "dp-release",
      "release a private rank-p approximation with a utility certificate");
  add_input_options(dp, &cfg, &raw);
  add_rank_options(dp, &cfg);
  dp->add_option("--seed", cfg.seed, "seed for the noise draw");
  dp->add_option("--epsilon", raw.epsilon, "privacy budget")->required();
  dp->add_option("--delta", raw.delta, "privacy slack")->required();
  dp->add_option("--sensitivity", raw.sensitivity,
                 "spectral-norm sensitivity of the input");
  add_out_option(dp, &raw);
  dp->callback([&] {
    runner = [&] {
      const specbound::ExperimentInstance inst =
          specbound::resolve_instance(cfg);
      const specbound::DpReleaseResult result =
          dp_release(inst.matrix, inst.p, raw.epsilon, raw.delta,
                     raw.sensitivity, cfg.seed);
      return dp_release_report(result, cfg, raw.epsilon, raw.delta,
                               raw.sensitivity);
    };
  });

  CLI::App* rank = app.add_subcommand(
      "rank-select", "report the smallest rank reaching an energy fraction");
  add_input_options(rank, &cfg, &raw);
  rank->add_option("--energy", raw.energy_fraction,
                   "target energy fraction in (0, 1]")
      ->required();
  add_out_option(rank, &raw);
  rank->callback([&] {
    runner = [&] { return rank_select_report(cfg, raw.energy_fraction); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  finalize_config(&cfg, raw);

  try {
    const ExperimentReport rep = runner();
    emit(rep, raw.out);
    return rep.ok ? 0 : 2;
  } catch (const specbound::invariant_violation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
