// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "specbound/harness.hpp"

using namespace specbound;

namespace {

ExperimentConfig steps_config() {
  ExperimentConfig cfg;
  cfg.synthetic = "steps:n=12";
  cfg.p = 1;
  cfg.trials = 3;
  cfg.levels = 4;
  cfg.seed = 2026;
  return cfg;
}

const CsvRow& find_row(const ExperimentReport& rep, double level,
                       const std::string& metric) {
  for (const CsvRow& r : rep.csv_rows) {
    if (r.level == level && r.metric == metric) return r;
  }
  throw std::runtime_error("missing csv row " + metric);
}

bool has_row(const ExperimentReport& rep, double level,
             const std::string& metric) {
  for (const CsvRow& r : rep.csv_rows) {
    if (r.level == level && r.metric == metric) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("instance resolution validates the input and rank choices") {
  ExperimentConfig cfg;
  cfg.synthetic = "census";
  cfg.energy = 0.99;
  const ExperimentInstance inst = resolve_instance(cfg);
  CHECK(inst.p == 10);
  REQUIRE(inst.selection.has_value());
  CHECK(inst.selection->achieved_fraction >= 0.99);

  cfg.energy.reset();
  cfg.p = 3;
  CHECK(resolve_instance(cfg).p == 3);

  ExperimentConfig bad = cfg;
  bad.input_csv = "also.csv";
  CHECK_THROWS_AS(resolve_instance(bad), std::invalid_argument);
  bad = cfg;
  bad.synthetic.clear();
  CHECK_THROWS_AS(resolve_instance(bad), std::invalid_argument);
  bad = cfg;
  bad.energy = 0.5;  // both p and energy
  CHECK_THROWS_AS(resolve_instance(bad), std::invalid_argument);
  bad = cfg;
  bad.p.reset();
  CHECK_THROWS_AS(resolve_instance(bad), std::invalid_argument);
  bad = cfg;
  bad.p = 69;  // p = n leaves no (p+1)-st eigenvalue
  CHECK_THROWS_AS(resolve_instance(bad), std::invalid_argument);
  bad.p = 0;
  CHECK_THROWS_AS(resolve_instance(bad), std::invalid_argument);
}

TEST_CASE("rotation of a rank-1 matrix separates the three metrics") {
  const SymMatrix a = SymMatrix::diagonal(Eigen::Vector2d(1, 0));
  const Spectrum sa = eig_sym(a);
  for (double theta : {0.1, 0.5, 1.0}) {
    Eigen::Matrix2d rot;
    rot << std::cos(theta), -std::sin(theta),
           std::sin(theta), std::cos(theta);
    const SymMatrix rotated(rot * a.mat() * rot.transpose());
    const MetricValues mv = metric_values(sa, eig_sym(rotated), 1);
    CHECK(mv.spectral ==
          doctest::Approx(std::abs(std::sin(theta))).epsilon(1e-12));
    CHECK(mv.frobenius ==
          doctest::Approx(std::sqrt(2.0) * std::abs(std::sin(theta)))
              .epsilon(1e-12));
    CHECK(mv.change_in_error <= 1e-12);
    // The rank cap is tight here: Frobenius = sqrt(2p) * spectral.
    CHECK(mv.frobenius ==
          doctest::Approx(std::sqrt(2.0) * mv.spectral).epsilon(1e-12));
  }
}

TEST_CASE("zero noise level reports exact zeros and the doubled residual") {
  ExperimentConfig cfg = steps_config();
  cfg.include_zero = true;
  cfg.levels = 1;
  const ExperimentReport rep = run_bound_study(cfg);
  CHECK(find_row(rep, 0.0, "actual").mean == 0.0);
  CHECK(find_row(rep, 0.0, "actual").std == 0.0);
  CHECK(find_row(rep, 0.0, "psd_gap").mean == 0.0);
  // steps:n=12 has sigma_2 = 108, so the baseline bound is exactly 216.
  CHECK(find_row(rep, 0.0, "eym").mean == 216.0);
  CHECK(find_row(rep, 0.0, "eym").std == 0.0);
  CHECK(find_row(rep, 1.0, "eym").mean > 216.0);
}

TEST_CASE("bound study emits stats and rates per level deterministically") {
  const ExperimentConfig cfg = steps_config();
  const ExperimentReport rep = run_bound_study(cfg);
  // PSD instance: six stat rows plus three rate rows per level.
  CHECK(rep.csv_rows.size() == 4 * 9);
  CHECK(rep.ok);

  // delta_p = 12; at scale 0.25 the gap condition holds comfortably, at
  // scale 1.0 it is far out of reach for n = 12 noise.
  CHECK(find_row(rep, 0.25, "gap_rate_psd").mean == 1.0);
  CHECK(find_row(rep, 1.0, "gap_rate_psd").mean == 0.0);
  CHECK(find_row(rep, 0.25, "actual").mean > 0.0);
  CHECK(find_row(rep, 0.25, "actual").mean <=
        find_row(rep, 0.25, "eym").mean);

  const ExperimentReport again = run_bound_study(cfg);
  CHECK(rep.json.dump() == again.json.dump());
  CHECK(to_csv(rep.csv_rows) == to_csv(again.csv_rows));

  ExperimentConfig other = cfg;
  other.seed = 1;
  CHECK(run_bound_study(other).json.dump() != rep.json.dump());

  const std::string dump = rep.json.dump();
  CHECK(dump.find("\"schema\": 1") != std::string::npos);
  CHECK(dump.find("\"command\": \"bounds-study\"") != std::string::npos);
}

TEST_CASE("bound study covers indefinite instances with cluster bounds") {
  ExperimentConfig cfg;
  cfg.synthetic = "steps:n=4,10n,n,-n,-10n";  // eigenvalues 40, 4, -4, -40
  cfg.p = 2;
  cfg.trials = 4;
  cfg.levels = 2;
  cfg.seed = 7;
  const ExperimentReport rep = run_bound_study(cfg);
  CHECK(has_row(rep, 0.5, "sym_gap"));
  CHECK(has_row(rep, 0.5, "sym_interaction"));
  CHECK_FALSE(has_row(rep, 0.5, "psd_gap"));
  CHECK_FALSE(has_row(rep, 0.5, "psd_interaction"));
  CHECK(find_row(rep, 0.5, "eym").mean > 0.0);
}

TEST_CASE("metric study aggregates the three truncation distances") {
  ExperimentConfig cfg;
  cfg.synthetic = "decay:base=0.8,n=10";
  cfg.p = 2;
  cfg.trials = 4;
  cfg.levels = 2;
  cfg.seed = 11;
  const ExperimentReport rep = run_metric_study(cfg);
  CHECK(rep.csv_rows.size() == 2 * 3);
  for (double level : {0.5, 1.0}) {
    CHECK(find_row(rep, level, "spectral").mean <=
          find_row(rep, level, "frobenius").mean);
    CHECK(find_row(rep, level, "change_in_error").mean >= 0.0);
  }
  const std::string dump = rep.json.dump();
  CHECK(dump.find("\"command\": \"metric-study\"") != std::string::npos);
}

TEST_CASE("beyond-gap calibrates noise to the gap and reports quotients") {
  ExperimentConfig cfg;
  cfg.synthetic = "steps:n=12";
  cfg.p = 1;
  cfg.trials = 20;
  cfg.seed = 31;
  const std::vector<double> grid = {0.05, 0.1, 0.2, 0.4};
  const ExperimentReport rep = run_beyond_gap(cfg, grid);

  // Small ratios sit inside the gap condition, large ones far outside.
  CHECK(find_row(rep, 0.05, "gap_rate_psd").mean == 1.0);
  CHECK(find_row(rep, 0.4, "gap_rate_psd").mean == 0.0);

  // The reported quotient recomputes exactly from the reported means.
  for (double ratio : grid) {
    const double ours = find_row(rep, ratio, "psd_gap").mean;
    const double classical = find_row(rep, ratio, "eym").mean;
    CHECK(find_row(rep, ratio, "our_over_classical").mean ==
          ours / classical);
    CHECK(find_row(rep, ratio, "our_over_classical").std == 0.0);
  }

  // The gap bound gains on the baseline as the noise grows.
  double prev = 0.0;
  for (double ratio : grid) {
    const double q = find_row(rep, ratio, "our_over_classical").mean;
    CHECK(q > prev);
    prev = q;
  }

  const ExperimentReport again = run_beyond_gap(cfg, grid);
  CHECK(rep.json.dump() == again.json.dump());

  ExperimentConfig indef = cfg;
  indef.synthetic = "steps:n=4,10n,n,-n,-10n";
  indef.p = 2;
  CHECK_THROWS_AS(run_beyond_gap(indef, grid), std::invalid_argument);
}

TEST_CASE("bootstrap suite passes its certification battery") {
  ExperimentConfig cfg;
  cfg.seed = 5;
  const ExperimentReport rep = run_bootstrap_suite(cfg);
  CHECK(rep.ok);
  for (int i = 0; i < 5; ++i) {
    CHECK(find_row(rep, double(i), "pass").mean == 1.0);
  }
  // The zero-noise case integrates roundoff only.
  CHECK(find_row(rep, 4.0, "perturbation_max").mean <= 1e-9);
  CHECK(find_row(rep, 4.0, "first_order_max").mean == 0.0);
  const std::string dump = rep.json.dump();
  CHECK(dump.find("\"all_pass\": true") != std::string::npos);

  ExperimentConfig with_input;
  with_input.synthetic = "steps:n=12";
  with_input.p = 1;
  with_input.seed = 5;
  const ExperimentReport single = run_bootstrap_suite(with_input);
  CHECK(single.ok);
  CHECK(find_row(single, 0.0, "pass").mean == 1.0);

  ExperimentConfig too_big;
  too_big.synthetic = "decay:base=0.9,n=40";
  too_big.p = 2;
  CHECK_THROWS_AS(run_bootstrap_suite(too_big), std::invalid_argument);
}

TEST_CASE("dp release is deterministic and certifies the gap condition") {
  const SymMatrix a = make_synthetic("steps:n=12");
  const DpReleaseResult r1 = dp_release(a, 1, 1e6, 1e-5, 1.0, 99);
  const DpReleaseResult r2 = dp_release(a, 1, 1e6, 1e-5, 1.0, 99);
  CHECK((r1.released.mat() - r2.released.mat()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r1.certificate.e_norm == r2.certificate.e_norm);

  // Near-zero noise: the release approaches the clean truncation and the
  // scaled gap condition holds easily (delta_p = 12).
  CHECK(r1.noise_sigma < 1e-4);
  REQUIRE(r1.certificate.actual_error.has_value());
  CHECK(*r1.certificate.actual_error <= 1e-3);
  REQUIRE(r1.certificate.dp_gap_ok.has_value());
  CHECK(*r1.certificate.dp_gap_ok);
  REQUIRE(r1.certificate.psd_gap.has_value());
  CHECK(*r1.certificate.actual_error <= *r1.certificate.psd_gap);

  // Strong privacy: sigma explodes and the certificate withholds the flag.
  const DpReleaseResult noisy = dp_release(a, 1, 1e-3, 1e-5, 1.0, 99);
  CHECK_FALSE(*noisy.certificate.dp_gap_ok);

  CHECK_THROWS_AS(dp_release(a, 1, -1.0, 1e-5, 1.0, 0),
                  std::invalid_argument);

  ExperimentConfig cfg;
  cfg.synthetic = "steps:n=12";
  cfg.p = 1;
  const ExperimentReport rep = dp_release_report(r1, cfg, 1e6, 1e-5, 1.0);
  CHECK(find_row(rep, 0.0, "dp_gap_ok").mean == 1.0);
  CHECK(rep.json.dump().find("\"command\": \"dp-release\"") !=
        std::string::npos);
}

TEST_CASE("rank-select report carries the selection") {
  ExperimentConfig cfg;
  cfg.synthetic = "census";
  const ExperimentReport rep = rank_select_report(cfg, 0.99);
  CHECK(find_row(rep, 0.99, "selected_p").mean == 10.0);
  CHECK(find_row(rep, 0.99, "achieved_fraction").mean >= 0.99);
}

TEST_CASE("gapped instance generators honor their advertised structure") {
  const SymMatrix psd = random_gapped_psd(10, 3, 5);
  const Spectrum s = eig_sym(psd);
  CHECK(s.values(9) > 0.0);
  CHECK(s.values(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.values(2) - s.values(3) >= 0.1);

  const SymMatrix indef = random_gapped_indefinite(12, 4, 2, 7);
  const Spectrum si = eig_sym(indef);
  CHECK(split_index_k(si, 4) == 2);
  const GapProfile gp = gap_profile(si, SymMatrix(12), 4);
  REQUIRE(gp.delta_k.has_value());
  REQUIRE(gp.delta_bottom.has_value());
  CHECK(*gp.delta_k >= 1.3);
  CHECK(*gp.delta_bottom >= 1.3);
  CHECK(gp.sigma_gap >= 1.3);
  CHECK(si.source_norm <= 2.0 + 1e-12);

  // Same seed, same matrix; different seed, different rotation.
  const SymMatrix psd2 = random_gapped_psd(10, 3, 5);
  CHECK((psd.mat() - psd2.mat()).cwiseAbs().maxCoeff() == 0.0);
  const SymMatrix psd3 = random_gapped_psd(10, 3, 6);
  CHECK((psd.mat() - psd3.mat()).cwiseAbs().maxCoeff() > 0.0);

  CHECK_THROWS_AS(random_gapped_psd(5, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_gapped_indefinite(5, 3, 4, 1),
                  std::invalid_argument);
}
