// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment runner behind the CLI. Every study is a pure function of its
// config: trial t at level index li draws noise with seed
// fold(fold(config.seed, li), t), aggregation runs in trial order, and the
// emitted JSON/CSV are byte-stable across reruns.

#ifndef SPECBOUND_HARNESS_HPP_
#define SPECBOUND_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specbound/bounds.hpp"
#include "specbound/ingest.hpp"
#include "specbound/noise.hpp"
#include "specbound/report.hpp"

namespace specbound {

struct ExperimentConfig {
  std::string input_csv;   // exactly one of input_csv / synthetic
  std::string synthetic;
  char delimiter = ',';
  bool header = false;
  bool normalize_rows = false;  // divide the covariance by the row count
  std::optional<int> p;         // exactly one of p / energy
  std::optional<double> energy;
  NoiseSpec::Kind noise_kind = NoiseSpec::Kind::kWignerGaussian;
  bool goe_diagonal = false;
  int levels = 20;           // noise scales k/levels for k = 1..levels
  bool include_zero = false; // prepend scale 0
  int trials = 100;
  std::uint64_t seed = 0;
};

// Matrix under study with its decomposition and the resolved rank.
struct ExperimentInstance {
  SymMatrix matrix;
  Spectrum spectrum;
  int p = 0;
  std::optional<RankSelection> selection;  // present when energy was used
};

// Loads or synthesizes the input and resolves p (explicit or by energy
// fraction). Throws std::invalid_argument for conflicting or missing
// choices and for p outside [1, n-1].
ExperimentInstance resolve_instance(const ExperimentConfig& cfg);

// The three distances between rank-p truncations compared by the metric
// study. change_in_error is the shift of the residual norm,
// | sigma_{p+1}(A) - sigma_{p+1}(A~) |; it can vanish under pure subspace
// rotation, which is exactly the failure mode the study demonstrates.
struct MetricValues {
  double spectral = 0.0;
  double frobenius = 0.0;
  double change_in_error = 0.0;
};
MetricValues metric_values(const Spectrum& sa, const Spectrum& sat, int p);

// A finished study: the full JSON document plus flat rows for plotting.
// ok turns false when a recorded pass/fail check failed (bootstrap suite);
// studies that enforce checks per trial throw instead.
struct ExperimentReport {
  JsonValue json;
  std::vector<CsvRow> csv_rows;
  bool ok = true;
};

// Per-level comparison of the actual rank-p error against every applicable
// bound. Per-trial theorem checks (baseline bound always, gap bound when
// the PSD gap condition holds, eigenvalue stability always) throw
// invariant_violation on failure.
ExperimentReport run_bound_study(const ExperimentConfig& cfg);

// Per-level comparison of the spectral, Frobenius and change-in-error
// metrics. Enforces the norm-equivalence links per trial:
// spectral <= frobenius <= sqrt(2p) * spectral.
ExperimentReport run_metric_study(const ExperimentConfig& cfg);

// Noise calibrated so that the expected ||E|| sweeps ratio_grid * delta_p:
// per ratio, alpha = ratio * delta_p / median ||E|| over 16 pilot draws.
// Reports mean actual error, gap bound and baseline bound plus their exact
// quotients. Requires a PSD instance.
ExperimentReport run_beyond_gap(const ExperimentConfig& cfg,
                                const std::vector<double>& ratio_grid = {});

// Contour-integral certification sweep: for each instance, checks the
// perturbation integral against twice the first-order integral for every
// registry function, and the per-wall integrals against their closed-form
// caps. Uses the configured input when given (n capped at 30), otherwise
// an internal battery of seeded instances including a zero-noise one.
ExperimentReport run_bootstrap_suite(const ExperimentConfig& cfg);

// Gaussian-mechanism release of the rank-p truncation with a utility
// certificate: A~ = A + E with per-entry scale calibrated to (epsilon,
// delta, sensitivity), released matrix rank_p(A~), and a BoundReport whose
// dp_gap_ok flag records whether delta_p >= 8.01 * sigma * sqrt(n).
struct DpReleaseResult {
  SymMatrix released;
  BoundReport certificate;
  double noise_sigma = 0.0;
};
DpReleaseResult dp_release(const SymMatrix& a, int p, double epsilon,
                           double delta, double sensitivity,
                           std::uint64_t seed);

// Report document for a release, including the certificate and flags.
ExperimentReport dp_release_report(const DpReleaseResult& result,
                                   const ExperimentConfig& cfg, double epsilon,
                                   double delta, double sensitivity);

// Rank selection as a report, for the rank-select subcommand.
ExperimentReport rank_select_report(const ExperimentConfig& cfg,
                                    double energy_fraction);

// Seeded dense instances with controlled gaps, used by the bootstrap
// battery and the validation suites. Both rotate a crafted diagonal by a
// seeded orthogonal matrix.
//   random_gapped_psd: positive descending values, gap >= 1 after position
//   p before rescaling to lambda_1 = 2.
//   random_gapped_indefinite: k values in (1.5, 2], n-p values in
//   (-0.2, 0.2), p-k values in [-2, -1.5); both cluster gaps and the
//   p-th singular value gap are at least 1.3.
SymMatrix random_gapped_psd(int n, int p, std::uint64_t seed);
SymMatrix random_gapped_indefinite(int n, int p, int k, std::uint64_t seed);

}  // namespace specbound

#endif  // SPECBOUND_HARNESS_HPP_
