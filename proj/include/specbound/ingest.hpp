// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECBOUND_INGEST_HPP_
#define SPECBOUND_INGEST_HPP_

#include <string>

#include "specbound/linalg.hpp"

namespace specbound {

struct CsvOptions {
  char delimiter = ',';
  bool skip_header = false;  // drop the first line
};

// Preprocessed data matrix. Rows are records; preprocessing replaces
// unparseable or non-finite tokens with 0, pads short rows with zeros,
// scales each row to unit Euclidean norm (zero rows stay zero), then
// centers every column, in that order. Centering runs last, so the final
// entries guarantee only zero column means; the unit row norms hold for the
// intermediate state and are recorded in row_norms (1 per normalized row,
// 0 per zero row).
struct DataMatrix {
  Eigen::MatrixXd entries;
  Eigen::VectorXd row_norms;

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }
};

// Reads a delimited text file into a preprocessed DataMatrix. Tokens must
// parse fully as decimal or scientific notation; anything else (including
// empty fields, inf and nan) becomes 0. Blank lines carry no record.
// Throws std::runtime_error for an unreadable path, a file with no data
// rows, or rows with no columns.
DataMatrix load_csv(const std::string& path, const CsvOptions& opts = {});

// Gram matrix M^T M of the preprocessed data, optionally divided by the
// row count. PSD up to eigensolver roundoff by construction.
SymMatrix covariance(const DataMatrix& d, bool normalize_by_rows = false);

struct RankSelection {
  int p = 0;
  double energy_fraction = 0.0;
  double achieved_fraction = 0.0;  // >= energy_fraction
};

// Minimal p whose magnitude-ordered truncation captures at least
// energy_fraction of the Frobenius norm: smallest p with
// ||A_p||_F >= energy_fraction * ||A||_F. The zero matrix selects p = 1
// with achieved fraction 1. Requires energy_fraction in (0, 1].
RankSelection select_rank(const Spectrum& s, double energy_fraction);

// Builtin diagonal test matrices, selected by a compact spec string:
//   "decay[:base=B,n=N]"    eigenvalues B^1 .. B^N (defaults B=0.8, N=50)
//   "steps[:n=N]"           ladder {10N, 9N, .., N, N/2, 1, .., 1} of size N
//   "steps:n=N,tok,..."     explicit spectrum from tokens over the symbol n,
//                           e.g. "10n", "n", "n/2", or plain numbers
//   "census"                69 eigenvalues with a large gap after the tenth,
//                           sized so that 99% energy selects p = 10
// Throws std::invalid_argument for unknown names or malformed arguments.
SymMatrix make_synthetic(const std::string& spec);

}  // namespace specbound

#endif  // SPECBOUND_INGEST_HPP_
