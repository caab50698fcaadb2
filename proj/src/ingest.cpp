// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0

#include "specbound/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace specbound {

namespace {

// Strict full-token parse; returns 0 for anything that is not entirely a
// finite decimal or scientific-notation number.
double parse_token(std::string_view token) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t'; };
  while (!token.empty() && is_space(token.front())) token.remove_prefix(1);
  while (!token.empty() && is_space(token.back())) token.remove_suffix(1);
  if (token.empty()) return 0.0;
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() ||
      !std::isfinite(value)) {
    return 0.0;
  }
  return value;
}

std::vector<double> parse_record(const std::string& line, char delimiter) {
  std::vector<double> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = line.find(delimiter, begin);
    const std::size_t len =
        (end == std::string::npos ? line.size() : end) - begin;
    out.push_back(parse_token(std::string_view(line).substr(begin, len)));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return out;
}

struct KeyValue {
  std::string key;    // empty for bare tokens
  std::string value;
};

std::vector<KeyValue> split_args(const std::string& args) {
  std::vector<KeyValue> out;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      out.push_back({"", item});
    } else {
      out.push_back({item.substr(0, eq), item.substr(eq + 1)});
    }
  }
  return out;
}

double parse_number_or_throw(const std::string& text, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw std::invalid_argument(std::string("make_synthetic: bad ") + what +
                                " '" + text + "'");
  }
  return value;
}

// Spectrum token over the ladder symbol n: "n", "Xn", "n/D", "Xn/D", or a
// plain number.
double parse_step_token(const std::string& token, double n) {
  const std::size_t pos = token.find('n');
  if (pos == std::string::npos) {
    return parse_number_or_throw(token, "step token");
  }
  double coef = 1.0;
  if (pos > 0) {
    const std::string prefix = token.substr(0, pos);
    if (prefix == "-") {
      coef = -1.0;
    } else if (prefix == "+") {
      coef = 1.0;
    } else {
      coef = parse_number_or_throw(prefix, "step coefficient");
    }
  }
  double value = coef * n;
  if (pos + 1 < token.size()) {
    if (token[pos + 1] != '/') {
      throw std::invalid_argument("make_synthetic: bad step token '" + token +
                                  "'");
    }
    value /= parse_number_or_throw(token.substr(pos + 2), "step divisor");
  }
  return value;
}

SymMatrix make_decay(const std::string& args) {
  double base = 0.8;
  int n = 50;
  for (const KeyValue& kv : split_args(args)) {
    if (kv.key == "base") {
      base = parse_number_or_throw(kv.value, "decay base");
    } else if (kv.key == "n") {
      n = static_cast<int>(parse_number_or_throw(kv.value, "dimension"));
    } else {
      throw std::invalid_argument("make_synthetic: unknown decay argument '" +
                                  kv.key + "'");
    }
  }
  if (n < 1) throw std::invalid_argument("make_synthetic: dimension must be >= 1");
  Eigen::VectorXd values(n);
  for (int i = 0; i < n; ++i) values(i) = std::pow(base, i + 1);
  return SymMatrix::diagonal(values);
}

SymMatrix make_steps(const std::string& args) {
  int n = 20;
  std::vector<std::string> tokens;
  for (const KeyValue& kv : split_args(args)) {
    if (kv.key == "n") {
      n = static_cast<int>(parse_number_or_throw(kv.value, "dimension"));
    } else if (kv.key.empty()) {
      tokens.push_back(kv.value);
    } else {
      throw std::invalid_argument("make_synthetic: unknown steps argument '" +
                                  kv.key + "'");
    }
  }
  if (!tokens.empty()) {
    Eigen::VectorXd values(static_cast<int>(tokens.size()));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      values(static_cast<int>(i)) = parse_step_token(tokens[i], double(n));
    }
    return SymMatrix::diagonal(values);
  }
  // Default ladder 10n, 9n, .., n, n/2, 1, .., 1 needs room for all steps.
  if (n < 12) {
    throw std::invalid_argument("make_synthetic: steps ladder needs n >= 12");
  }
  Eigen::VectorXd values(n);
  for (int i = 0; i < 10; ++i) values(i) = double((10 - i) * n);
  values(10) = double(n) / 2.0;
  for (int i = 11; i < n; ++i) values(i) = 1.0;
  return SymMatrix::diagonal(values);
}

// 69 eigenvalues: ten large values 143.4 apart ending at 1434, then a
// geometric tail, so the tenth gap is 1433.99 and 99% of the squared energy
// needs exactly the top ten values.
SymMatrix make_census() {
  const int n = 69;
  Eigen::VectorXd values(n);
  for (int i = 0; i < 10; ++i) values(i) = 1434.0 + 143.4 * (9 - i);
  for (int i = 10; i < n; ++i) values(i) = 0.01 * std::pow(0.9, i - 10);
  return SymMatrix::diagonal(values);
}

}  // namespace

DataMatrix load_csv(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_csv: cannot open '" + path + "'");
  }
  std::vector<std::vector<double>> records;
  std::size_t width = 0;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool skip = first && opts.skip_header;
    first = false;
    if (skip || line.empty()) continue;
    records.push_back(parse_record(line, opts.delimiter));
    width = std::max(width, records.back().size());
  }
  if (records.empty()) {
    throw std::runtime_error("load_csv: no data rows in '" + path + "'");
  }
  if (width == 0) {
    throw std::runtime_error("load_csv: rows carry no columns in '" + path +
                             "'");
  }

  DataMatrix d;
  d.entries = Eigen::MatrixXd::Zero(static_cast<int>(records.size()),
                                    static_cast<int>(width));
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t j = 0; j < records[i].size(); ++j) {
      d.entries(static_cast<int>(i), static_cast<int>(j)) = records[i][j];
    }
  }
  d.row_norms = Eigen::VectorXd::Zero(d.rows());
  for (int i = 0; i < d.rows(); ++i) {
    const double norm = d.entries.row(i).norm();
    if (norm > 0.0) {
      d.entries.row(i) /= norm;
      d.row_norms(i) = 1.0;
    }
  }
  d.entries.rowwise() -= d.entries.colwise().mean();
  return d;
}

SymMatrix covariance(const DataMatrix& d, bool normalize_by_rows) {
  Eigen::MatrixXd gram = d.entries.transpose() * d.entries;
  if (normalize_by_rows) gram /= double(d.rows());
  return SymMatrix(gram);
}

RankSelection select_rank(const Spectrum& s, double energy_fraction) {
  if (!(energy_fraction > 0.0) || !(energy_fraction <= 1.0)) {
    throw std::invalid_argument(
        "select_rank: energy fraction must lie in (0, 1]");
  }
  RankSelection sel;
  sel.energy_fraction = energy_fraction;
  const double total = s.values.squaredNorm();
  if (total == 0.0) {
    sel.p = 1;
    sel.achieved_fraction = 1.0;
    return sel;
  }
  const std::vector<int> order = selection_order(s);
  double cum = 0.0;
  for (int p = 1; p <= s.n(); ++p) {
    const double v = s.values(order[p - 1]);
    cum += v * v;
    sel.achieved_fraction = std::sqrt(cum / total);
    if (sel.achieved_fraction >= energy_fraction) {
      sel.p = p;
      return sel;
    }
  }
  sel.p = s.n();  // cum == total makes the loop return, but stay defensive
  sel.achieved_fraction = 1.0;
  return sel;
}

SymMatrix make_synthetic(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "decay") return make_decay(args);
  if (name == "steps") return make_steps(args);
  if (name == "census") {
    if (!args.empty()) {
      throw std::invalid_argument("make_synthetic: census takes no arguments");
    }
    return make_census();
  }
  throw std::invalid_argument("make_synthetic: unknown spectrum '" + name +
                              "'");
}

}  // namespace specbound
