// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "specbound/ingest.hpp"
#include "specbound/noise.hpp"

using namespace specbound;

namespace {

// Writes content to a unique temp file and removes it at scope exit.
class TempCsv {
 public:
  explicit TempCsv(const std::string& content) {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("specbound_ingest_" + std::to_string(counter++) + ".csv"))
                .string();
    std::ofstream out(path_, std::ios::binary);
    out << content;
  }
  ~TempCsv() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace

TEST_CASE("load_csv replaces, pads, normalizes, then centers") {
  const TempCsv f("1,x,0\n0,1\n");
  const DataMatrix d = load_csv(f.path());
  REQUIRE(d.rows() == 2);
  REQUIRE(d.cols() == 3);
  // Replace x -> 0 and pad row 2 gives unit rows [1,0,0], [0,1,0];
  // centering then subtracts the column means (0.5, 0.5, 0).
  Eigen::MatrixXd expected(2, 3);
  expected << 0.5, -0.5, 0.0,
             -0.5, 0.5, 0.0;
  CHECK((d.entries - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.row_norms(0) == 1.0);
  CHECK(d.row_norms(1) == 1.0);
  // Column means are exactly zero after centering.
  CHECK(d.entries.colwise().mean().cwiseAbs().maxCoeff() <= 1e-16);
}

TEST_CASE("a single row centers to zero and has zero covariance") {
  const TempCsv f("3,4\n");
  const DataMatrix d = load_csv(f.path());
  REQUIRE(d.rows() == 1);
  // Normalized to (0.6, 0.8) before the column means remove everything.
  CHECK(d.entries.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.row_norms(0) == 1.0);
  const SymMatrix cov = covariance(d);
  CHECK(spectral_norm(cov) == 0.0);
}

TEST_CASE("a file of zeros stays zero") {
  const TempCsv f("0,0\n0,0\n");
  const DataMatrix d = load_csv(f.path());
  CHECK(d.entries.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.row_norms(0) == 0.0);
  CHECK(d.row_norms(1) == 0.0);
}

TEST_CASE("token parsing is strict and zeroes non-finite values") {
  // Balanced rows keep normalization and centering inert, exposing the raw
  // parse: bad tokens, empty fields, inf/nan and overflow all become 0.
  const TempCsv f("x,1,1e999,nan\n0.5y,-1,inf, \n");
  const DataMatrix d = load_csv(f.path());
  REQUIRE(d.rows() == 2);
  REQUIRE(d.cols() == 4);
  Eigen::MatrixXd expected(2, 4);
  expected << 0, 1, 0, 0,
              0, -1, 0, 0;
  CHECK((d.entries - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("surrounding spaces are tolerated, embedded garbage is not") {
  const TempCsv f(" 1 ,2.5e-1\n-1, 1e1x\n");
  const DataMatrix d = load_csv(f.path());
  Eigen::MatrixXd raw(2, 2);
  raw << 1.0, 0.25,
        -1.0, 0.0;
  // Hand-applied preprocessing of the raw parse above.
  Eigen::MatrixXd rows = raw;
  rows.row(0) /= rows.row(0).norm();
  rows.rowwise() -= rows.colwise().mean().eval();
  CHECK((d.entries - rows).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("CRLF endings, headers, delimiters and blank lines") {
  const TempCsv crlf("1,0\r\n0,1\r\n");
  CHECK(load_csv(crlf.path()).rows() == 2);

  const TempCsv headered("colA,colB\n1,0\n0,1\n");
  CsvOptions opts;
  opts.skip_header = true;
  const DataMatrix dh = load_csv(headered.path(), opts);
  CHECK(dh.rows() == 2);
  // Without the flag the header parses as a zero row.
  const DataMatrix dnh = load_csv(headered.path());
  CHECK(dnh.rows() == 3);
  CHECK(dnh.row_norms(0) == 0.0);

  const TempCsv semi("1;0\n0;1\n");
  CsvOptions sopts;
  sopts.delimiter = ';';
  CHECK(load_csv(semi.path(), sopts).cols() == 2);

  const TempCsv blanks("1,0\n\n0,1\n");
  CHECK(load_csv(blanks.path()).rows() == 2);
}

TEST_CASE("load_csv failure modes") {
  CHECK_THROWS_AS(load_csv("/nonexistent/specbound.csv"), std::runtime_error);

  const TempCsv empty("");
  CHECK_THROWS_AS(load_csv(empty.path()), std::runtime_error);

  const TempCsv only_header("a,b\n");
  CsvOptions opts;
  opts.skip_header = true;
  CHECK_THROWS_AS(load_csv(only_header.path(), opts), std::runtime_error);
}

TEST_CASE("covariance is the Gram matrix, optionally per-row") {
  DataMatrix d;
  d.entries = Eigen::MatrixXd::Identity(2, 2);
  d.row_norms = Eigen::VectorXd::Ones(2);
  const SymMatrix cov = covariance(d);
  CHECK((cov.mat() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);
  const SymMatrix covn = covariance(d, true);
  CHECK(covn(0, 0) == 0.5);
  CHECK(covn(1, 1) == 0.5);
}

TEST_CASE("covariance of random data is symmetric and PSD within slack") {
  SplitMix64 rng(417);
  DataMatrix d;
  d.entries = Eigen::MatrixXd(9, 5);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 5; ++j) d.entries(i, j) = rng.next_gaussian();
  }
  d.row_norms = Eigen::VectorXd::Ones(9);
  const SymMatrix cov = covariance(d);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) CHECK(cov(i, j) == cov(j, i));
  }
  const Spectrum s = eig_sym(cov);
  const double trace = cov.mat().trace();
  CHECK(s.values(4) >= -1e-10 * trace);
}

TEST_CASE("select_rank picks the minimal magnitude-ordered truncation") {
  const Spectrum s = eig_sym(SymMatrix::diagonal(Eigen::Vector3d(1, 0, 0)));
  const RankSelection sel = select_rank(s, 0.5);
  CHECK(sel.p == 1);
  CHECK(sel.achieved_fraction == 1.0);

  // Magnitude order means the negative eigenvalue counts first.
  const Spectrum si = eig_sym(SymMatrix::diagonal(Eigen::Vector2d(3, -4)));
  const RankSelection s1 = select_rank(si, 0.79);
  CHECK(s1.p == 1);
  CHECK(s1.achieved_fraction == doctest::Approx(0.8).epsilon(1e-15));
  const RankSelection s2 = select_rank(si, 0.81);
  CHECK(s2.p == 2);
  CHECK(s2.achieved_fraction == 1.0);

  const Spectrum zero = eig_sym(SymMatrix(3));
  CHECK(select_rank(zero, 0.99).p == 1);
  CHECK(select_rank(zero, 0.99).achieved_fraction == 1.0);

  CHECK_THROWS_AS(select_rank(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(select_rank(s, 1.0 + 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(select_rank(s, -0.5), std::invalid_argument);
}

TEST_CASE("select_rank is monotone in the energy fraction") {
  const Spectrum s = eig_sym(make_synthetic("decay:base=0.8,n=12"));
  int prev = 0;
  for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.9999, 1.0}) {
    const RankSelection sel = select_rank(s, frac);
    CHECK(sel.p >= prev);
    CHECK(sel.achieved_fraction >= frac);
    prev = sel.p;
  }
}

TEST_CASE("decay spectrum is geometric") {
  const SymMatrix a = make_synthetic("decay:base=0.8,n=50");
  REQUIRE(a.n() == 50);
  CHECK(a(0, 0) == doctest::Approx(0.8).epsilon(1e-15));
  for (int i = 1; i < 50; ++i) {
    CHECK(a(i, i) / a(i - 1, i - 1) == doctest::Approx(0.8).epsilon(1e-12));
  }
  // Defaults match the explicit form.
  const SymMatrix b = make_synthetic("decay");
  CHECK((a.mat() - b.mat()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("steps ladder and explicit step tokens") {
  const SymMatrix a = make_synthetic("steps");
  REQUIRE(a.n() == 20);
  CHECK(a(0, 0) == 200.0);
  CHECK(a(9, 9) == 20.0);
  CHECK(a(10, 10) == 10.0);
  for (int i = 11; i < 20; ++i) CHECK(a(i, i) == 1.0);

  const SymMatrix b = make_synthetic("steps:n=12");
  REQUIRE(b.n() == 12);
  CHECK(b(0, 0) == 120.0);
  CHECK(b(10, 10) == 6.0);
  CHECK(b(11, 11) == 1.0);

  const SymMatrix c = make_synthetic("steps:n=4,10n,n,n/2,1");
  REQUIRE(c.n() == 4);
  CHECK(c(0, 0) == 40.0);
  CHECK(c(1, 1) == 4.0);
  CHECK(c(2, 2) == 2.0);
  CHECK(c(3, 3) == 1.0);

  const SymMatrix d = make_synthetic("steps:n=2,n,-n");
  REQUIRE(d.n() == 2);
  CHECK(d(0, 0) == 2.0);
  CHECK(d(1, 1) == -2.0);

  CHECK_THROWS_AS(make_synthetic("steps:n=11"), std::invalid_argument);
  CHECK_THROWS_AS(make_synthetic("steps:n=4,2q"), std::invalid_argument);
}

TEST_CASE("census spectrum reproduces the designed gap and rank") {
  const SymMatrix a = make_synthetic("census");
  REQUIRE(a.n() == 69);
  const Spectrum s = eig_sym(a);
  CHECK(s.values(0) == doctest::Approx(2724.6).epsilon(1e-15));
  CHECK(s.values(9) == 1434.0);
  CHECK(s.values(9) - s.values(10) ==
        doctest::Approx(1433.99).epsilon(1e-12));
  const RankSelection sel = select_rank(s, 0.99);
  CHECK(sel.p == 10);
  CHECK(sel.achieved_fraction >= 0.99);
  // One value fewer misses the energy target.
  CHECK(select_rank(s, 0.99).p > 9);
}

TEST_CASE("unknown synthetic spectra are rejected") {
  CHECK_THROWS_AS(make_synthetic("fourier"), std::invalid_argument);
  CHECK_THROWS_AS(make_synthetic("census:n=3"), std::invalid_argument);
  CHECK_THROWS_AS(make_synthetic("decay:b=0.5"), std::invalid_argument);
  CHECK_THROWS_AS(make_synthetic("decay:base=zzz"), std::invalid_argument);
  CHECK_THROWS_AS(make_synthetic("decay:n=0"), std::invalid_argument);
}
