// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "specbound/errors.hpp"
#include "specbound/report.hpp"

using namespace specbound;

TEST_CASE("object keys serialize sorted regardless of insertion order") {
  JsonValue v;
  v["zeta"] = 1;
  v["alpha"] = 2;
  v["mid"] = JsonValue();
  CHECK(v.dump() ==
        "{\n"
        "  \"alpha\": 2,\n"
        "  \"mid\": null,\n"
        "  \"zeta\": 1\n"
        "}\n");
}

TEST_CASE("nested arrays and objects keep the expected layout") {
  JsonValue v;
  v["schema"] = 1;
  JsonValue item;
  item["ok"] = true;
  item["vals"].push_back(0.5);
  item["vals"].push_back(std::int64_t(-3));
  v["rows"].push_back(item);
  v["empty_arr"] = JsonValue();
  v["empty_arr"].push_back(1);
  CHECK(v.dump() ==
        "{\n"
        "  \"empty_arr\": [\n"
        "    1\n"
        "  ],\n"
        "  \"rows\": [\n"
        "    {\n"
        "      \"ok\": true,\n"
        "      \"vals\": [\n"
        "        0.5,\n"
        "        -3\n"
        "      ]\n"
        "    }\n"
        "  ],\n"
        "  \"schema\": 1\n"
        "}\n");
}

TEST_CASE("doubles print 17 significant digits and roundtrip") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.5) == "-0.5");
  for (double d : {1.0 / 3.0, 0.05, 1e-300, 12345.678901234567,
                   std::numeric_limits<double>::denorm_min()}) {
    const std::string text = format_double(d);
    CHECK(std::strtod(text.c_str(), nullptr) == d);
  }
  CHECK_THROWS_AS(format_double(std::numeric_limits<double>::infinity()),
                  numeric_error);
  CHECK_THROWS_AS(format_double(std::nan("")), numeric_error);
}

TEST_CASE("strings escape control characters and quotes") {
  JsonValue v;
  v["s"] = "a\"b\\c\nd\te\x01";
  CHECK(v.dump() == "{\n  \"s\": \"a\\\"b\\\\c\\nd\\te\\u0001\"\n}\n");
}

TEST_CASE("seeds keep full 64-bit precision") {
  JsonValue v;
  v["seed"] = std::uint64_t(18446744073709551615ull);
  CHECK(v.dump() == "{\n  \"seed\": 18446744073709551615\n}\n");
}

TEST_CASE("misuse of the builder is rejected") {
  JsonValue arr;
  arr.push_back(1);
  CHECK_THROWS_AS(arr["key"], std::logic_error);
  JsonValue obj;
  obj["key"] = 1;
  CHECK_THROWS_AS(obj.push_back(2), std::logic_error);
}

TEST_CASE("csv emission is stable and fully precise") {
  std::vector<CsvRow> rows;
  rows.push_back({0.05, "spectral", 0.5, 0.25});
  rows.push_back({1.0, "gap_rate", 1.0, 0.0});
  CHECK(to_csv(rows) ==
        "level,metric,mean,std\n"
        "0.050000000000000003,spectral,0.5,0.25\n"
        "1,gap_rate,1,0\n");
  CHECK(to_csv({}) == "level,metric,mean,std\n");
}

TEST_CASE("file writer reproduces bytes and reports bad paths") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "specbound_report_test.json")
          .string();
  const std::string content = "{\n  \"a\": 1\n}\n";
  write_file(path, content);
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == content);
  std::remove(path.c_str());

  CHECK_THROWS_AS(write_file("/nonexistent/dir/report.json", "x"),
                  std::runtime_error);
}
