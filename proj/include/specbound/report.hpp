// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic report serialization. Reruns with the same config must
// produce byte-identical artifacts, so objects serialize with sorted keys
// and every double is printed with 17 significant digits (full roundtrip
// precision); nothing here depends on locale, time, or pointer order.

#ifndef SPECBOUND_REPORT_HPP_
#define SPECBOUND_REPORT_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace specbound {

// Minimal JSON document builder. Arrays keep insertion order; objects are
// sorted by key at dump time. Doubles must be finite.
class JsonValue {
 public:
  JsonValue() : kind_(Kind::kNull) {}
  JsonValue(bool b) : kind_(Kind::kBool), bool_(b) {}
  JsonValue(int i) : kind_(Kind::kInt), int_(i) {}
  JsonValue(std::int64_t i) : kind_(Kind::kInt), int_(i) {}
  JsonValue(std::uint64_t u) : kind_(Kind::kUint), uint_(u) {}
  JsonValue(double d) : kind_(Kind::kDouble), double_(d) {}
  JsonValue(const char* s) : kind_(Kind::kString), string_(s) {}
  JsonValue(std::string s) : kind_(Kind::kString), string_(std::move(s)) {}

  // Object access; creates the key on first use. A null value silently
  // becomes an object, any other kind throws std::logic_error.
  JsonValue& operator[](const std::string& key);

  // Array append; a null value silently becomes an array.
  void push_back(JsonValue v);

  bool is_null() const { return kind_ == Kind::kNull; }

  // Pretty serialization with two-space indentation and a trailing newline.
  std::string dump() const;

 private:
  enum class Kind { kNull, kBool, kInt, kUint, kDouble, kString, kArray, kObject };

  void write(std::string& out, int depth) const;

  Kind kind_;
  bool bool_ = false;
  std::int64_t int_ = 0;
  std::uint64_t uint_ = 0;
  double double_ = 0.0;
  std::string string_;
  std::vector<JsonValue> array_;
  std::vector<std::pair<std::string, JsonValue>> object_;
};

// 17-significant-digit decimal form, enough to reparse to the same double.
std::string format_double(double value);

// One aggregate line of the plot-ready CSV emission.
struct CsvRow {
  double level = 0.0;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;
};

// "level,metric,mean,std" header plus one line per row, doubles at full
// precision.
std::string to_csv(const std::vector<CsvRow>& rows);

// Writes content verbatim (binary mode); throws std::runtime_error when the
// path cannot be created.
void write_file(const std::string& path, const std::string& content);

}  // namespace specbound

#endif  // SPECBOUND_REPORT_HPP_
