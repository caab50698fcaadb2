// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0

#include "specbound/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "specbound/errors.hpp"

namespace specbound {

namespace {

void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace

JsonValue& JsonValue::operator[](const std::string& key) {
  if (kind_ == Kind::kNull) kind_ = Kind::kObject;
  if (kind_ != Kind::kObject) {
    throw std::logic_error("JsonValue: key access on a non-object");
  }
  for (auto& [k, v] : object_) {
    if (k == key) return v;
  }
  object_.emplace_back(key, JsonValue());
  return object_.back().second;
}

void JsonValue::push_back(JsonValue v) {
  if (kind_ == Kind::kNull) kind_ = Kind::kArray;
  if (kind_ != Kind::kArray) {
    throw std::logic_error("JsonValue: append on a non-array");
  }
  array_.push_back(std::move(v));
}

void JsonValue::write(std::string& out, int depth) const {
  const std::string pad(2 * std::size_t(depth), ' ');
  const std::string inner(2 * std::size_t(depth + 1), ' ');
  switch (kind_) {
    case Kind::kNull: out += "null"; break;
    case Kind::kBool: out += bool_ ? "true" : "false"; break;
    case Kind::kInt: out += std::to_string(int_); break;
    case Kind::kUint: out += std::to_string(uint_); break;
    case Kind::kDouble: out += format_double(double_); break;
    case Kind::kString: escape_into(out, string_); break;
    case Kind::kArray: {
      if (array_.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < array_.size(); ++i) {
        out += inner;
        array_[i].write(out, depth + 1);
        out += i + 1 < array_.size() ? ",\n" : "\n";
      }
      out += pad + "]";
      break;
    }
    case Kind::kObject: {
      if (object_.empty()) {
        out += "{}";
        break;
      }
      auto sorted = object_;
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      out += "{\n";
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        out += inner;
        escape_into(out, sorted[i].first);
        out += ": ";
        sorted[i].second.write(out, depth + 1);
        out += i + 1 < sorted.size() ? ",\n" : "\n";
      }
      out += pad + "}";
      break;
    }
  }
}

std::string JsonValue::dump() const {
  std::string out;
  write(out, 0);
  out += '\n';
  return out;
}

std::string format_double(double value) {
  if (!std::isfinite(value)) {
    throw numeric_error("report value is not finite");
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_csv(const std::vector<CsvRow>& rows) {
  std::string out = "level,metric,mean,std\n";
  for (const CsvRow& row : rows) {
    out += format_double(row.level);
    out += ',';
    out += row.metric;
    out += ',';
    out += format_double(row.mean);
    out += ',';
    out += format_double(row.std);
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("short write to '" + path + "'");
  }
}

}  // namespace specbound
