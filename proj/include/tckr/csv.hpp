// Copyright 2026 The TCKR Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TCKR_CSV_HPP_
#define TCKR_CSV_HPP_

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tckr/error.hpp"

namespace tckr::csv {

// Shortest decimal string that parses back to exactly `value`.
inline std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("cannot format floating-point value");
  return std::string(buf, end);
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Line-oriented reader for headed, comma-separated files without quoting.
// Every error message is prefixed with "<path>:<line>: ".
class Reader {
 public:
  Reader(const std::string& path, std::string_view expected_header)
      : path_(path), in_(path) {
    if (!in_) throw ValidationError(path_ + ": cannot open file");
    std::string header;
    if (!next_line(header)) fail("empty file, expected header");
    if (header != expected_header) {
      fail("bad header \"" + header + "\", expected \"" +
           std::string(expected_header) + "\"");
    }
    width_ = split(expected_header).size();
  }

  // Reads the next non-empty row; false at end of file.
  bool next(std::vector<std::string_view>& fields) {
    while (next_line(current_)) {
      if (current_.empty()) continue;
      fields = split(current_);
      if (fields.size() != width_) {
        fail("expected " + std::to_string(width_) + " fields, got " +
             std::to_string(fields.size()));
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ValidationError(path_ + ":" + std::to_string(line_) + ": " + message);
  }

  long parse_int(std::string_view field, std::string_view what) const {
    long value = 0;
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() ||
        field.empty()) {
      fail("invalid " + std::string(what) + " \"" + std::string(field) + "\"");
    }
    return value;
  }

  double parse_double(std::string_view field, std::string_view what) const {
    double value = 0;
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() ||
        field.empty() || !std::isfinite(value)) {
      fail("invalid " + std::string(what) + " \"" + std::string(field) + "\"");
    }
    return value;
  }

  std::size_t line() const { return line_; }

 private:
  bool next_line(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::string path_;
  std::ifstream in_;
  std::string current_;
  std::size_t width_ = 0;
  std::size_t line_ = 0;
};

}  // namespace tckr::csv

#endif  // TCKR_CSV_HPP_
