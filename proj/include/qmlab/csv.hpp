// Copyright 2026 The qmlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace qmlab::csv {

/// Shortest-safe round-trip representation: 17 significant digits.
inline std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Writes one comma-separated row terminated by LF.
class RowWriter {
 public:
  explicit RowWriter(std::ostream& os) : os_(os) {}

  RowWriter& operator<<(double x) { return field(number(x)); }
  RowWriter& operator<<(std::string_view s) { return field(s); }
  RowWriter& operator<<(const char* s) { return field(s); }
  RowWriter& operator<<(unsigned long long x) { return field(std::to_string(x)); }
  RowWriter& operator<<(unsigned long x) { return field(std::to_string(x)); }
  RowWriter& operator<<(long long x) { return field(std::to_string(x)); }
  RowWriter& operator<<(long x) { return field(std::to_string(x)); }
  RowWriter& operator<<(int x) { return field(std::to_string(x)); }
  RowWriter& operator<<(unsigned x) { return field(std::to_string(x)); }

  ~RowWriter() { os_ << '\n'; }

 private:
  RowWriter& field(std::string_view s) {
    if (!first_) os_ << ',';
    os_ << s;
    first_ = false;
    return *this;
  }

  std::ostream& os_;
  bool first_ = true;
};

inline void header(std::ostream& os, std::initializer_list<std::string_view> names) {
  RowWriter row(os);
  for (auto n : names) row << n;
}

}  // namespace qmlab::csv
