// Copyright 2026 The jlmetric Authors.
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

#ifndef JLMETRIC_FORMAT_HPP_
#define JLMETRIC_FORMAT_HPP_

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace jlm {

/// Shortest decimal form that round-trips exactly.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

/// Fixed-point with `digits` decimals, for human-readable tables.
inline std::string format_fixed(double x, int digits) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x,
                                 std::chars_format::fixed, digits);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace jlm

#endif  // JLMETRIC_FORMAT_HPP_
