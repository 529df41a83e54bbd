// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace cubekit {

/// A single database value. The monostate alternative is SQL NULL.
using Value = std::variant<std::monostate, std::int64_t, double, std::string>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }
inline bool is_numeric(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

inline double as_double(const Value& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (auto* d = std::get_if<double>(&v)) return *d;
  return 0.0;
}

/// Three-valued SQL comparison: nullopt when either side is NULL.
/// Numbers compare numerically, strings lexicographically; a number never
/// equals a string.
inline std::optional<int> compare(const Value& a, const Value& b) {
  if (is_null(a) || is_null(b)) return std::nullopt;
  if (is_numeric(a) && is_numeric(b)) {
    double x = as_double(a), y = as_double(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  const auto* sa = std::get_if<std::string>(&a);
  const auto* sb = std::get_if<std::string>(&b);
  if (sa && sb) return sa->compare(*sb) < 0 ? -1 : (*sa == *sb ? 0 : 1);
  // Mixed text/number: order numbers before text, never equal.
  return is_numeric(a) ? -1 : 1;
}

inline bool value_equal(const Value& a, const Value& b) {
  if (is_null(a) && is_null(b)) return true;
  auto c = compare(a, b);
  return c.has_value() && *c == 0;
}

/// Renders a value the way it appears in headers and CSV output.
std::string to_display(const Value& v);

/// Hash usable for grouping keys.
struct ValueHash {
  std::size_t operator()(const Value& v) const;
};

}  // namespace cubekit
