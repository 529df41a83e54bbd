// SPDX-License-Identifier: Apache-2.0
#include "cubekit/value.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

namespace cubekit {

std::string to_display(const Value& v) {
  switch (v.index()) {
    case 0: return "";
    case 1: return std::to_string(std::get<std::int64_t>(v));
    case 2: {
      double d = std::get<double>(v);
      if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 1e15)
        return std::to_string(static_cast<std::int64_t>(d));
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.10g", d);
      return buf;
    }
    default: return std::get<std::string>(v);
  }
}

std::size_t ValueHash::operator()(const Value& v) const {
  switch (v.index()) {
    case 0: return 0x9e3779b9u;
    case 1: return std::hash<std::int64_t>{}(std::get<std::int64_t>(v));
    case 2: {
      // Integral doubles hash like the matching int64 so mixed-typed keys group.
      double d = std::get<double>(v);
      if (d == std::floor(d) && std::fabs(d) < 1e15)
        return std::hash<std::int64_t>{}(static_cast<std::int64_t>(d));
      return std::hash<double>{}(d);
    }
    default: return std::hash<std::string>{}(std::get<std::string>(v));
  }
}

}  // namespace cubekit
