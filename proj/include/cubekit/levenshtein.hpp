// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace cubekit {

/// Classic edit distance (insert/delete/substitute, unit costs).
std::size_t levenshtein(std::string_view a, std::string_view b);

std::string to_lower(std::string_view s);

}  // namespace cubekit
