// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "cubekit/navigator.hpp"
#include "cubekit/view_builder.hpp"

namespace cubekit {

/// Parses the textual query language, one clause per line:
///
///   view Sales
///   columns Date.year.year[2022].children()
///   rows Product.category.category.members()
///   pages Store.city.city["Aalborg"]
///   where Date.day.day >= 7 and Supplier.nation.nation == "Denmark"
///   measures UnitSales, profit = lo_revenue - lo_supplycost
///
/// Clause order is free except that axis clauses must respect the 0..4
/// contiguity rule. `#` starts a comment. Member lists keep user order;
/// `.members()` takes every member, `[m].children()` drills one level down.
struct ParsedQuery {
  std::string view_name;
  CubeView view;
};

ParsedQuery parse_query(const std::string& text, const std::shared_ptr<CubeSession>& session);

/// Parses just a where-clause body. Attribute references stay unresolved;
/// the inverse of print_predicate.
PredicatePtr parse_predicate(const std::string& text);

}  // namespace cubekit
