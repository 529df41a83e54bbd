// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cubekit/model.hpp"

namespace cubekit {

struct ResultColumn {
  std::string name;
  bool is_measure = false;
};

struct QueryPlan {
  std::string sql;
  std::vector<Value> params;
  /// Axis columns in axis order, then measure aliases in measure order.
  std::vector<ResultColumn> columns;
};

/// Supplies the member list of an AllMembers axis (cached by the session).
using MemberResolver = std::function<std::vector<Value>(const Axis&)>;

/// Per-dimension join chain, fact FK upward. All levels of a referenced
/// dimension are joined (full denormalization of the chain).
struct HierarchyChain {
  const DimensionBinding* dim = nullptr;
  std::vector<std::string> aliases;  // one per level binding, bottom -> top
};

class SqlGenerator {
 public:
  explicit SqlGenerator(const CubeView& view);

  /// JOIN fragments for every referenced dimension (axes first, then
  /// predicate-only dimensions), with per-role aliases.
  std::string from_clause() const;

  /// One `alias.attr IN (?, ...)` per axis, AND-joined in axis order.
  /// AllMembers axes emit the full current member list.
  std::string inclusion_clause(const MemberResolver& resolve, std::vector<Value>& params) const;

  /// Infix rendering of the predicate AST; empty when the predicate is true.
  std::string predicate_clause(std::vector<Value>& params) const;

  QueryPlan generate(const MemberResolver& resolve) const;

 private:
  std::string alias_for(const DimensionBinding& dim, const LevelBinding& lb) const;
  std::string attr_sql(const AttrRef& ref) const;
  void render_predicate(const Predicate& p, bool and_operand, std::string& out,
                        std::vector<Value>& params) const;

  const CubeView& view_;
  std::vector<const DimensionBinding*> joined_dims_;  // axes order, then predicate-only
  bool qualify_aliases_ = false;  // true when a table appears in several chains
};

/// Convenience wrapper used by view-builder and the CLI.
QueryPlan generate(const CubeView& view, const MemberResolver& resolve);

}  // namespace cubekit
