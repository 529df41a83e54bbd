// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cubekit/dbio.hpp"
#include "cubekit/model.hpp"

namespace cubekit {

enum class MemberOrdering { Chronological, Lexicographic, UserGiven };

struct MemberList {
  AttrRef attr;
  std::vector<Value> values;
  MemberOrdering ordering = MemberOrdering::Lexicographic;
};

/// Absolute path to an attribute value: anchored at some level, each step
/// descends exactly one level.
struct MemberPath {
  std::string dimension;
  /// (level name, member value) from the anchor level downward.
  std::vector<std::pair<std::string, Value>> descent;

  const std::string& resolved_level() const { return descent.back().first; }
};

/// Session over one database connection and the cubes bound to it.
class CubeSession {
 public:
  CubeSession(std::shared_ptr<Driver> driver, std::vector<std::shared_ptr<const CubeBinding>> cubes);

  std::vector<std::string> views() const;
  std::shared_ptr<const CubeBinding> view(const std::string& name) const;

  Driver& driver() { return *driver_; }

  // -- metadata introspection -------------------------------------------
  std::vector<std::string> measure_names(const CubeBinding& cube) const;
  std::vector<std::string> dimension_names(const CubeBinding& cube) const;
  std::vector<std::vector<std::string>> hierarchies(const CubeBinding& cube,
                                                    const std::string& dimension) const;
  std::vector<std::string> attributes(const CubeBinding& cube, const std::string& dimension,
                                      const std::string& level) const;

  // -- member navigation ------------------------------------------------
  /// All distinct values of the attribute, ordered (chronological for
  /// date-like attributes, else lexicographic).
  MemberList members(const CubeBinding& cube, const AttrRef& attr);

  /// Anchors a path at `attr`'s level with the given member value.
  MemberPath member(const CubeBinding& cube, const AttrRef& attr, const Value& value);

  /// Extends a path one level down.
  MemberPath member(const CubeBinding& cube, const MemberPath& parent, const Value& value);

  /// Members one level below the path, restricted to roll up into it.
  MemberList children(const CubeBinding& cube, const MemberPath& path);

  // -- resolution helpers (case-insensitive display names) --------------
  const DimensionBinding& resolve_dimension(const CubeBinding& cube, const std::string& name) const;
  const LevelBinding& resolve_level(const DimensionBinding& dim, const std::string& name) const;
  /// Canonicalizes the reference and checks the attribute exists.
  AttrRef resolve_attr(const CubeBinding& cube, const AttrRef& ref) const;
  /// Literal type check for predicate atoms against the bound column.
  void check_literal(const CubeBinding& cube, const AttrRef& ref, const Value& literal) const;

  const CatalogSnapshot& catalog();

 private:
  MemberList fetch_members(const CubeBinding& cube, const AttrRef& attr,
                           const MemberPath* scope, bool child_of_scope);

  std::shared_ptr<Driver> driver_;
  std::vector<std::shared_ptr<const CubeBinding>> cubes_;
  std::optional<CatalogSnapshot> catalog_;
  std::map<std::string, MemberList> member_cache_;
};

/// True when every value is an English month name; such columns order
/// chronologically.
bool all_month_names(const std::vector<Value>& values);
int month_index(const std::string& name);  // 1..12, 0 when unknown

void order_members(std::vector<Value>& values, MemberOrdering& ordering_out,
                   const std::string& sql_type);

}  // namespace cubekit
