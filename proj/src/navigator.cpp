// SPDX-License-Identifier: Apache-2.0
#include "cubekit/navigator.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "cubekit/levenshtein.hpp"

namespace cubekit {

namespace {

const std::array<const char*, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

std::string quote_ident(const std::string& ident) { return "\"" + ident + "\""; }

}  // namespace

int month_index(const std::string& name) {
  std::string lo = to_lower(name);
  for (std::size_t i = 0; i < kMonths.size(); ++i)
    if (lo == kMonths[i]) return static_cast<int>(i) + 1;
  return 0;
}

bool all_month_names(const std::vector<Value>& values) {
  if (values.empty()) return false;
  for (const auto& v : values) {
    const auto* s = std::get_if<std::string>(&v);
    if (!s || month_index(*s) == 0) return false;
  }
  return true;
}

void order_members(std::vector<Value>& values, MemberOrdering& ordering_out,
                   const std::string& sql_type) {
  std::string type = to_lower(sql_type);
  bool date_typed = type.find("date") != std::string::npos || type.find("time") != std::string::npos;
  if (date_typed) {
    ordering_out = MemberOrdering::Chronological;
    std::sort(values.begin(), values.end(),
              [](const Value& a, const Value& b) { return compare(a, b).value_or(0) < 0; });
    return;
  }
  if (all_month_names(values)) {
    ordering_out = MemberOrdering::Chronological;
    std::sort(values.begin(), values.end(), [](const Value& a, const Value& b) {
      return month_index(std::get<std::string>(a)) < month_index(std::get<std::string>(b));
    });
    return;
  }
  ordering_out = MemberOrdering::Lexicographic;
  std::sort(values.begin(), values.end(),
            [](const Value& a, const Value& b) { return compare(a, b).value_or(0) < 0; });
}

CubeSession::CubeSession(std::shared_ptr<Driver> driver,
                         std::vector<std::shared_ptr<const CubeBinding>> cubes)
    : driver_(std::move(driver)), cubes_(std::move(cubes)) {}

std::vector<std::string> CubeSession::views() const {
  std::vector<std::string> out;
  for (const auto& c : cubes_) out.push_back(c->name);
  return out;
}

std::shared_ptr<const CubeBinding> CubeSession::view(const std::string& name) const {
  std::string needle = to_lower(name);
  for (const auto& c : cubes_)
    if (to_lower(c->name) == needle) return c;
  throw Error(ErrorCode::UnknownLevel, "no view named '" + name + "'");
}

const CatalogSnapshot& CubeSession::catalog() {
  if (!catalog_) catalog_ = driver_->introspect();
  return *catalog_;
}

std::vector<std::string> CubeSession::measure_names(const CubeBinding& cube) const {
  std::vector<std::string> out;
  for (const auto& m : cube.measures) out.push_back(m.name);
  return out;
}

std::vector<std::string> CubeSession::dimension_names(const CubeBinding& cube) const {
  std::vector<std::string> out;
  for (const auto& d : cube.dimensions) out.push_back(d.role_name);
  return out;
}

std::vector<std::vector<std::string>> CubeSession::hierarchies(const CubeBinding& cube,
                                                               const std::string& dimension) const {
  const auto& dim = resolve_dimension(cube, dimension);
  std::vector<std::string> chain;
  for (const auto& ls : dim.schema.levels) chain.push_back(ls.name);
  return {chain};
}

std::vector<std::string> CubeSession::attributes(const CubeBinding& cube,
                                                 const std::string& dimension,
                                                 const std::string& level) const {
  const auto& dim = resolve_dimension(cube, dimension);
  const auto& lb = resolve_level(dim, level);
  return lb.level.attrs;
}

const DimensionBinding& CubeSession::resolve_dimension(const CubeBinding& cube,
                                                       const std::string& name) const {
  std::string needle = to_lower(name);
  for (const auto& d : cube.dimensions) {
    if (to_lower(d.role_name) == needle) return d;
    // "Date" also matches role "datekey".
    std::string role = to_lower(d.role_name);
    if (role.size() > 3 && role.ends_with("key") && role.substr(0, role.size() - 3) == needle)
      return d;
    if (to_lower(d.level_bindings.front().table) == needle) return d;
  }
  throw Error(ErrorCode::UnknownAttribute, "unknown dimension '" + name + "'");
}

const LevelBinding& CubeSession::resolve_level(const DimensionBinding& dim,
                                               const std::string& name) const {
  std::string needle = to_lower(name);
  for (const auto& lb : dim.level_bindings)
    if (to_lower(lb.level.name) == needle) return lb;
  throw Error(ErrorCode::UnknownLevel,
              "dimension '" + dim.role_name + "' has no level '" + name + "'");
}

AttrRef CubeSession::resolve_attr(const CubeBinding& cube, const AttrRef& ref) const {
  const auto& dim = resolve_dimension(cube, ref.dimension);
  const auto& lb = resolve_level(dim, ref.level);
  std::string needle = to_lower(ref.attribute);
  for (const auto& a : lb.level.attrs)
    if (to_lower(a) == needle) return {dim.role_name, lb.level.name, a};
  throw Error(ErrorCode::UnknownAttribute,
              "level '" + lb.level.name + "' has no attribute '" + ref.attribute + "'");
}

void CubeSession::check_literal(const CubeBinding& cube, const AttrRef& ref,
                                const Value& literal) const {
  // Column type lookup requires the catalog; treat unknown types as ok.
  auto* self = const_cast<CubeSession*>(this);
  const auto& dim = resolve_dimension(cube, ref.dimension);
  const auto& lb = resolve_level(dim, ref.level);
  const TableInfo* t = self->catalog().find_table(lb.table);
  if (!t) return;
  for (const auto& col : t->columns) {
    if (col.name != lb.column_of(ref.attribute)) continue;
    if (is_numeric(literal) && !col.is_numeric)
      throw Error(ErrorCode::TypeMismatch, "numeric literal compared to text column '" + col.name +
                                               "' on level '" + lb.level.name + "'");
    if (std::holds_alternative<std::string>(literal) && col.is_numeric)
      throw Error(ErrorCode::TypeMismatch, "text literal compared to numeric column '" + col.name +
                                               "' on level '" + lb.level.name + "'");
  }
}

MemberList CubeSession::fetch_members(const CubeBinding& cube, const AttrRef& attr,
                                      const MemberPath* scope, bool child_of_scope) {
  const auto& dim = resolve_dimension(cube, attr.dimension);
  const auto& lb = resolve_level(dim, attr.level);

  // Build a query from the attribute's level up to the scope's anchor level.
  std::string base_alias = lb.table;
  std::ostringstream sql;
  sql << "SELECT DISTINCT " << quote_ident(base_alias) << "." << quote_ident(lb.column_of(attr.attribute))
      << " FROM " << quote_ident(lb.table) << " AS " << quote_ident(base_alias);
  std::vector<Value> params;

  if (scope) {
    int from = dim.level_index(attr.level);
    int anchor = dim.level_index(scope->descent.front().first);
    // Join the chain upward; condition each scoped level on its value.
    for (int i = from; i < anchor; ++i) {
      const auto& child = dim.level_bindings[static_cast<std::size_t>(i)];
      const auto& parent = dim.level_bindings[static_cast<std::size_t>(i) + 1];
      sql << " JOIN " << quote_ident(parent.table) << " AS " << quote_ident(parent.table) << " ON "
          << quote_ident(parent.table) << "." << quote_ident(parent.key_column) << " = "
          << quote_ident(child.table) << "." << quote_ident(*child.fk_column);
    }
    sql << " WHERE 1 = 1";
    for (const auto& [level_name, value] : scope->descent) {
      const auto& slb = resolve_level(dim, level_name);
      sql << " AND " << quote_ident(slb.table) << "." << quote_ident(slb.column_of(slb.member_attr))
          << " = ?";
      params.push_back(value);
    }
  }

  // Role-qualified: shared snowflake tables must not alias across roles.
  std::string key = attr.dimension + "\x1f" + sql.str();
  for (const auto& p : params) key += "\x1f" + to_display(p);
  if (auto it = member_cache_.find(key); it != member_cache_.end()) return it->second;

  ResultSet rs = driver_->execute(sql.str(), params);
  MemberList list;
  list.attr = attr;
  for (auto& row : rs.rows)
    if (!is_null(row[0])) list.values.push_back(std::move(row[0]));

  std::string sql_type;
  if (const TableInfo* t = catalog().find_table(lb.table)) {
    for (const auto& col : t->columns)
      if (col.name == lb.column_of(attr.attribute)) sql_type = col.sql_type;
  }
  order_members(list.values, list.ordering, sql_type);
  member_cache_[key] = list;
  (void)child_of_scope;
  return list;
}

MemberList CubeSession::members(const CubeBinding& cube, const AttrRef& attr) {
  return fetch_members(cube, resolve_attr(cube, attr), nullptr, false);
}

MemberPath CubeSession::member(const CubeBinding& cube, const AttrRef& attr, const Value& value) {
  AttrRef resolved = resolve_attr(cube, attr);
  const auto& dim = resolve_dimension(cube, resolved.dimension);
  const auto& lb = resolve_level(dim, resolved.level);
  // Eager existence check against the requested attribute.
  auto list = fetch_members(cube, resolved, nullptr, false);
  bool found = false;
  for (const auto& v : list.values)
    if (value_equal(v, value)) {
      found = true;
      break;
    }
  if (!found)
    throw Error(ErrorCode::UnknownMember,
                "'" + to_display(value) + "' is not a member of level '" + resolved.level + "'");

  // Paths descend by member value; translate non-member attributes.
  Value anchor = value;
  if (resolved.attribute != lb.member_attr) {
    ResultSet rs = driver_->execute(
        "SELECT DISTINCT " + quote_ident(lb.column_of(lb.member_attr)) + " FROM " +
            quote_ident(lb.table) + " WHERE " + quote_ident(lb.column_of(resolved.attribute)) +
            " = ?",
        {value});
    if (rs.rows.size() != 1)
      throw Error(ErrorCode::AmbiguousLabel, "attribute value '" + to_display(value) +
                                                 "' does not name a single member of level '" +
                                                 resolved.level + "'");
    anchor = rs.rows[0][0];
  }
  MemberPath path;
  path.dimension = resolved.dimension;
  path.descent = {{resolved.level, anchor}};
  return path;
}

MemberPath CubeSession::member(const CubeBinding& cube, const MemberPath& parent,
                               const Value& value) {
  const auto& dim = resolve_dimension(cube, parent.dimension);
  int idx = dim.level_index(parent.resolved_level());
  if (idx <= 0)
    throw Error(ErrorCode::NoChildLevel,
                "level '" + parent.resolved_level() + "' has no child level");
  const auto& child = dim.level_bindings[static_cast<std::size_t>(idx) - 1];

  MemberPath path = parent;
  path.descent.emplace_back(child.level.name, value);
  AttrRef child_ref{dim.role_name, child.level.name, child.member_attr};
  auto list = fetch_members(cube, child_ref, &path, true);
  for (const auto& v : list.values)
    if (value_equal(v, value)) return path;
  throw Error(ErrorCode::UnknownMember, "'" + to_display(value) + "' is not a member of level '" +
                                            child.level.name + "' under the given path");
}

MemberList CubeSession::children(const CubeBinding& cube, const MemberPath& path) {
  const auto& dim = resolve_dimension(cube, path.dimension);
  int idx = dim.level_index(path.resolved_level());
  if (idx < 0) throw Error(ErrorCode::UnknownLevel, path.resolved_level());
  if (idx == 0)
    throw Error(ErrorCode::NoChildLevel, "level '" + path.resolved_level() + "' is the bottom level");
  const auto& child = dim.level_bindings[static_cast<std::size_t>(idx) - 1];
  AttrRef child_ref{dim.role_name, child.level.name, child.member_attr};
  return fetch_members(cube, child_ref, &path, true);
}

}  // namespace cubekit
