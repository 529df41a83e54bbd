// SPDX-License-Identifier: Apache-2.0
#include "cubekit/inference.hpp"

#include <algorithm>

#include "cubekit/levenshtein.hpp"

namespace cubekit {

std::string find_fact_table(const CatalogSnapshot& catalog, std::vector<std::string>* warnings) {
  if (catalog.tables.empty()) throw Error(ErrorCode::NothingToInfer, "catalog is empty");
  const TableInfo* best = nullptr;
  bool tie = false;
  for (const auto& t : catalog.tables) {
    if (!best || t.row_count > best->row_count) {
      best = &t;
      tie = false;
    } else if (t.row_count == best->row_count) {
      tie = true;
      if (t.name < best->name) best = &t;
    }
  }
  if (tie && warnings)
    warnings->push_back("fact-table cardinality tie; picked '" + best->name + "' lexicographically");
  return best->name;
}

std::vector<ForeignKey> find_bottom_levels(const CatalogSnapshot& catalog, const std::string& fact) {
  auto fks = catalog.fks_from(fact);
  if (fks.empty())
    throw Error(ErrorCode::NothingToInfer, "fact table '" + fact + "' has no foreign keys");
  return fks;
}

std::vector<std::string> find_non_key_columns(const CatalogSnapshot& catalog, const std::string& table) {
  const TableInfo* t = catalog.find_table(table);
  if (!t) throw Error(ErrorCode::MissingTable, table);
  std::vector<std::string> out;
  for (const auto& col : t->columns)
    if (!catalog.is_key_column(table, col.name)) out.push_back(col.name);
  return out;
}

std::pair<std::string, std::vector<std::string>> find_level_attributes(
    const std::vector<std::string>& cols, const std::string& table_name,
    std::vector<std::string>* warnings) {
  std::string target = to_lower(table_name);
  std::size_t best = 0, best_dist = SIZE_MAX;
  bool tie = false;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    std::size_t d = levenshtein(to_lower(cols[i]), target);
    if (d < best_dist) {
      best = i;
      best_dist = d;
      tie = false;
    } else if (d == best_dist) {
      tie = true;
    }
  }
  if (tie && warnings)
    warnings->push_back("member-column tie on '" + table_name + "'; picked '" + cols[best] + "'");
  std::vector<std::string> attrs;
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (i != best) attrs.push_back(cols[i]);
  return {cols[best], attrs};
}

std::optional<std::string> find_next_table(const CatalogSnapshot& catalog, const std::string& table,
                                           std::vector<std::string>* warnings) {
  auto fks = catalog.fks_from(table);
  if (fks.empty()) return std::nullopt;
  if (fks.size() > 1 && warnings)
    warnings->push_back("level table '" + table + "' has multiple FKs; following '" +
                        fks[0].from_column + "'");
  return fks[0].to_table;
}

std::vector<MeasureSchema> find_measures(const CatalogSnapshot& catalog, const std::string& fact) {
  const TableInfo* t = catalog.find_table(fact);
  if (!t) throw Error(ErrorCode::MissingTable, fact);
  std::vector<MeasureSchema> out;
  for (const auto& col : t->columns) {
    if (!col.is_numeric || catalog.is_key_column(fact, col.name)) continue;
    out.push_back({col.name, MeasureExpr::make_column(col.name), AggFunc::Sum});
  }
  return out;
}

LevelBinding bind_level_table(const CatalogSnapshot& catalog, const std::string& table,
                              std::vector<std::string>* warnings) {
  const TableInfo* t = catalog.find_table(table);
  LevelBinding lb;
  lb.table = table;
  lb.key_column = t->primary_key.empty() ? t->columns.front().name : t->primary_key.front();

  auto fks = catalog.fks_from(table);
  if (!fks.empty()) lb.fk_column = fks[0].from_column;

  auto non_key = find_non_key_columns(catalog, table);
  std::string member;
  std::vector<std::string> attrs;
  if (non_key.empty()) {
    // Degenerate level: the key doubles as the member.
    member = lb.key_column;
  } else if (non_key.size() == 1) {
    member = non_key[0];
  } else {
    std::tie(member, attrs) = find_level_attributes(non_key, table, warnings);
  }
  lb.member_attr = member;
  lb.level.name = table;
  lb.level.key_attrs = {lb.key_column};
  lb.level.attrs.push_back(member);
  for (const auto& a : attrs) lb.level.attrs.push_back(a);
  lb.attr_columns.emplace_back(member, member);
  for (const auto& a : attrs) lb.attr_columns.emplace_back(a, a);
  if (member == lb.key_column) lb.attr_columns.back().second = lb.key_column;
  return lb;
}

InferenceReport infer_cube(const CatalogSnapshot& catalog) {
  InferenceReport report;
  std::string fact = find_fact_table(catalog, &report.warnings);
  auto bottoms = find_bottom_levels(catalog, fact);

  CubeBinding cube;
  cube.fact_table = fact;
  cube.name = fact;
  if (!cube.name.empty()) cube.name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cube.name[0])));

  for (const auto& fk : bottoms) {
    DimensionBinding dim;
    dim.fact_fk_column = fk.from_column;
    dim.role_name = fk.from_column;
    dim.schema.name = fk.from_column;

    std::optional<std::string> current = fk.to_table;
    while (current) {
      dim.level_bindings.push_back(bind_level_table(catalog, *current, &report.warnings));
      current = find_next_table(catalog, *current, &report.warnings);
    }
    for (const auto& lb : dim.level_bindings) dim.schema.levels.push_back(lb.level);
    dim.schema.levels.push_back(LevelSchema::all());
    cube.dimensions.push_back(std::move(dim));
  }

  cube.measures = find_measures(catalog, fact);
  if (cube.measures.empty())
    report.warnings.push_back("fact table '" + fact + "' has no numeric non-key columns");
  report.cube = std::move(cube);
  return report;
}

}  // namespace cubekit
