// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubekit/dbio.hpp"
#include "cubekit/model.hpp"

namespace cubekit {

struct InferenceReport {
  CubeBinding cube;
  std::vector<std::string> warnings;
};

/// Largest table wins; ties break lexicographically (with a warning).
std::string find_fact_table(const CatalogSnapshot& catalog, std::vector<std::string>* warnings = nullptr);

/// One entry per fact-table FK, in column order. Two FKs to the same table
/// yield two role-playing entries.
std::vector<ForeignKey> find_bottom_levels(const CatalogSnapshot& catalog, const std::string& fact);

/// Columns of `table` minus PK and FK columns, in definition order.
std::vector<std::string> find_non_key_columns(const CatalogSnapshot& catalog, const std::string& table);

/// Splits non-key columns into the member column (closest to the table name
/// by case-insensitive Levenshtein) and the remaining attribute columns.
std::pair<std::string, std::vector<std::string>> find_level_attributes(
    const std::vector<std::string>& cols, const std::string& table_name,
    std::vector<std::string>* warnings = nullptr);

/// The table referenced by `table`'s FK, if any. Multiple outgoing FKs take
/// the first in column order and record a warning.
std::optional<std::string> find_next_table(const CatalogSnapshot& catalog, const std::string& table,
                                           std::vector<std::string>* warnings = nullptr);

/// Every numeric non-key fact column becomes a SUM measure.
std::vector<MeasureSchema> find_measures(const CatalogSnapshot& catalog, const std::string& fact);

/// Binds one level table: key/FK columns from the catalog, member vs
/// attribute split per find_level_attributes.
LevelBinding bind_level_table(const CatalogSnapshot& catalog, const std::string& table,
                              std::vector<std::string>* warnings = nullptr);

InferenceReport infer_cube(const CatalogSnapshot& catalog);

}  // namespace cubekit
