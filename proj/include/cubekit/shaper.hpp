// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "cubekit/dbio.hpp"
#include "cubekit/model.hpp"

namespace cubekit {

/// Dense pivot grid. Column headers are hierarchical: outermost level is the
/// highest axis >= 2, then axis-0 members, measure aliases innermost. Every
/// header level spans the full grid width (labels repeat per block).
struct PivotTable {
  std::vector<std::vector<std::string>> column_header;
  /// Distinct labels per header level; the span of one label at level i is
  /// the product of the sizes of the levels below it.
  std::vector<std::size_t> level_sizes;
  std::vector<std::string> row_labels;  // empty for a single unlabeled row
  std::vector<std::vector<Value>> cells;  // height x width, monostate = no value

  std::size_t width() const { return column_header.empty() ? 0 : column_header.back().size(); }
  std::size_t height() const { return cells.size(); }
};

enum class RenderFormat { Pretty, Csv };

/// Shapes the grouped result set into the view's pivot table. Axis member
/// lists must already be explicit (the builder materializes AllMembers axes
/// before compiling). Combinations absent from the result become no-value
/// cells; two group keys sharing one display address raise AmbiguousLabel.
PivotTable pivot(const ResultSet& rs, const CubeView& view);

std::string render(const PivotTable& table, RenderFormat format);

/// Cell-for-cell equality; floats compare within `rel_tol` relative error.
bool tables_equal(const PivotTable& a, const PivotTable& b, double rel_tol = 1e-9);

}  // namespace cubekit
