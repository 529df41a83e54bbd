// SPDX-License-Identifier: Apache-2.0
#include "cubekit/shaper.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cubekit {

namespace {

// Header axes outermost-first: highest axis >= 2 down to 2, then axis 0.
std::vector<std::size_t> header_axis_order(std::size_t n_axes) {
  std::vector<std::size_t> order;
  for (std::size_t a = n_axes; a-- > 2;) order.push_back(a);
  if (n_axes >= 1) order.push_back(0);
  return order;
}

std::size_t member_index(const std::vector<Value>& members, const Value& v) {
  for (std::size_t i = 0; i < members.size(); ++i)
    if (value_equal(members[i], v)) return i;
  throw Error(ErrorCode::Internal,
              "result value '" + to_display(v) + "' is outside the axis member list");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

PivotTable pivot(const ResultSet& rs, const CubeView& view) {
  for (const auto& ax : view.axes)
    if (ax.all_members)
      throw Error(ErrorCode::Internal, "axis member list not materialized before pivot");

  PivotTable t;
  auto order = header_axis_order(view.axes.size());

  // level_sizes: one entry per header axis, plus the measures level.
  for (std::size_t a : order) t.level_sizes.push_back(view.axes[a].members.size());
  t.level_sizes.push_back(view.measures.size());

  std::size_t width = 1;
  for (std::size_t s : t.level_sizes) width *= s;

  // Repeat each level's labels across the full width.
  std::vector<std::size_t> strides(t.level_sizes.size());  // span of one label
  {
    std::size_t span = 1;
    for (std::size_t i = t.level_sizes.size(); i-- > 0;) {
      strides[i] = span;
      span *= t.level_sizes[i];
    }
  }
  for (std::size_t lvl = 0; lvl < t.level_sizes.size(); ++lvl) {
    std::vector<std::string> labels(width);
    for (std::size_t c = 0; c < width; ++c) {
      std::size_t idx = (c / strides[lvl]) % t.level_sizes[lvl];
      if (lvl + 1 == t.level_sizes.size())
        labels[c] = view.measures[idx].alias;
      else
        labels[c] = to_display(view.axes[order[lvl]].members[idx]);
    }
    t.column_header.push_back(std::move(labels));
  }

  std::size_t height = 1;
  if (view.axes.size() >= 2) {
    const auto& rows_axis = view.axes[1];
    height = std::max<std::size_t>(1, rows_axis.members.size());
    for (const auto& m : rows_axis.members) t.row_labels.push_back(to_display(m));
  }

  t.cells.assign(height, std::vector<Value>(width));
  std::vector<std::vector<bool>> written(height, std::vector<bool>(width, false));

  // Result columns: axis values in axis order, then one column per measure.
  for (const auto& row : rs.rows) {
    std::size_t r = 0;
    if (view.axes.size() >= 2) r = member_index(view.axes[1].members, row[1]);
    std::size_t block = 0;  // column offset before the measure index
    for (std::size_t lvl = 0; lvl < order.size(); ++lvl) {
      std::size_t a = order[lvl];
      block += member_index(view.axes[a].members, row[a]) * strides[lvl];
    }
    for (std::size_t m = 0; m < view.measures.size(); ++m) {
      std::size_t c = block + m;
      if (written[r][c]) {
        std::string label = view.axes.empty() ? view.measures[m].alias : to_display(row[0]);
        throw Error(ErrorCode::AmbiguousLabel,
                    "two result groups share the display address '" + label + "'");
      }
      written[r][c] = true;
      t.cells[r][c] = row[view.axes.size() + m];
    }
  }
  return t;
}

namespace {

std::string render_csv(const PivotTable& t) {
  std::ostringstream os;
  bool labeled = !t.row_labels.empty();
  for (const auto& level : t.column_header) {
    if (labeled) os << ",";
    for (std::size_t c = 0; c < level.size(); ++c) os << (c ? "," : "") << csv_field(level[c]);
    os << "\n";
  }
  for (std::size_t r = 0; r < t.cells.size(); ++r) {
    if (labeled) os << csv_field(t.row_labels[r]) << ",";
    for (std::size_t c = 0; c < t.cells[r].size(); ++c) {
      if (c) os << ",";
      if (!is_null(t.cells[r][c])) os << csv_field(to_display(t.cells[r][c]));
    }
    os << "\n";
  }
  return os.str();
}

std::string render_pretty(const PivotTable& t) {
  std::size_t width = t.width();
  bool labeled = !t.row_labels.empty();

  std::size_t label_w = 0;
  if (labeled || t.height() > 0)
    for (const auto& l : t.row_labels) label_w = std::max(label_w, l.size());

  std::vector<std::size_t> col_w(width, 1);
  if (!t.column_header.empty())
    for (std::size_t c = 0; c < width; ++c)
      col_w[c] = std::max(col_w[c], t.column_header.back()[c].size());
  for (const auto& row : t.cells)
    for (std::size_t c = 0; c < width; ++c)
      col_w[c] = std::max(col_w[c], to_display(row[c]).size());

  // Widen the last column of a span when its label doesn't fit.
  std::vector<std::size_t> spans(t.level_sizes.size(), 1);
  for (std::size_t i = t.level_sizes.size(); i-- > 0;) {
    std::size_t below = 1;
    for (std::size_t j = i + 1; j < t.level_sizes.size(); ++j) below *= t.level_sizes[j];
    spans[i] = below;
  }
  for (std::size_t lvl = 0; lvl < t.column_header.size(); ++lvl) {
    for (std::size_t c = 0; c < width; c += spans[lvl]) {
      std::size_t have = spans[lvl] - 1;  // interior separators
      for (std::size_t k = c; k < c + spans[lvl] && k < width; ++k) have += col_w[k] + 2;
      std::size_t need = t.column_header[lvl][c].size() + 2;
      if (need > have) col_w[std::min(c + spans[lvl], width) - 1] += need - have;
    }
  }

  auto rule = [&]() {
    std::string s = "+";
    if (labeled) s += std::string(label_w + 2, '-') + "+";
    for (std::size_t c = 0; c < width; ++c) s += std::string(col_w[c] + 2, '-') + "+";
    return s + "\n";
  };
  auto pad = [](const std::string& s, std::size_t w) {
    return " " + s + std::string(w - s.size() + 1, ' ');
  };

  std::ostringstream os;
  os << rule();
  for (std::size_t lvl = 0; lvl < t.column_header.size(); ++lvl) {
    os << "|";
    if (labeled) os << std::string(label_w + 2, ' ') << "|";
    for (std::size_t c = 0; c < width; c += spans[lvl]) {
      std::size_t w = spans[lvl] - 1;
      for (std::size_t k = c; k < c + spans[lvl] && k < width; ++k) w += col_w[k] + 2;
      os << pad(t.column_header[lvl][c], w - 2) << "|";
    }
    os << "\n";
  }
  if (!t.column_header.empty()) os << rule();
  for (std::size_t r = 0; r < t.cells.size(); ++r) {
    os << "|";
    if (labeled) os << pad(t.row_labels[r], label_w) << "|";
    for (std::size_t c = 0; c < width; ++c) os << pad(to_display(t.cells[r][c]), col_w[c]) << "|";
    os << "\n";
  }
  os << rule();
  return os.str();
}

}  // namespace

std::string render(const PivotTable& table, RenderFormat format) {
  return format == RenderFormat::Csv ? render_csv(table) : render_pretty(table);
}

bool tables_equal(const PivotTable& a, const PivotTable& b, double rel_tol) {
  if (a.column_header != b.column_header || a.row_labels != b.row_labels) return false;
  if (a.cells.size() != b.cells.size()) return false;
  for (std::size_t r = 0; r < a.cells.size(); ++r) {
    if (a.cells[r].size() != b.cells[r].size()) return false;
    for (std::size_t c = 0; c < a.cells[r].size(); ++c) {
      const Value& x = a.cells[r][c];
      const Value& y = b.cells[r][c];
      if (is_null(x) != is_null(y)) return false;
      if (is_null(x)) continue;
      if (is_numeric(x) && is_numeric(y)) {
        double dx = as_double(x), dy = as_double(y);
        double scale = std::max({std::fabs(dx), std::fabs(dy), 1.0});
        if (std::fabs(dx - dy) > rel_tol * scale) return false;
      } else if (!value_equal(x, y)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace cubekit
