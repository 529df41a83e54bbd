// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cubekit/bench.hpp"
#include "cubekit/view_builder.hpp"

namespace cubekit {

namespace {

struct ValueEq {
  bool operator()(const Value& a, const Value& b) const { return value_equal(a, b); }
};

/// Column-major table; rows only exist implicitly.
struct MemTable {
  std::vector<std::string> names;
  std::vector<std::vector<Value>> cols;

  std::size_t nrows() const { return cols.empty() ? 0 : cols[0].size(); }

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw Error(ErrorCode::Internal, "baseline table has no column '" + name + "'");
  }
};

MemTable from_result(ResultSet&& rs) {
  MemTable t;
  t.names = std::move(rs.columns);
  t.cols.resize(t.names.size());
  for (auto& c : t.cols) c.reserve(rs.rows.size());
  for (auto& row : rs.rows)
    for (std::size_t i = 0; i < row.size(); ++i) t.cols[i].push_back(std::move(row[i]));
  return t;
}

std::string q(const std::string& ident) { return "\"" + ident + "\""; }

/// Single-table SELECT of just the needed columns (renamed on arrival).
MemTable load_table(CubeSession& session, const std::string& table,
                    const std::vector<std::string>& columns,
                    const std::vector<std::string>& out_names, double* db_seconds) {
  std::ostringstream sql;
  sql << "SELECT ";
  for (std::size_t i = 0; i < columns.size(); ++i) sql << (i ? ", " : "") << q(columns[i]);
  sql << " FROM " << q(table);
  ResultSet rs = session.driver().execute(sql.str(), {});
  if (db_seconds) *db_seconds += rs.db_seconds;
  MemTable t = from_result(std::move(rs));
  t.names = out_names;
  return t;
}

/// Inner hash join; right key column is dropped from the output.
MemTable hash_join(const MemTable& left, const std::string& left_key, const MemTable& right,
                   const std::string& right_key) {
  std::size_t lk = left.col(left_key);
  std::size_t rk = right.col(right_key);

  std::unordered_map<Value, std::size_t, ValueHash, ValueEq> index;
  index.reserve(right.nrows());
  for (std::size_t r = 0; r < right.nrows(); ++r) index.emplace(right.cols[rk][r], r);

  MemTable out;
  out.names = left.names;
  std::vector<std::size_t> right_cols;
  for (std::size_t c = 0; c < right.names.size(); ++c)
    if (c != rk) {
      right_cols.push_back(c);
      out.names.push_back(right.names[c]);
    }
  out.cols.resize(out.names.size());

  std::vector<std::size_t> matches;
  matches.reserve(left.nrows());
  for (std::size_t r = 0; r < left.nrows(); ++r) {
    auto it = index.find(left.cols[lk][r]);
    if (it != index.end()) matches.push_back(r);
  }
  for (std::size_t c = 0; c < left.cols.size(); ++c) {
    out.cols[c].reserve(matches.size());
    for (std::size_t r : matches) out.cols[c].push_back(left.cols[c][r]);
  }
  for (std::size_t i = 0; i < right_cols.size(); ++i) {
    auto& dst = out.cols[left.cols.size() + i];
    dst.reserve(matches.size());
    for (std::size_t r : matches)
      dst.push_back(right.cols[right_cols[i]][index.find(left.cols[lk][r])->second]);
  }
  return out;
}

void collect_columns(const MeasureExpr& e, std::vector<std::string>& out) {
  switch (e.kind) {
    case MeasureExpr::Kind::Column:
      if (std::find(out.begin(), out.end(), e.column) == out.end()) out.push_back(e.column);
      break;
    case MeasureExpr::Kind::Binary:
      collect_columns(*e.lhs, out);
      collect_columns(*e.rhs, out);
      break;
    default:
      break;
  }
}

/// Which columns each (dimension, level) must contribute, and the fact
/// columns the view touches.
struct NeededColumns {
  std::vector<const DimensionBinding*> dims;
  // per dim role: per level: referenced attribute columns (no keys)
  std::unordered_map<std::string, std::unordered_map<std::string, std::vector<std::string>>> attrs;
  std::vector<std::string> fact;
};

NeededColumns collect_needed(const CubeView& view) {
  NeededColumns need;
  auto add_dim = [&](const std::string& name) {
    const DimensionBinding* dim = view.cube->find_dimension(name);
    if (!dim) throw Error(ErrorCode::Internal, "unresolved dimension '" + name + "'");
    for (const auto* d : need.dims)
      if (d == dim) return dim;
    need.dims.push_back(dim);
    need.fact.push_back(dim->fact_fk_column);
    return dim;
  };
  auto add_attr = [&](const AttrRef& ref) {
    const DimensionBinding* dim = add_dim(ref.dimension);
    const LevelBinding* lb = dim->find_level(ref.level);
    if (!lb) throw Error(ErrorCode::Internal, "unresolved level '" + ref.level + "'");
    auto& cols = need.attrs[dim->role_name][lb->level.name];
    const std::string& col = lb->column_of(ref.attribute);
    if (std::find(cols.begin(), cols.end(), col) == cols.end()) cols.push_back(col);
  };
  for (const auto& ax : view.axes) add_attr(ax.attr);
  std::vector<const Predicate*> atoms;
  collect_atoms(*view.predicate, atoms);
  for (const auto* a : atoms) add_attr(a->attr);
  for (const auto& m : view.measures) {
    std::vector<std::string> cols;
    collect_columns(*m.measure.expr, cols);
    for (auto& c : cols)
      if (std::find(need.fact.begin(), need.fact.end(), c) == need.fact.end())
        need.fact.push_back(c);
  }
  return need;
}

/// Level-table column plan: physical names and their qualified output names.
struct LevelLoad {
  std::vector<std::string> columns;
  std::vector<std::string> out_names;
};

LevelLoad level_plan(const NeededColumns& need, const DimensionBinding& dim,
                     const LevelBinding& lb) {
  LevelLoad plan;
  auto add = [&](const std::string& col) {
    if (std::find(plan.columns.begin(), plan.columns.end(), col) != plan.columns.end()) return;
    plan.columns.push_back(col);
    plan.out_names.push_back(dim.role_name + "." + lb.level.name + "." + col);
  };
  add(lb.key_column);
  if (lb.fk_column) add(*lb.fk_column);
  auto dit = need.attrs.find(dim.role_name);
  if (dit != need.attrs.end()) {
    auto lit = dit->second.find(lb.level.name);
    if (lit != dit->second.end())
      for (const auto& c : lit->second) add(c);
  }
  return plan;
}

std::string qualified(const DimensionBinding& dim, const LevelBinding& lb,
                      const std::string& col) {
  return dim.role_name + "." + lb.level.name + "." + col;
}

// ---------------------------------------------------------------------------
// The three join strategies
// ---------------------------------------------------------------------------

MemTable load_fact(const CubeView& view, const NeededColumns& need, CubeSession& session,
                   double* db) {
  return load_table(session, view.cube->fact_table, need.fact, need.fact, db);
}

MemTable join_fact_first(const CubeView& view, const NeededColumns& need, CubeSession& session,
                         double* db) {
  MemTable cur = load_fact(view, need, session, db);
  for (const auto* dim : need.dims) {
    std::string left_key = dim->fact_fk_column;
    for (const auto& lb : dim->level_bindings) {
      LevelLoad plan = level_plan(need, *dim, lb);
      MemTable right = load_table(session, lb.table, plan.columns, plan.out_names, db);
      cur = hash_join(cur, left_key, right, qualified(*dim, lb, lb.key_column));
      if (lb.fk_column) left_key = qualified(*dim, lb, *lb.fk_column);
    }
  }
  return cur;
}

MemTable join_dimensions_first(const CubeView& view, const NeededColumns& need,
                               CubeSession& session, double* db) {
  std::vector<MemTable> denorm;
  for (const auto* dim : need.dims) {
    MemTable dtab;
    for (std::size_t i = 0; i < dim->level_bindings.size(); ++i) {
      const auto& lb = dim->level_bindings[i];
      LevelLoad plan = level_plan(need, *dim, lb);
      MemTable level = load_table(session, lb.table, plan.columns, plan.out_names, db);
      if (i == 0) {
        dtab = std::move(level);
      } else {
        const auto& child = dim->level_bindings[i - 1];
        dtab = hash_join(dtab, qualified(*dim, child, *child.fk_column), level,
                         qualified(*dim, lb, lb.key_column));
      }
    }
    denorm.push_back(std::move(dtab));
  }
  MemTable cur = load_fact(view, need, session, db);
  for (std::size_t i = 0; i < need.dims.size(); ++i) {
    const auto* dim = need.dims[i];
    const auto& bottom = dim->level_bindings.front();
    // The bottom key survived the chain joins; join the fact against it.
    MemTable joined = hash_join(cur, dim->fact_fk_column, denorm[i],
                                qualified(*dim, bottom, bottom.key_column));
    cur = std::move(joined);
  }
  return cur;
}

MemTable join_in_sql(const CubeView& view, const NeededColumns& need, CubeSession& session,
                     double* db) {
  std::ostringstream sql;
  std::vector<std::string> out_names;
  sql << "SELECT ";
  bool first = true;
  auto select_col = [&](const std::string& alias, const std::string& col,
                        const std::string& out) {
    sql << (first ? "" : ", ") << q(alias) << "." << q(col);
    first = false;
    out_names.push_back(out);
  };
  for (const auto& c : need.fact) select_col(view.cube->fact_table, c, c);
  for (const auto* dim : need.dims)
    for (const auto& lb : dim->level_bindings) {
      LevelLoad plan = level_plan(need, *dim, lb);
      for (std::size_t i = 0; i < plan.columns.size(); ++i)
        select_col(dim->role_name + "_" + lb.table, plan.columns[i], plan.out_names[i]);
    }
  sql << " FROM " << q(view.cube->fact_table);
  for (const auto* dim : need.dims) {
    std::string parent_ref = q(view.cube->fact_table) + "." + q(dim->fact_fk_column);
    for (const auto& lb : dim->level_bindings) {
      std::string alias = dim->role_name + "_" + lb.table;
      sql << " JOIN " << q(lb.table) << " AS " << q(alias) << " ON " << q(alias) << "."
          << q(lb.key_column) << " = " << parent_ref;
      if (lb.fk_column) parent_ref = q(alias) + "." + q(*lb.fk_column);
    }
  }
  ResultSet rs = session.driver().execute(sql.str(), {});
  if (db) *db += rs.db_seconds;
  MemTable t = from_result(std::move(rs));
  t.names = out_names;
  return t;
}

// ---------------------------------------------------------------------------
// Shared filter / aggregate / pivot tail
// ---------------------------------------------------------------------------

bool eval_pred(const Predicate& p, const MemTable& t,
               const std::unordered_map<std::string, std::size_t>& attr_col, std::size_t row) {
  switch (p.kind) {
    case Predicate::Kind::True:
      return true;
    case Predicate::Kind::False:
      return false;
    case Predicate::Kind::Atom: {
      std::size_t c = attr_col.at(p.attr.dimension + "." + p.attr.level + "." + p.attr.attribute);
      auto cmp = compare(t.cols[c][row], p.literal);
      if (!cmp) return false;
      switch (p.op) {
        case CompareOp::Lt: return *cmp < 0;
        case CompareOp::Le: return *cmp <= 0;
        case CompareOp::Eq: return *cmp == 0;
        case CompareOp::Ne: return *cmp != 0;
        case CompareOp::Ge: return *cmp >= 0;
        case CompareOp::Gt: return *cmp > 0;
      }
      return false;
    }
    case Predicate::Kind::And:
      return eval_pred(*p.lhs, t, attr_col, row) && eval_pred(*p.rhs, t, attr_col, row);
    case Predicate::Kind::Or:
      return eval_pred(*p.lhs, t, attr_col, row) || eval_pred(*p.rhs, t, attr_col, row);
    case Predicate::Kind::Group:
      return eval_pred(*p.lhs, t, attr_col, row);
  }
  return false;
}

void add_to_sum(Value& sum, const Value& v) {
  if (is_null(v)) return;
  if (is_null(sum)) {
    sum = v;
    return;
  }
  if (std::holds_alternative<std::int64_t>(sum) && std::holds_alternative<std::int64_t>(v))
    sum = std::get<std::int64_t>(sum) + std::get<std::int64_t>(v);
  else
    sum = as_double(sum) + as_double(v);
}

std::string group_key_of(const std::vector<Value>& vals) {
  std::string key;
  for (const auto& v : vals) {
    key += static_cast<char>('0' + v.index());
    key += to_display(v);
    key += '\x1f';
  }
  return key;
}

PivotTable aggregate_and_pivot(const CubeView& view, const MemTable& t) {
  // AttrRef -> joined column ("role.level.column").
  std::unordered_map<std::string, std::size_t> attr_col;
  auto bind_attr = [&](const AttrRef& ref) {
    const DimensionBinding* dim = view.cube->find_dimension(ref.dimension);
    const LevelBinding* lb = dim->find_level(ref.level);
    attr_col[ref.dimension + "." + ref.level + "." + ref.attribute] =
        t.col(qualified(*dim, *lb, lb->column_of(ref.attribute)));
  };
  for (const auto& ax : view.axes) bind_attr(ax.attr);
  std::vector<const Predicate*> atoms;
  collect_atoms(*view.predicate, atoms);
  for (const auto* a : atoms) bind_attr(a->attr);

  std::vector<std::size_t> axis_cols;
  std::vector<std::unordered_set<Value, ValueHash, ValueEq>> axis_sets;
  for (const auto& ax : view.axes) {
    axis_cols.push_back(
        attr_col.at(ax.attr.dimension + "." + ax.attr.level + "." + ax.attr.attribute));
    axis_sets.emplace_back(ax.members.begin(), ax.members.end());
  }

  struct Group {
    std::vector<Value> axis_values;
    std::vector<Value> sums;
  };
  std::unordered_map<std::string, Group> groups;

  std::vector<Value> fact_row(t.names.size());
  for (std::size_t r = 0; r < t.nrows(); ++r) {
    bool included = true;
    for (std::size_t a = 0; a < axis_cols.size() && included; ++a)
      included = axis_sets[a].count(t.cols[axis_cols[a]][r]) > 0;
    if (!included || !eval_pred(*view.predicate, t, attr_col, r)) continue;

    std::vector<Value> axis_values;
    for (std::size_t c : axis_cols) axis_values.push_back(t.cols[c][r]);
    auto [it, fresh] = groups.try_emplace(group_key_of(axis_values));
    if (fresh) {
      it->second.axis_values = std::move(axis_values);
      it->second.sums.assign(view.measures.size(), Value{});
    }
    for (std::size_t c = 0; c < t.names.size(); ++c) fact_row[c] = t.cols[c][r];
    for (std::size_t m = 0; m < view.measures.size(); ++m)
      add_to_sum(it->second.sums[m],
                 eval_measure_expr(*view.measures[m].measure.expr, t.names, fact_row));
  }

  ResultSet rs;
  for (const auto& ax : view.axes) rs.columns.push_back(ax.attr.attribute);
  for (const auto& m : view.measures) rs.columns.push_back(m.alias);
  for (auto& [key, g] : groups) {
    std::vector<Value> row = std::move(g.axis_values);
    for (auto& s : g.sums) row.push_back(std::move(s));
    rs.rows.push_back(std::move(row));
  }
  return pivot(rs, view);
}

}  // namespace

const char* to_string(BenchImpl impl) {
  switch (impl) {
    case BenchImpl::Engine: return "engine";
    case BenchImpl::Jff: return "jff";
    case BenchImpl::Jdf: return "jdf";
    case BenchImpl::Sqlj: return "sqlj";
  }
  return "engine";
}

BenchImpl bench_impl_from(const std::string& name) {
  if (name == "engine") return BenchImpl::Engine;
  if (name == "jff") return BenchImpl::Jff;
  if (name == "jdf") return BenchImpl::Jdf;
  if (name == "sqlj") return BenchImpl::Sqlj;
  throw Error(ErrorCode::ParseError, "unknown implementation '" + name + "'");
}

PivotTable run_impl(BenchImpl impl, const CubeView& view, CubeSession& session,
                    double* db_seconds_out) {
  if (impl == BenchImpl::Engine) {
    // The session is externally owned; alias it without taking ownership.
    std::shared_ptr<CubeSession> alias(&session, [](CubeSession*) {});
    ViewBuilder builder(alias, view.cube);
    OutputResult res = builder.output(view);
    if (db_seconds_out) *db_seconds_out += res.db_seconds;
    return std::move(res.table);
  }
  NeededColumns need = collect_needed(view);
  MemTable joined;
  switch (impl) {
    case BenchImpl::Jff: joined = join_fact_first(view, need, session, db_seconds_out); break;
    case BenchImpl::Jdf: joined = join_dimensions_first(view, need, session, db_seconds_out); break;
    default: joined = join_in_sql(view, need, session, db_seconds_out); break;
  }
  return aggregate_and_pivot(view, joined);
}

}  // namespace cubekit
