// SPDX-License-Identifier: Apache-2.0
#include "cubekit/sqlgen.hpp"

#include <map>
#include <sstream>

namespace cubekit {

namespace {

std::string q(const std::string& ident) { return "\"" + ident + "\""; }

std::string render_measure_expr(const MeasureExpr& e, const std::string& fact_alias) {
  switch (e.kind) {
    case MeasureExpr::Kind::Column:
      return q(fact_alias) + "." + q(e.column);
    case MeasureExpr::Kind::Constant: {
      std::ostringstream os;
      os << e.constant;
      return os.str();
    }
    case MeasureExpr::Kind::Binary: {
      const char* op = "+";
      switch (e.op) {
        case MeasureOp::Add: op = "+"; break;
        case MeasureOp::Sub: op = "-"; break;
        case MeasureOp::Mul: op = "*"; break;
        case MeasureOp::Div: op = "/"; break;
      }
      std::string rhs = render_measure_expr(*e.rhs, fact_alias);
      if (e.op == MeasureOp::Div) rhs = "NULLIF(CAST(" + rhs + " AS REAL), 0)";
      return "(" + render_measure_expr(*e.lhs, fact_alias) + " " + op + " " + rhs + ")";
    }
  }
  return "";
}

}  // namespace

SqlGenerator::SqlGenerator(const CubeView& view) : view_(view) {
  // Axes dimensions in axis order, then dimensions referenced only by the
  // predicate.
  auto add_dim = [&](const std::string& name) {
    const DimensionBinding* dim = view_.cube->find_dimension(name);
    if (!dim) throw Error(ErrorCode::UnknownAttribute, "unknown dimension '" + name + "'");
    for (const auto* d : joined_dims_)
      if (d == dim) return;
    joined_dims_.push_back(dim);
  };
  for (const auto& ax : view_.axes) add_dim(ax.attr.dimension);
  std::vector<const Predicate*> atoms;
  collect_atoms(*view_.predicate, atoms);
  for (const auto* atom : atoms) add_dim(atom->attr.dimension);

  std::map<std::string, int> table_uses;
  for (const auto* dim : joined_dims_)
    for (const auto& lb : dim->level_bindings) ++table_uses[lb.table];
  for (const auto& [table, uses] : table_uses)
    if (uses > 1 || table == view_.cube->fact_table) qualify_aliases_ = true;
}

std::string SqlGenerator::alias_for(const DimensionBinding& dim, const LevelBinding& lb) const {
  if (qualify_aliases_) return dim.role_name + "_" + lb.table;
  return lb.table;
}

std::string SqlGenerator::attr_sql(const AttrRef& ref) const {
  const DimensionBinding* dim = view_.cube->find_dimension(ref.dimension);
  if (!dim) throw Error(ErrorCode::UnknownAttribute, "unknown dimension '" + ref.dimension + "'");
  const LevelBinding* lb = dim->find_level(ref.level);
  if (!lb) throw Error(ErrorCode::UnknownLevel, "unknown level '" + ref.level + "'");
  return q(alias_for(*dim, *lb)) + "." + q(lb->column_of(ref.attribute));
}

std::string SqlGenerator::from_clause() const {
  std::ostringstream os;
  for (const auto* dim : joined_dims_) {
    for (std::size_t i = 0; i < dim->level_bindings.size(); ++i) {
      const auto& lb = dim->level_bindings[i];
      std::string alias = alias_for(*dim, lb);
      std::string parent_ref;
      if (i == 0) {
        parent_ref = q(view_.cube->fact_table) + "." + q(dim->fact_fk_column);
      } else {
        const auto& child = dim->level_bindings[i - 1];
        parent_ref = q(alias_for(*dim, child)) + "." + q(*child.fk_column);
      }
      os << "\n    JOIN " << q(lb.table) << " AS " << q(alias) << " ON " << q(alias) << "."
         << q(lb.key_column) << " = " << parent_ref;
    }
  }
  return os.str();
}

std::string SqlGenerator::inclusion_clause(const MemberResolver& resolve,
                                           std::vector<Value>& params) const {
  if (view_.axes.empty()) return "TRUE";
  std::ostringstream os;
  for (std::size_t i = 0; i < view_.axes.size(); ++i) {
    const auto& ax = view_.axes[i];
    std::vector<Value> members = ax.all_members ? resolve(ax) : ax.members;
    if (i > 0) os << "\n    AND ";
    os << attr_sql(ax.attr) << " IN (";
    for (std::size_t j = 0; j < members.size(); ++j) {
      os << (j ? ", ?" : "?");
      params.push_back(members[j]);
    }
    os << ")";
  }
  return os.str();
}

void SqlGenerator::render_predicate(const Predicate& p, bool and_operand, std::string& out,
                                    std::vector<Value>& params) const {
  switch (p.kind) {
    case Predicate::Kind::True: out += "TRUE"; break;
    case Predicate::Kind::False: out += "FALSE"; break;
    case Predicate::Kind::Atom:
      out += attr_sql(p.attr);
      out += std::string(" ") + to_sql(p.op) + " ?";
      params.push_back(p.literal);
      break;
    case Predicate::Kind::And:
      render_predicate(*p.lhs, true, out, params);
      out += " AND ";
      render_predicate(*p.rhs, true, out, params);
      break;
    case Predicate::Kind::Or:
      if (and_operand) out += "(";
      render_predicate(*p.lhs, false, out, params);
      out += " OR ";
      render_predicate(*p.rhs, false, out, params);
      if (and_operand) out += ")";
      break;
    case Predicate::Kind::Group:
      out += "(";
      render_predicate(*p.lhs, false, out, params);
      out += ")";
      break;
  }
}

std::string SqlGenerator::predicate_clause(std::vector<Value>& params) const {
  if (view_.predicate->is_true()) return "";
  std::string out;
  render_predicate(*view_.predicate, false, out, params);
  return out;
}

QueryPlan SqlGenerator::generate(const MemberResolver& resolve) const {
  if (view_.measures.empty())
    throw Error(ErrorCode::NoMeasures, "view has no measures");
  QueryPlan plan;
  std::ostringstream os;
  os << "SELECT";
  bool first = true;
  for (const auto& ax : view_.axes) {
    os << (first ? " " : ",\n       ") << attr_sql(ax.attr);
    first = false;
    plan.columns.push_back({ax.attr.attribute, false});
  }
  for (const auto& m : view_.measures) {
    os << (first ? " " : ",\n       ");
    first = false;
    os << "SUM(" << render_measure_expr(*m.measure.expr, view_.cube->fact_table) << ") AS "
       << q(m.alias);
    plan.columns.push_back({m.alias, true});
  }
  os << "\nFROM\n    " << q(view_.cube->fact_table);
  os << from_clause();

  std::string inclusion = inclusion_clause(resolve, plan.params);
  std::string predicate = predicate_clause(plan.params);
  os << "\nWHERE\n    " << inclusion;
  if (!predicate.empty()) os << "\n    AND (" << predicate << ")";

  if (!view_.axes.empty()) {
    os << "\nGROUP BY\n    ";
    for (std::size_t i = 0; i < view_.axes.size(); ++i) {
      const auto& ax = view_.axes[i];
      const DimensionBinding* dim = view_.cube->find_dimension(ax.attr.dimension);
      const LevelBinding* lb = dim->find_level(ax.attr.level);
      if (i > 0) os << ",\n    ";
      os << attr_sql(ax.attr) << ", " << q(alias_for(*dim, *lb)) << "." << q(lb->key_column);
    }
  }
  plan.sql = os.str();
  return plan;
}

QueryPlan generate(const CubeView& view, const MemberResolver& resolve) {
  return SqlGenerator(view).generate(resolve);
}

}  // namespace cubekit
