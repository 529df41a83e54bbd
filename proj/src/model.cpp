// SPDX-License-Identifier: Apache-2.0
#include "cubekit/model.hpp"

#include <algorithm>

namespace cubekit {

const std::string& LevelBinding::column_of(const std::string& attr) const {
  for (const auto& [a, c] : attr_columns)
    if (a == attr) return c;
  throw Error(ErrorCode::UnknownAttribute, "no column for attribute '" + attr + "' on level '" + level.name + "'");
}

const LevelBinding* DimensionBinding::find_level(const std::string& level_name) const {
  for (const auto& lb : level_bindings)
    if (lb.level.name == level_name) return &lb;
  return nullptr;
}

int DimensionBinding::level_index(const std::string& level_name) const {
  for (std::size_t i = 0; i < level_bindings.size(); ++i)
    if (level_bindings[i].level.name == level_name) return static_cast<int>(i);
  return -1;
}

MeasureExprPtr MeasureExpr::make_column(std::string name) {
  auto e = std::make_shared<MeasureExpr>();
  e->kind = Kind::Column;
  e->column = std::move(name);
  return e;
}

MeasureExprPtr MeasureExpr::make_constant(double v) {
  auto e = std::make_shared<MeasureExpr>();
  e->kind = Kind::Constant;
  e->constant = v;
  return e;
}

MeasureExprPtr MeasureExpr::make_binary(MeasureOp op, MeasureExprPtr l, MeasureExprPtr r) {
  auto e = std::make_shared<MeasureExpr>();
  e->kind = Kind::Binary;
  e->op = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

Value eval_measure_expr(const MeasureExpr& expr,
                        const std::vector<std::string>& columns,
                        const std::vector<Value>& row) {
  switch (expr.kind) {
    case MeasureExpr::Kind::Column: {
      auto it = std::find(columns.begin(), columns.end(), expr.column);
      if (it == columns.end())
        throw Error(ErrorCode::UnknownAttribute, "fact column '" + expr.column + "' not in row");
      return row[static_cast<std::size_t>(it - columns.begin())];
    }
    case MeasureExpr::Kind::Constant:
      return expr.constant;
    case MeasureExpr::Kind::Binary: {
      Value l = eval_measure_expr(*expr.lhs, columns, row);
      Value r = eval_measure_expr(*expr.rhs, columns, row);
      if (is_null(l) || is_null(r)) return std::monostate{};
      // Integer arithmetic stays integral except division.
      bool both_int = std::holds_alternative<std::int64_t>(l) && std::holds_alternative<std::int64_t>(r);
      double x = as_double(l), y = as_double(r);
      switch (expr.op) {
        case MeasureOp::Add: return both_int ? Value(std::get<std::int64_t>(l) + std::get<std::int64_t>(r)) : Value(x + y);
        case MeasureOp::Sub: return both_int ? Value(std::get<std::int64_t>(l) - std::get<std::int64_t>(r)) : Value(x - y);
        case MeasureOp::Mul: return both_int ? Value(std::get<std::int64_t>(l) * std::get<std::int64_t>(r)) : Value(x * y);
        case MeasureOp::Div:
          if (y == 0.0) return std::monostate{};
          return x / y;
      }
      return std::monostate{};
    }
  }
  return std::monostate{};
}

MeasureSchema combine_measures(const MeasureSchema& left, MeasureOp op, const MeasureSchema& right) {
  if (left.agg != right.agg)
    throw Error(ErrorCode::AggMismatch, "combined measures must share the aggregate function");
  return {"", MeasureExpr::make_binary(op, left.expr, right.expr), left.agg};
}

MeasureSchema combine_measures(const MeasureSchema& left, MeasureOp op, double right) {
  return {"", MeasureExpr::make_binary(op, left.expr, MeasureExpr::make_constant(right)), left.agg};
}

MeasureSchema combine_measures(double left, MeasureOp op, const MeasureSchema& right) {
  return {"", MeasureExpr::make_binary(op, MeasureExpr::make_constant(left), right.expr), right.agg};
}

const DimensionBinding* CubeBinding::find_dimension(const std::string& name) const {
  for (const auto& d : dimensions)
    if (d.role_name == name) return &d;
  return nullptr;
}

const MeasureSchema* CubeBinding::find_measure(const std::string& name) const {
  for (const auto& m : measures)
    if (m.name == name) return &m;
  return nullptr;
}

const char* to_sql(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "<>";
    case CompareOp::Ge: return ">=";
    case CompareOp::Gt: return ">";
  }
  return "=";
}

PredicatePtr Predicate::make_true() {
  auto p = std::make_shared<Predicate>();
  p->kind = Kind::True;
  return p;
}

PredicatePtr Predicate::make_false() {
  auto p = std::make_shared<Predicate>();
  p->kind = Kind::False;
  return p;
}

PredicatePtr Predicate::make_atom(AttrRef attr, CompareOp op, Value literal) {
  auto p = std::make_shared<Predicate>();
  p->kind = Kind::Atom;
  p->attr = std::move(attr);
  p->op = op;
  p->literal = std::move(literal);
  return p;
}

PredicatePtr Predicate::make_and(PredicatePtr l, PredicatePtr r) {
  auto p = std::make_shared<Predicate>();
  p->kind = Kind::And;
  p->lhs = std::move(l);
  p->rhs = std::move(r);
  return p;
}

PredicatePtr Predicate::make_or(PredicatePtr l, PredicatePtr r) {
  auto p = std::make_shared<Predicate>();
  p->kind = Kind::Or;
  p->lhs = std::move(l);
  p->rhs = std::move(r);
  return p;
}

PredicatePtr Predicate::make_group(PredicatePtr inner) {
  auto p = std::make_shared<Predicate>();
  p->kind = Kind::Group;
  p->lhs = std::move(inner);
  return p;
}

namespace {

const char* dsl_op(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "!=";
    case CompareOp::Ge: return ">=";
    case CompareOp::Gt: return ">";
  }
  return "==";
}

std::string print_literal(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) {
    std::string out = "\"";
    for (char c : *s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  }
  return to_display(v);
}

// parent_or: we are the operand of an Or -> no parens needed for Or either.
void print_rec(const Predicate& p, std::string& out, bool and_operand) {
  switch (p.kind) {
    case Predicate::Kind::True: out += "true"; break;
    case Predicate::Kind::False: out += "false"; break;
    case Predicate::Kind::Atom:
      out += p.attr.dimension + "." + p.attr.level + "." + p.attr.attribute;
      out += std::string(" ") + dsl_op(p.op) + " " + print_literal(p.literal);
      break;
    case Predicate::Kind::And:
      print_rec(*p.lhs, out, true);
      out += " and ";
      print_rec(*p.rhs, out, true);
      break;
    case Predicate::Kind::Or:
      if (and_operand) out += "(";
      print_rec(*p.lhs, out, false);
      out += " or ";
      print_rec(*p.rhs, out, false);
      if (and_operand) out += ")";
      break;
    case Predicate::Kind::Group:
      out += "(";
      print_rec(*p.lhs, out, false);
      out += ")";
      break;
  }
}

}  // namespace

std::string print_predicate(const Predicate& p) {
  std::string out;
  print_rec(p, out, false);
  return out;
}

bool predicate_equal(const Predicate& a, const Predicate& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Predicate::Kind::True:
    case Predicate::Kind::False:
      return true;
    case Predicate::Kind::Atom:
      return a.attr == b.attr && a.op == b.op && value_equal(a.literal, b.literal);
    case Predicate::Kind::And:
    case Predicate::Kind::Or:
      return predicate_equal(*a.lhs, *b.lhs) && predicate_equal(*a.rhs, *b.rhs);
    case Predicate::Kind::Group:
      return predicate_equal(*a.lhs, *b.lhs);
  }
  return false;
}

void collect_atoms(const Predicate& p, std::vector<const Predicate*>& out) {
  switch (p.kind) {
    case Predicate::Kind::Atom: out.push_back(&p); break;
    case Predicate::Kind::And:
    case Predicate::Kind::Or:
      collect_atoms(*p.lhs, out);
      collect_atoms(*p.rhs, out);
      break;
    case Predicate::Kind::Group: collect_atoms(*p.lhs, out); break;
    default: break;
  }
}

CubeView default_view(std::shared_ptr<const CubeBinding> cube) {
  if (cube->measures.empty())
    throw Error(ErrorCode::NoMeasures, "cube '" + cube->name + "' has no measures");
  CubeView v;
  v.cube = cube;
  for (const auto& dim : cube->dimensions) {
    const auto& bottom = dim.level_bindings.front();
    Axis ax;
    ax.attr = {dim.role_name, bottom.level.name, bottom.member_attr};
    ax.all_members = true;
    v.axes.push_back(std::move(ax));
  }
  v.measures.push_back({cube->measures.front().name, cube->measures.front()});
  v.default_axes = true;
  return v;
}

}  // namespace cubekit
