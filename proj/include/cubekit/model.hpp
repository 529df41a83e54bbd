// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cubekit/error.hpp"
#include "cubekit/value.hpp"

namespace cubekit {

// ---------------------------------------------------------------------------
// Schema side
// ---------------------------------------------------------------------------

struct LevelSchema {
  std::string name;
  std::vector<std::string> key_attrs;
  std::vector<std::string> attrs;  // includes the member attribute
  bool is_all = false;

  static LevelSchema all() { return {"ALL", {"all"}, {"all"}, true}; }
};

/// Physical binding of a level to its table. The ALL level has no binding.
struct LevelBinding {
  LevelSchema level;
  std::string table;
  std::string key_column;
  std::optional<std::string> fk_column;  // to the parent level's table
  // attr name -> column name (identity for inferred cubes)
  std::vector<std::pair<std::string, std::string>> attr_columns;
  /// The attribute holding the level members.
  std::string member_attr;

  const std::string& column_of(const std::string& attr) const;
};

struct DimensionSchema {
  std::string name;
  std::vector<LevelSchema> levels;  // bottom -> top, last is ALL
};

struct DimensionBinding {
  DimensionSchema schema;
  std::vector<LevelBinding> level_bindings;  // bottom -> top, excludes ALL
  std::string fact_fk_column;
  std::string role_name;

  const LevelBinding* find_level(const std::string& level_name) const;
  int level_index(const std::string& level_name) const;  // -1 when unknown
};

enum class MeasureOp { Add, Sub, Mul, Div };

struct MeasureExpr;
using MeasureExprPtr = std::shared_ptr<const MeasureExpr>;

struct MeasureExpr {
  enum class Kind { Column, Constant, Binary };
  Kind kind;
  std::string column;       // Kind::Column
  double constant = 0.0;    // Kind::Constant
  MeasureOp op{};           // Kind::Binary
  MeasureExprPtr lhs, rhs;  // Kind::Binary

  static MeasureExprPtr make_column(std::string name);
  static MeasureExprPtr make_constant(double v);
  static MeasureExprPtr make_binary(MeasureOp op, MeasureExprPtr l, MeasureExprPtr r);
};

/// Only SUM is produced by inference.
enum class AggFunc { Sum };

struct MeasureSchema {
  std::string name;  // empty until aliased for calculated measures
  MeasureExprPtr expr;
  AggFunc agg = AggFunc::Sum;
};

/// Row-wise evaluation of a measure expression. Division by zero yields NULL.
Value eval_measure_expr(const MeasureExpr& expr,
                        const std::vector<std::string>& columns,
                        const std::vector<Value>& row);

MeasureSchema combine_measures(const MeasureSchema& left, MeasureOp op, const MeasureSchema& right);
MeasureSchema combine_measures(const MeasureSchema& left, MeasureOp op, double right);
MeasureSchema combine_measures(double left, MeasureOp op, const MeasureSchema& right);

struct CubeBinding {
  std::string name;
  std::string fact_table;
  std::vector<DimensionBinding> dimensions;
  std::vector<MeasureSchema> measures;

  const DimensionBinding* find_dimension(const std::string& name) const;
  const MeasureSchema* find_measure(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

/// Names an attribute on a level of a dimension, by display name.
struct AttrRef {
  std::string dimension;
  std::string level;
  std::string attribute;

  bool operator==(const AttrRef&) const = default;
};

enum class CompareOp { Lt, Le, Eq, Ne, Ge, Gt };

const char* to_sql(CompareOp op);

struct Predicate;
using PredicatePtr = std::shared_ptr<const Predicate>;

struct Predicate {
  enum class Kind { True, False, Atom, And, Or, Group };
  Kind kind;
  // Atom
  AttrRef attr;
  CompareOp op{};
  Value literal;
  // And / Or / Group
  PredicatePtr lhs, rhs;  // Group uses lhs only

  static PredicatePtr make_true();
  static PredicatePtr make_false();
  static PredicatePtr make_atom(AttrRef attr, CompareOp op, Value literal);
  static PredicatePtr make_and(PredicatePtr l, PredicatePtr r);
  static PredicatePtr make_or(PredicatePtr l, PredicatePtr r);
  static PredicatePtr make_group(PredicatePtr inner);

  bool is_true() const { return kind == Kind::True; }
};

/// Infix rendering matching the query DSL's where-clause grammar.
std::string print_predicate(const Predicate& p);

bool predicate_equal(const Predicate& a, const Predicate& b);

/// Collects every Atom in evaluation order.
void collect_atoms(const Predicate& p, std::vector<const Predicate*>& out);

// ---------------------------------------------------------------------------
// Views
// ---------------------------------------------------------------------------

struct Axis {
  AttrRef attr;
  /// Explicit ordered members; empty + all_members=true means "every member".
  std::vector<Value> members;
  bool all_members = false;
};

struct NamedMeasure {
  std::string alias;
  MeasureSchema measure;
};

/// Immutable view value; builder operations return modified copies.
struct CubeView {
  std::vector<Axis> axes;  // index 0 = columns, 1 = rows, 2 = pages, ...
  std::vector<NamedMeasure> measures;
  PredicatePtr predicate = Predicate::make_true();
  std::shared_ptr<const CubeBinding> cube;
  /// True until the first explicit axis call replaces the default axes.
  bool default_axes = true;
};

/// One AllMembers axis per dimension at its bottom level, the first measure,
/// predicate true.
CubeView default_view(std::shared_ptr<const CubeBinding> cube);

}  // namespace cubekit
