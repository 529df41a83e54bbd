// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cubekit/navigator.hpp"
#include "cubekit/shaper.hpp"
#include "cubekit/sqlgen.hpp"

namespace cubekit {

struct OutputResult {
  PivotTable table;
  QueryPlan plan;
  double engine_seconds = 0.0;  // wall time minus time inside the database
  double db_seconds = 0.0;
};

/// Functional builder over immutable CubeView values. Every operation
/// returns a modified copy; the receiver view is never changed.
class ViewBuilder {
 public:
  ViewBuilder(std::shared_ptr<CubeSession> session, std::shared_ptr<const CubeBinding> cube);

  CubeView fresh() const;  // the default view (AllMembers axes, first measure)

  /// Replaces axis `i`. Axis i-1 must already be explicit (AxisOrderError);
  /// a second axis on the same attribute is DuplicateAxis.
  CubeView axis(const CubeView& v, std::size_t i, const MemberList& members) const;

  CubeView columns(const CubeView& v, const MemberList& m) const { return axis(v, 0, m); }
  CubeView rows(const CubeView& v, const MemberList& m) const { return axis(v, 1, m); }
  CubeView pages(const CubeView& v, const MemberList& m) const { return axis(v, 2, m); }
  CubeView sections(const CubeView& v, const MemberList& m) const { return axis(v, 3, m); }
  CubeView chapters(const CubeView& v, const MemberList& m) const { return axis(v, 4, m); }

  /// Replaces the predicate (repeated where overwrites, it does not conjoin).
  CubeView where(const CubeView& v, PredicatePtr p) const;

  /// Replaces the measure list; the first entry is the default measure.
  /// Entries with an empty alias take the measure's own name.
  CubeView measures(const CubeView& v, std::vector<NamedMeasure> list) const;

  /// Resolves AllMembers axes to the current member lists.
  CubeView materialize_axes(const CubeView& v) const;

  /// Compiles, runs the single aggregation statement, and pivots. A view
  /// still on its default axes needs allow_huge (the cross product of all
  /// bottom levels can explode).
  OutputResult output(const CubeView& v, bool allow_huge = false) const;

  /// The compiled plan without executing it.
  QueryPlan explain(const CubeView& v) const;

  CubeSession& session() const { return *session_; }

 private:
  PredicatePtr resolve_predicate(const Predicate& p) const;

  std::shared_ptr<CubeSession> session_;
  std::shared_ptr<const CubeBinding> cube_;
};

}  // namespace cubekit
