// SPDX-License-Identifier: Apache-2.0
#include "cubekit/view_builder.hpp"

#include <chrono>

namespace cubekit {

ViewBuilder::ViewBuilder(std::shared_ptr<CubeSession> session,
                         std::shared_ptr<const CubeBinding> cube)
    : session_(std::move(session)), cube_(std::move(cube)) {}

CubeView ViewBuilder::fresh() const { return default_view(cube_); }

CubeView ViewBuilder::axis(const CubeView& v, std::size_t i, const MemberList& members) const {
  if (members.values.empty())
    throw Error(ErrorCode::UnknownMember, "axis " + std::to_string(i) + " got an empty member list");
  AttrRef attr = session_->resolve_attr(*cube_, members.attr);

  CubeView out = v;
  if (out.default_axes) {
    out.axes.clear();
    out.default_axes = false;
  }
  if (i > out.axes.size())
    throw Error(ErrorCode::AxisOrderError, "axis " + std::to_string(i) + " specified before axis " +
                                               std::to_string(i - 1));
  for (std::size_t k = 0; k < out.axes.size(); ++k)
    if (k != i && out.axes[k].attr == attr)
      throw Error(ErrorCode::DuplicateAxis, "attribute '" + attr.dimension + "." + attr.level +
                                                "." + attr.attribute + "' is already on axis " +
                                                std::to_string(k));
  Axis ax;
  ax.attr = attr;
  ax.members = members.values;
  if (i == out.axes.size())
    out.axes.push_back(std::move(ax));
  else
    out.axes[i] = std::move(ax);
  return out;
}

PredicatePtr ViewBuilder::resolve_predicate(const Predicate& p) const {
  switch (p.kind) {
    case Predicate::Kind::True:
      return Predicate::make_true();
    case Predicate::Kind::False:
      return Predicate::make_false();
    case Predicate::Kind::Atom: {
      AttrRef attr = session_->resolve_attr(*cube_, p.attr);
      session_->check_literal(*cube_, attr, p.literal);
      return Predicate::make_atom(attr, p.op, p.literal);
    }
    case Predicate::Kind::And:
      return Predicate::make_and(resolve_predicate(*p.lhs), resolve_predicate(*p.rhs));
    case Predicate::Kind::Or:
      return Predicate::make_or(resolve_predicate(*p.lhs), resolve_predicate(*p.rhs));
    case Predicate::Kind::Group:
      return Predicate::make_group(resolve_predicate(*p.lhs));
  }
  throw Error(ErrorCode::Internal, "bad predicate kind");
}

CubeView ViewBuilder::where(const CubeView& v, PredicatePtr p) const {
  CubeView out = v;
  out.predicate = resolve_predicate(*p);
  return out;
}

CubeView ViewBuilder::measures(const CubeView& v, std::vector<NamedMeasure> list) const {
  if (list.empty()) throw Error(ErrorCode::NoMeasures, "measures() needs at least one measure");
  for (auto& nm : list) {
    if (nm.alias.empty()) nm.alias = nm.measure.name;
    if (nm.alias.empty())
      throw Error(ErrorCode::DuplicateMeasure, "calculated measure needs an alias");
  }
  for (std::size_t i = 0; i < list.size(); ++i)
    for (std::size_t j = i + 1; j < list.size(); ++j)
      if (list[i].alias == list[j].alias)
        throw Error(ErrorCode::DuplicateMeasure, "measure alias '" + list[i].alias + "' repeats");
  CubeView out = v;
  out.measures = std::move(list);
  return out;
}

CubeView ViewBuilder::materialize_axes(const CubeView& v) const {
  CubeView out = v;
  for (auto& ax : out.axes) {
    if (!ax.all_members) continue;
    ax.members = session_->members(*cube_, ax.attr).values;
    ax.all_members = false;
  }
  return out;
}

QueryPlan ViewBuilder::explain(const CubeView& v) const {
  CubeView m = materialize_axes(v);
  return generate(m, [](const Axis&) { return std::vector<Value>{}; });
}

OutputResult ViewBuilder::output(const CubeView& v, bool allow_huge) const {
  if (v.default_axes && !allow_huge)
    throw Error(ErrorCode::HugeDefaultView,
                "output of a default view crosses every bottom level; pass allow_huge");
  auto start = std::chrono::steady_clock::now();
  CubeView m = materialize_axes(v);
  OutputResult res;
  res.plan = generate(m, [](const Axis&) { return std::vector<Value>{}; });
  ResultSet rs = session_->driver().execute(res.plan.sql, res.plan.params);
  res.table = pivot(rs, m);
  double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.db_seconds = rs.db_seconds;
  res.engine_seconds = total - rs.db_seconds;
  if (res.engine_seconds < 0) res.engine_seconds = 0;
  return res;
}

}  // namespace cubekit
