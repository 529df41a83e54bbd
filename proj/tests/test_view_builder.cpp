// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "cubekit/dsl.hpp"
#include "cubekit/view_builder.hpp"
#include "fixtures.hpp"

using namespace cubekit;

namespace {

Value s(const char* text) { return Value{std::string{text}}; }

/// Non-owning counting decorator over a shared driver.
class ForwardingCounter : public Driver {
 public:
  explicit ForwardingCounter(std::shared_ptr<Driver> inner) : inner_(std::move(inner)) {}
  CatalogSnapshot introspect() override { return inner_->introspect(); }
  ResultSet execute(const std::string& sql, const std::vector<Value>& params) override {
    ++executes;
    return inner_->execute(sql, params);
  }
  void execute_script(const std::string& sql) override { inner_->execute_script(sql); }
  void close() override {}
  int executes = 0;

 private:
  std::shared_ptr<Driver> inner_;
};

struct Fx {
  std::shared_ptr<CubeSession> session = testfx::session_over(testfx::open_salesdb());
  std::shared_ptr<const CubeBinding> cube = session->view("Sales");
  ViewBuilder vb{session, cube};

  MemberList list(AttrRef attr, std::vector<Value> values) {
    return {std::move(attr), std::move(values), MemberOrdering::UserGiven};
  }

  CubeView worked_example() {
    CubeView v = vb.fresh();
    v = vb.columns(v, list({"Date", "month", "month"}, {s("January"), s("February")}));
    v = vb.rows(v, list({"Product", "category", "category"}, {s("Blouse"), s("Pants")}));
    v = vb.pages(v, list({"Store", "city", "city"}, {s("Aalborg")}));
    v = vb.measures(v, {{"TSP", *cube->find_measure("TotalSalesPrice")},
                        {"US", *cube->find_measure("UnitSales")}});
    return v;
  }
};

}  // namespace

TEST_CASE("builder operations leave the receiver untouched") {
  Fx fx;
  CubeView base = fx.vb.fresh();
  CHECK(base.default_axes);
  CHECK(base.axes.size() == 3);

  CubeView with_cols =
      fx.vb.columns(base, fx.list({"Date", "month", "month"}, {s("January")}));
  CHECK(base.default_axes);       // unchanged
  CHECK(base.axes.size() == 3);
  CHECK(!with_cols.default_axes);
  CHECK(with_cols.axes.size() == 1);

  CubeView filtered = fx.vb.where(
      with_cols, Predicate::make_atom({"Store", "city", "city"}, CompareOp::Eq, s("Aalborg")));
  CHECK(with_cols.predicate->is_true());
  CHECK(!filtered.predicate->is_true());
}

TEST_CASE("the first explicit axis replaces the default axes") {
  Fx fx;
  CubeView v = fx.vb.columns(fx.vb.fresh(), fx.list({"Date", "month", "month"}, {s("January")}));
  REQUIRE(v.axes.size() == 1);
  CHECK(v.axes[0].attr.dimension == "datekey");  // resolved to the role name
  CHECK(!v.axes[0].all_members);
}

TEST_CASE("axis ordering and duplication rules") {
  Fx fx;
  CubeView v = fx.vb.fresh();
  // rows before columns violates contiguity.
  CHECK_THROWS_AS(fx.vb.rows(v, fx.list({"Date", "month", "month"}, {s("January")})), Error);

  v = fx.vb.columns(v, fx.list({"Date", "month", "month"}, {s("January")}));
  CHECK_THROWS_AS(fx.vb.rows(v, fx.list({"Date", "month", "month"}, {s("January")})), Error);

  // Replacing an existing axis in place is allowed.
  CubeView swapped = fx.vb.columns(v, fx.list({"Date", "month", "month"}, {s("March")}));
  CHECK(value_equal(swapped.axes[0].members[0], s("March")));

  CHECK_THROWS_AS(fx.vb.columns(v, fx.list({"Date", "month", "month"}, {})), Error);
}

TEST_CASE("measures fill aliases and reject duplicates") {
  Fx fx;
  CubeView v = fx.vb.measures(fx.vb.fresh(), {{"", *fx.cube->find_measure("UnitSales")}});
  CHECK(v.measures[0].alias == "UnitSales");

  CHECK_THROWS_AS(fx.vb.measures(fx.vb.fresh(), {}), Error);
  CHECK_THROWS_AS(
      fx.vb.measures(fx.vb.fresh(), {{"X", *fx.cube->find_measure("UnitSales")},
                                     {"X", *fx.cube->find_measure("TotalSalesPrice")}}),
      Error);
  try {
    MeasureSchema calc = combine_measures(*fx.cube->find_measure("TotalSalesPrice"), MeasureOp::Div,
                                          *fx.cube->find_measure("UnitSales"));
    fx.vb.measures(fx.vb.fresh(), {{"", calc}});
    FAIL("expected an alias requirement");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateMeasure);
  }
}

TEST_CASE("where resolves names and type-checks literals") {
  Fx fx;
  CubeView v = fx.vb.where(fx.vb.fresh(), Predicate::make_atom({"date", "MONTH", "month"},
                                                               CompareOp::Eq, s("January")));
  std::vector<const Predicate*> atoms;
  collect_atoms(*v.predicate, atoms);
  REQUIRE(atoms.size() == 1);
  CHECK(atoms[0]->attr.dimension == "datekey");
  CHECK(atoms[0]->attr.level == "month");

  CHECK_THROWS_AS(fx.vb.where(fx.vb.fresh(), Predicate::make_atom({"Date", "month", "month"},
                                                                  CompareOp::Eq,
                                                                  Value{std::int64_t{3}})),
                  Error);
}

TEST_CASE("materialize_axes expands AllMembers in place") {
  Fx fx;
  CubeView v = fx.vb.fresh();
  CubeView m = fx.vb.materialize_axes(v);
  CHECK(v.axes[0].all_members);  // source untouched
  CHECK(!m.axes[0].all_members);
  CHECK(m.axes[0].members.size() == 2);    // distinct day values 10 and 24
  CHECK(m.axes[1].members.size() == 2);    // products
  CHECK(m.axes[2].members.size() == 2);    // cities
}

TEST_CASE("default views refuse to output without allow_huge") {
  Fx fx;
  try {
    fx.vb.output(fx.vb.fresh());
    FAIL("expected HugeDefaultView");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HugeDefaultView);
  }
  // A cube whose bottom attributes are unique per key renders cleanly.
  auto toy = testfx::session_over(testfx::open_snowflake_toy());
  auto toy_cube = toy->view("salesdb_snowflake");
  ViewBuilder toy_vb{toy, toy_cube};
  OutputResult res = toy_vb.output(toy_vb.fresh(), true);
  CHECK(res.table.height() == 2);
}

TEST_CASE("output runs exactly one aggregation statement") {
  auto counting = std::make_shared<ForwardingCounter>(testfx::open_salesdb());
  auto session = testfx::session_over(counting);
  auto cube = session->view("Sales");
  ViewBuilder vb{session, cube};

  CubeView v = vb.fresh();
  v = vb.columns(v, {{"Date", "month", "month"}, {s("January"), s("February")},
                     MemberOrdering::UserGiven});
  v = vb.rows(v, {{"Product", "category", "category"}, {s("Blouse"), s("Pants")},
                  MemberOrdering::UserGiven});
  v = vb.measures(v, {{"TSP", *cube->find_measure("TotalSalesPrice")}});

  // Warm the catalog; explicit member lists need no member queries.
  session->catalog();
  counting->executes = 0;

  OutputResult res = vb.output(v);
  CHECK(counting->executes == 1);
  CHECK(res.plan.columns.size() == 3);
  CHECK(res.engine_seconds >= 0.0);
  CHECK(res.db_seconds >= 0.0);
  CHECK(res.table.width() == 2);
}

TEST_CASE("the worked example produces the known totals") {
  Fx fx;
  CubeView v = fx.worked_example();
  v = fx.vb.where(v, parse_predicate(
                         "Date.month.month == \"January\" or Date.month.month == \"February\""));
  OutputResult res = fx.vb.output(v);
  CHECK(render(res.table, RenderFormat::Csv) ==
        ",Aalborg,Aalborg,Aalborg,Aalborg\n"
        ",January,January,February,February\n"
        ",TSP,US,TSP,US\n"
        "Blouse,946513,754,468954,659\n"
        "Pants,846598,378,120546,129\n");
}

TEST_CASE("explain compiles without executing") {
  Fx fx;
  CubeView v = fx.worked_example();
  QueryPlan plan = fx.vb.explain(v);
  CHECK(plan.sql.find("GROUP BY") != std::string::npos);
  CHECK(plan.params.size() == 5);  // 2 + 2 + 1 axis members, predicate true
}
