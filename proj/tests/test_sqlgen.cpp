// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <string>

#include "cubekit/dsl.hpp"
#include "cubekit/sqlgen.hpp"
#include "fixtures.hpp"

using namespace cubekit;

namespace {

std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size()))
    ++n;
  return n;
}

struct Fx {
  std::shared_ptr<CubeSession> session = testfx::session_over(testfx::open_salesdb());
  CubeView view = parse_query(testfx::kSalesQuery, session).view;

  MemberResolver resolver() {
    return [this](const Axis& ax) {
      return session->members(*view.cube, ax.attr).values;
    };
  }
};

}  // namespace

TEST_CASE("the worked query compiles to the expected shape") {
  Fx fx;
  QueryPlan plan = generate(fx.view, fx.resolver());

  // Three axis attributes plus two aggregated measures.
  CHECK(count_of(plan.sql, "SUM(") == 2);
  CHECK(plan.sql.find("SUM(\"sales\".\"TotalSalesPrice\") AS \"TSP\"") != std::string::npos);
  CHECK(plan.sql.find("SUM(\"sales\".\"UnitSales\") AS \"US\"") != std::string::npos);
  REQUIRE(plan.columns.size() == 5);
  CHECK(plan.columns[0].name == "month");
  CHECK(!plan.columns[0].is_measure);
  CHECK(plan.columns[3].name == "TSP");
  CHECK(plan.columns[3].is_measure);

  // Full chains: 3 date + 4 product + 3 store levels.
  CHECK(count_of(plan.sql, "JOIN") == 10);
  CHECK(plan.sql.find("JOIN \"year\" AS \"year\" ON \"year\".\"yearkey\" = \"month\".\"yearkey\"") !=
        std::string::npos);
  CHECK(plan.sql.find("\"date\".\"datekey\" = \"sales\".\"datekey\"") != std::string::npos);

  // One IN list per axis, the OR predicate parenthesized.
  CHECK(count_of(plan.sql, " IN (") == 3);
  CHECK(plan.sql.find("AND (\"month\".\"month\" = ? OR \"month\".\"month\" = ?)") !=
        std::string::npos);

  // GROUP BY pairs each axis attribute with its level key.
  CHECK(plan.sql.find("GROUP BY") != std::string::npos);
  CHECK(plan.sql.find("\"month\".\"month\", \"month\".\"monthkey\"") != std::string::npos);
  CHECK(plan.sql.find("\"category\".\"category\", \"category\".\"categorykey\"") !=
        std::string::npos);
  CHECK(plan.sql.find("\"city\".\"city\", \"city\".\"citykey\"") != std::string::npos);

  // Inclusion binds 2 + 2 + 1 members, the predicate 2 literals.
  CHECK(plan.params.size() == 7);
}

TEST_CASE("the generated statement runs and aggregates correctly") {
  Fx fx;
  QueryPlan plan = generate(fx.view, fx.resolver());
  ResultSet rs = fx.session->driver().execute(plan.sql, plan.params);
  REQUIRE(rs.rows.size() == 4);
  std::int64_t tsp_jan_blouse = 0;
  for (const auto& row : rs.rows) {
    if (value_equal(row[0], Value{std::string{"January"}}) &&
        value_equal(row[1], Value{std::string{"Blouse"}}))
      tsp_jan_blouse = std::get<std::int64_t>(row[3]);
  }
  CHECK(tsp_jan_blouse == 946513);
}

TEST_CASE("all-members axes expand through the resolver") {
  Fx fx;
  CubeView v = fx.view;
  v.axes[0].members.clear();
  v.axes[0].all_members = true;
  QueryPlan plan = generate(v, fx.resolver());
  // 12 months + 2 categories + 1 city + 2 predicate literals.
  CHECK(plan.params.size() == 17);
}

TEST_CASE("empty axis list degrades to TRUE inclusion and no grouping") {
  Fx fx;
  CubeView v = fx.view;
  v.axes.clear();
  QueryPlan plan = generate(v, fx.resolver());
  CHECK(plan.sql.find("TRUE") != std::string::npos);
  CHECK(plan.sql.find("GROUP BY") == std::string::npos);
  // The predicate's dimension still joins its chain.
  CHECK(count_of(plan.sql, "JOIN") == 3);
}

TEST_CASE("views without measures refuse to compile") {
  Fx fx;
  CubeView v = fx.view;
  v.measures.clear();
  CHECK_THROWS_AS(generate(v, fx.resolver()), Error);
}

TEST_CASE("role-playing dimensions get qualified aliases") {
  ConnectionConfig cfg;
  cfg.dbname = ":memory:";
  std::shared_ptr<Driver> driver = connect_sqlite(cfg);
  driver->execute_script(R"sql(
    CREATE TABLE day (daykey INTEGER PRIMARY KEY, day TEXT);
    CREATE TABLE orders (orderkey INTEGER PRIMARY KEY,
        orderdate INTEGER REFERENCES day(daykey),
        commitdate INTEGER REFERENCES day(daykey),
        amount INTEGER);
    INSERT INTO day VALUES (1, 'Mon'), (2, 'Tue');
    INSERT INTO orders VALUES (1, 1, 2, 10), (2, 2, 2, 20), (3, 1, 1, 5);
  )sql");
  auto session = testfx::session_over(driver);
  auto cube = session->view("Orders");

  CubeView v;
  v.cube = cube;
  v.axes.push_back({{"orderdate", "day", "day"}, {Value{std::string{"Mon"}}}, false});
  v.axes.push_back({{"commitdate", "day", "day"}, {Value{std::string{"Tue"}}}, false});
  v.measures.push_back({"amount", *cube->find_measure("amount")});
  v.default_axes = false;

  QueryPlan plan = generate(v, nullptr);
  CHECK(plan.sql.find("JOIN \"day\" AS \"orderdate_day\"") != std::string::npos);
  CHECK(plan.sql.find("JOIN \"day\" AS \"commitdate_day\"") != std::string::npos);
  CHECK(plan.sql.find("\"orderdate_day\".\"daykey\" = \"orders\".\"orderdate\"") !=
        std::string::npos);

  ResultSet rs = driver->execute(plan.sql, plan.params);
  REQUIRE(rs.rows.size() == 1);
  CHECK(std::get<std::int64_t>(rs.rows[0][2]) == 10);  // order Mon, commit Tue
}

TEST_CASE("calculated measures render with NULL-safe division") {
  Fx fx;
  CubeView v = fx.view;
  const CubeBinding& cube = *v.cube;
  MeasureSchema ratio =
      combine_measures(cube.measures[0], MeasureOp::Div, cube.measures[1]);
  v.measures = {{"ratio", ratio}};
  QueryPlan plan = generate(v, fx.resolver());
  CHECK(plan.sql.find("/ NULLIF(CAST(\"sales\".\"UnitSales\" AS REAL), 0)") != std::string::npos);
  ResultSet rs = fx.session->driver().execute(plan.sql, plan.params);
  CHECK(rs.rows.size() == 4);
}
