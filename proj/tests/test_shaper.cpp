// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "cubekit/shaper.hpp"

using namespace cubekit;

namespace {

Value s(const char* text) { return Value{std::string{text}}; }
Value n(std::int64_t v) { return Value{v}; }

CubeView table5_view() {
  CubeView v;
  v.axes.push_back({{"datekey", "month", "month"}, {s("January"), s("February")}, false});
  v.axes.push_back({{"productkey", "category", "category"}, {s("Blouse"), s("Pants")}, false});
  v.axes.push_back({{"storekey", "city", "city"}, {s("Aalborg")}, false});
  v.measures.push_back({"TSP", {}});
  v.measures.push_back({"US", {}});
  v.default_axes = false;
  return v;
}

ResultSet table5_result() {
  ResultSet rs;
  rs.columns = {"month", "category", "city", "TSP", "US"};
  rs.rows = {
      {s("January"), s("Blouse"), s("Aalborg"), n(946513), n(754)},
      {s("January"), s("Pants"), s("Aalborg"), n(846598), n(378)},
      {s("February"), s("Blouse"), s("Aalborg"), n(468954), n(659)},
      {s("February"), s("Pants"), s("Aalborg"), n(120546), n(129)},
  };
  return rs;
}

}  // namespace

TEST_CASE("three-axis pivot matches the hierarchical layout") {
  PivotTable t = pivot(table5_result(), table5_view());

  // pages outermost, then columns, then the measure aliases.
  CHECK(t.level_sizes == std::vector<std::size_t>{1, 2, 2});
  CHECK(t.width() == 4);
  REQUIRE(t.column_header.size() == 3);
  CHECK(t.column_header[0] ==
        std::vector<std::string>{"Aalborg", "Aalborg", "Aalborg", "Aalborg"});
  CHECK(t.column_header[1] ==
        std::vector<std::string>{"January", "January", "February", "February"});
  CHECK(t.column_header[2] == std::vector<std::string>{"TSP", "US", "TSP", "US"});
  CHECK(t.row_labels == std::vector<std::string>{"Blouse", "Pants"});

  REQUIRE(t.height() == 2);
  CHECK(value_equal(t.cells[0][0], n(946513)));
  CHECK(value_equal(t.cells[0][1], n(754)));
  CHECK(value_equal(t.cells[0][2], n(468954)));
  CHECK(value_equal(t.cells[1][3], n(129)));
}

TEST_CASE("csv rendering leads with empty label fields") {
  PivotTable t = pivot(table5_result(), table5_view());
  CHECK(render(t, RenderFormat::Csv) ==
        ",Aalborg,Aalborg,Aalborg,Aalborg\n"
        ",January,January,February,February\n"
        ",TSP,US,TSP,US\n"
        "Blouse,946513,754,468954,659\n"
        "Pants,846598,378,120546,129\n");
}

TEST_CASE("missing combinations densify to empty cells") {
  ResultSet rs = table5_result();
  rs.rows.resize(1);  // only January/Blouse remains
  PivotTable t = pivot(rs, table5_view());
  CHECK(value_equal(t.cells[0][0], n(946513)));
  CHECK(is_null(t.cells[0][2]));
  CHECK(is_null(t.cells[1][0]));
  std::string csv = render(t, RenderFormat::Csv);
  CHECK(csv.find("Pants,,,,\n") != std::string::npos);
}

TEST_CASE("single-axis views have one unlabeled row") {
  CubeView v;
  v.axes.push_back({{"datekey", "year", "year"}, {n(2022), n(2023)}, false});
  v.measures.push_back({"Total", {}});
  ResultSet rs;
  rs.columns = {"year", "Total"};
  rs.rows = {{n(2023), n(7)}, {n(2022), n(5)}};
  PivotTable t = pivot(rs, v);
  CHECK(t.row_labels.empty());
  CHECK(t.height() == 1);
  CHECK(t.width() == 2);
  CHECK(t.column_header[0] == std::vector<std::string>{"2022", "2023"});
  // Cells land by member-list position, not result order.
  CHECK(value_equal(t.cells[0][0], n(5)));
  CHECK(value_equal(t.cells[0][1], n(7)));
  std::string csv = render(t, RenderFormat::Csv);
  CHECK(csv.substr(0, 10) == "2022,2023\n");
}

TEST_CASE("colliding display addresses raise AmbiguousLabel") {
  CubeView v;
  v.axes.push_back({{"datekey", "month", "month"}, {s("January")}, false});
  v.measures.push_back({"M", {}});
  ResultSet rs;
  rs.columns = {"month", "M"};
  rs.rows = {{s("January"), n(1)}, {s("January"), n(2)}};
  try {
    pivot(rs, v);
    FAIL("expected AmbiguousLabel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AmbiguousLabel);
  }
}

TEST_CASE("values outside the member list are an internal error") {
  CubeView v;
  v.axes.push_back({{"datekey", "month", "month"}, {s("January")}, false});
  v.measures.push_back({"M", {}});
  ResultSet rs;
  rs.columns = {"month", "M"};
  rs.rows = {{s("March"), n(1)}};
  try {
    pivot(rs, v);
    FAIL("expected Internal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Internal);
  }
}

TEST_CASE("unmaterialized axes are an internal error") {
  CubeView v = table5_view();
  v.axes[0].members.clear();
  v.axes[0].all_members = true;
  try {
    pivot(table5_result(), v);
    FAIL("expected Internal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Internal);
  }
}

TEST_CASE("pretty rendering draws merged spans") {
  PivotTable t = pivot(table5_result(), table5_view());
  std::string out = render(t, RenderFormat::Pretty);
  CHECK(out.front() == '+');
  // One merged January cell spanning TSP and US, not two.
  std::size_t first = out.find("January");
  REQUIRE(first != std::string::npos);
  std::size_t second = out.find("January", first + 1);
  CHECK(second == std::string::npos);
  CHECK(out.find("Blouse") != std::string::npos);
  CHECK(out.find("946513") != std::string::npos);
}

TEST_CASE("tables_equal applies relative tolerance to numbers") {
  PivotTable a, b;
  a.column_header = b.column_header = {{"M"}};
  a.level_sizes = b.level_sizes = {1};
  a.cells = {{Value{1000000.0}}};
  b.cells = {{Value{1000000.0000001}}};
  CHECK(tables_equal(a, b, 1e-9));
  b.cells = {{Value{1000001.0}}};
  CHECK(!tables_equal(a, b, 1e-9));
  CHECK(tables_equal(a, b, 1e-3));

  SUBCASE("ints compare with doubles") {
    b.cells = {{Value{std::int64_t{1000000}}}};
    CHECK(tables_equal(a, b));
  }
  SUBCASE("null mismatch fails") {
    b.cells = {{Value{}}};
    CHECK(!tables_equal(a, b));
  }
  SUBCASE("header mismatch fails") {
    b = a;
    b.column_header = {{"N"}};
    CHECK(!tables_equal(a, b));
  }
}
