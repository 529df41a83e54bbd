// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cubekit/bench.hpp"
#include "cubekit/inference.hpp"
#include "fixtures.hpp"

using namespace cubekit;
namespace fs = std::filesystem;

namespace {

/// Generates and loads a tiny SSB database once per process.
const std::string& tiny_ssb_db() {
  static std::string path = [] {
    fs::path dir = fs::temp_directory_path() / "cubekit-test-ssb";
    fs::remove_all(dir);
    fs::create_directories(dir);
    ssb_generate(0.001, 42, dir.string());
    std::string db = (dir / "ssb.db").string();
    ssb_load(dir.string(), db);
    return db;
  }();
  return path;
}

std::shared_ptr<CubeSession> ssb_session() {
  ConnectionConfig cfg;
  cfg.dbname = tiny_ssb_db();
  std::shared_ptr<Driver> driver = connect_sqlite(cfg);
  return testfx::session_over(driver);
}

}  // namespace

TEST_CASE("protocol_average drops the extremes") {
  CHECK(protocol_average({5.0, 1.0, 3.0, 4.0, 2.0}) == 3.0);
  CHECK(protocol_average({1.0, 2.0, 3.0}) == 2.0);
  CHECK(protocol_average({10.0, 10.0, 10.0, 10.0}) == 10.0);
  CHECK_THROWS_AS(protocol_average({1.0, 2.0}), Error);
}

TEST_CASE("impl names round-trip") {
  for (BenchImpl impl : {BenchImpl::Engine, BenchImpl::Jff, BenchImpl::Jdf, BenchImpl::Sqlj})
    CHECK(bench_impl_from(to_string(impl)) == impl);
  CHECK_THROWS_AS(bench_impl_from("nope"), Error);
}

TEST_CASE("generation is deterministic and respects the scale factor") {
  fs::path a = fs::temp_directory_path() / "cubekit-gen-a";
  fs::path b = fs::temp_directory_path() / "cubekit-gen-b";
  fs::remove_all(a);
  fs::remove_all(b);
  fs::create_directories(a);
  fs::create_directories(b);
  ssb_generate(0.001, 7, a.string());
  ssb_generate(0.001, 7, b.string());

  for (const auto& table : ssb_tables()) {
    fs::path fa = a / (table + ".csv");
    REQUIRE(fs::exists(fa));
    std::ifstream ia(fa), ib(b / (table + ".csv"));
    std::string ca((std::istreambuf_iterator<char>(ia)), std::istreambuf_iterator<char>());
    std::string cb((std::istreambuf_iterator<char>(ib)), std::istreambuf_iterator<char>());
    CHECK(ca == cb);
  }

  // Line count of the fact file = rows + header.
  std::ifstream fact(a / "lineorder.csv");
  std::size_t lines = 0;
  for (std::string line; std::getline(fact, line);) ++lines;
  CHECK(lines == 6001);  // round(6e6 * 0.001) + header
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("the loaded schema matches the snowflake layout") {
  ConnectionConfig cfg;
  cfg.dbname = tiny_ssb_db();
  auto driver = connect_sqlite(cfg);
  CatalogSnapshot cat = driver->introspect();
  CHECK(cat.tables.size() == 13);
  CHECK(ssb_tables().size() == 13);
  CHECK(ssb_tables().front() == "lineorder");

  const TableInfo* lineorder = cat.find_table("lineorder");
  REQUIRE(lineorder != nullptr);
  CHECK(lineorder->row_count == 6000);
  auto fks = cat.fks_from("lineorder");
  REQUIRE(fks.size() == 5);
  CHECK(fks[3].from_column == "orderdate");
  CHECK(fks[3].to_table == "day");
  CHECK(fks[4].from_column == "commitdate");
  CHECK(fks[4].to_table == "day");

  InferenceReport report = infer_cube(cat);
  CHECK(report.cube.dimensions.size() == 5);
  CHECK(report.cube.dimensions[3].role_name == "orderdate");
  CHECK(report.cube.dimensions[4].role_name == "commitdate");
}

TEST_CASE("loading refuses a non-empty database") {
  fs::path dir = fs::temp_directory_path() / "cubekit-test-ssb";
  CHECK_THROWS_AS(ssb_load(dir.string(), tiny_ssb_db()), Error);
}

TEST_CASE("all 13 queries parse against the SSB cube") {
  auto session = ssb_session();
  CHECK(ssb_queries().size() == 13);
  for (const auto& q : ssb_queries()) {
    CAPTURE(q.id);
    ParsedQuery parsed = parse_query(q.dsl, session);
    CHECK(parsed.view_name == "Lineorder");
    CHECK(!parsed.view.axes.empty());
  }
  CHECK(ssb_query("4.1").flight == 4);
  CHECK_THROWS_AS(ssb_query("9.9"), Error);
}

TEST_CASE("all four implementations agree on a query") {
  auto session = ssb_session();
  ParsedQuery q = parse_query(ssb_query("4.1").dsl, session);

  PivotTable engine = run_impl(BenchImpl::Engine, q.view, *session);
  for (BenchImpl impl : {BenchImpl::Jff, BenchImpl::Jdf, BenchImpl::Sqlj}) {
    CAPTURE(to_string(impl));
    PivotTable other = run_impl(impl, q.view, *session);
    CHECK(tables_equal(engine, other, 1e-6));
  }
}

TEST_CASE("db_seconds accumulate through run_impl") {
  auto session = ssb_session();
  ParsedQuery q = parse_query(ssb_query("1.1").dsl, session);
  double db = 0.0;
  run_impl(BenchImpl::Engine, q.view, *session, &db);
  CHECK(db >= 0.0);
  CHECK(db < 60.0);
}

TEST_CASE("bench_cell measures a run in-process") {
  CellSample s = bench_cell(tiny_ssb_db(), "1.1", BenchImpl::Jff);
  CHECK(!s.oom);
  CHECK(s.elapsed_s > 0.0);
  CHECK(s.peak_rss_bytes > 0);
  CHECK(s.db_s >= 0.0);
}

TEST_CASE("report_csv lists one line per cell") {
  BenchReport report;
  report.cells.push_back({"1.1", BenchImpl::Engine, 0.5, 0.25, 0.25, 1024, false});
  report.cells.push_back({"4.2", BenchImpl::Jdf, 1.5, 1.0, 0.5, 2048, true});
  std::string csv = report_csv(report);
  CHECK(csv.find("query,impl,avg_s,engine_s,db_s,peak_rss_bytes,oom") == 0);
  CHECK(csv.find("1.1,engine,") != std::string::npos);
  CHECK(csv.find("4.2,jdf,") != std::string::npos);
  CHECK(csv.find("1024") != std::string::npos);
}
