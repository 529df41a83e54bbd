// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cubekit/metadata.hpp"
#include "fixtures.hpp"

using namespace cubekit;
namespace fs = std::filesystem;

namespace {

const std::string kCli = CUBEKIT_CLI_PATH;

struct Workdir {
  fs::path dir;
  std::string db, meta;

  Workdir() {
    dir = fs::temp_directory_path() / "cubekit-cli-test";
    fs::create_directories(dir);
    db = (dir / "sales.db").string();
    meta = (dir / "meta.ttl").string();
    testfx::write_salesdb(db);
  }

  std::string path(const char* name) const { return (dir / name).string(); }
};

int run(const std::string& args, const std::string& stdout_path) {
  std::string cmd = kCli + " " + args + " > " + stdout_path + " 2> /dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("infer, describe, and query through the command line") {
  Workdir wd;
  std::string out = wd.path("out.txt");

  REQUIRE(run("infer --db " + wd.db + " --out " + wd.meta, out) == 0);
  MetaGraph g = parse_turtle(slurp(wd.meta));
  CHECK(g.subjects_of_type("qb:DataStructureDefinition").size() == 1);
  CHECK(g.subjects_of_type("qb:DimensionProperty").size() == 3);

  SUBCASE("describe lists views and drills into dimensions") {
    REQUIRE(run("describe --db " + wd.db + " --meta " + wd.meta, out) == 0);
    CHECK(slurp(out) == "Sales\n");

    REQUIRE(run("describe --db " + wd.db + " --meta " + wd.meta + " Sales", out) == 0);
    std::string text = slurp(out);
    CHECK(text.find("dimensions: datekey productkey storekey") != std::string::npos);
    CHECK(text.find("measures: TotalSalesPrice UnitSales") != std::string::npos);

    REQUIRE(run("describe --db " + wd.db + " --meta " + wd.meta + " Sales.Date", out) == 0);
    CHECK(slurp(out) == "[date, month, year, ALL]\n");

    REQUIRE(run("describe --db " + wd.db + " --meta " + wd.meta + " Sales.Store.nation", out) == 0);
    CHECK(slurp(out) == "nation\n");
  }

  SUBCASE("query renders csv and pretty output") {
    std::string qfile = wd.path("query.txt");
    write(qfile, testfx::kSalesQuery);

    REQUIRE(run("query --db " + wd.db + " --meta " + wd.meta + " --file " + qfile +
                    " --format csv",
                out) == 0);
    CHECK(slurp(out) ==
          ",Aalborg,Aalborg,Aalborg,Aalborg\n"
          ",January,January,February,February\n"
          ",TSP,US,TSP,US\n"
          "Blouse,946513,754,468954,659\n"
          "Pants,846598,378,120546,129\n");

    REQUIRE(run("query --db " + wd.db + " --meta " + wd.meta + " --file " + qfile, out) == 0);
    std::string pretty = slurp(out);
    CHECK(pretty.find("946513") != std::string::npos);
    CHECK(pretty.front() == '+');
  }

  SUBCASE("explain prints the SQL without executing") {
    std::string qfile = wd.path("query.txt");
    write(qfile, testfx::kSalesQuery);
    REQUIRE(run("query --db " + wd.db + " --meta " + wd.meta + " --file " + qfile + " --explain",
                out) == 0);
    std::string sql = slurp(out);
    CHECK(sql.find("GROUP BY") != std::string::npos);
    CHECK(sql.find("SUM(") != std::string::npos);
  }

  SUBCASE("name overrides rename the view") {
    std::string meta2 = wd.path("meta2.ttl");
    REQUIRE(run("infer --db " + wd.db + " --out " + meta2 +
                    " --name view=Retail --name storekey=Store",
                out) == 0);
    REQUIRE(run("describe --db " + wd.db + " --meta " + meta2, out) == 0);
    CHECK(slurp(out) == "Retail\n");
    REQUIRE(run("describe --db " + wd.db + " --meta " + meta2 + " Retail", out) == 0);
    CHECK(slurp(out).find("Store") != std::string::npos);
  }
}

TEST_CASE("exit codes distinguish user, database, and internal errors") {
  Workdir wd;
  std::string out = wd.path("out.txt");
  REQUIRE(run("infer --db " + wd.db + " --out " + wd.meta, out) == 0);

  // Unreadable database -> 2.
  CHECK(run("infer --db /nonexistent-dir/x.db --out " + wd.meta, out) == 2);

  // Bad query text -> 1.
  std::string bad = wd.path("bad.txt");
  write(bad, "view Sales\nfrobnicate\n");
  CHECK(run("query --db " + wd.db + " --meta " + wd.meta + " --file " + bad, out) == 1);

  // Missing metadata file -> 1.
  CHECK(run("query --db " + wd.db + " --meta /nonexistent.ttl --file " + bad, out) == 1);

  // Default view without --allow-huge -> 1; with it -> 0.
  std::string huge = wd.path("huge.txt");
  write(huge, "view Sales\n");
  CHECK(run("query --db " + wd.db + " --meta " + wd.meta + " --file " + huge + " --format csv",
            out) == 1);
  // With --allow-huge a default view renders (toy cube: unique bottom attrs).
  std::string toydb = wd.path("toy.db");
  std::string toymeta = wd.path("toy.ttl");
  testfx::write_snowflake_toy(toydb);
  REQUIRE(run("infer --db " + toydb + " --out " + toymeta, out) == 0);
  std::string huge2 = wd.path("huge2.txt");
  write(huge2, "view salesdb_snowflake\n");
  CHECK(run("query --db " + toydb + " --meta " + toymeta + " --file " + huge2 +
                " --format csv --allow-huge",
            out) == 0);
}

TEST_CASE("ssb gen and load run through the command line") {
  Workdir wd;
  std::string out = wd.path("out.txt");
  std::string data = wd.path("ssb-data");
  std::string db = wd.path("ssb.db");
  fs::remove_all(data);
  std::remove(db.c_str());

  REQUIRE(run("ssb gen --sf 0.0005 --seed 1 --out " + data, out) == 0);
  CHECK(fs::exists(fs::path(data) / "lineorder.csv"));
  REQUIRE(run("ssb load --dir " + data + " --db " + db, out) == 0);

  REQUIRE(run("ssb bench-cell --db " + db + " --query 1.1 --impl engine", out) == 0);
  std::istringstream line(slurp(out));
  double elapsed, engine, dbsec;
  unsigned long rss;
  int oom;
  line >> elapsed >> engine >> dbsec >> rss >> oom;
  CHECK(elapsed > 0.0);
  CHECK(rss > 0);
  CHECK(oom == 0);
}
