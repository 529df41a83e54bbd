// SPDX-License-Identifier: Apache-2.0
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "cubekit/bench.hpp"
#include "cubekit/dsl.hpp"
#include "cubekit/inference.hpp"
#include "cubekit/metadata.hpp"
#include "cubekit/view_builder.hpp"

namespace {

using namespace cubekit;

std::string slurp(std::istream& in) {
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingTable, "cannot read '" + path + "'");
  return slurp(in);
}

ConnectionConfig config_for(const std::string& db_flag) {
  ConnectionConfig cfg = ConnectionConfig::from_env();
  if (!db_flag.empty()) cfg.dbname = db_flag;
  if (cfg.dbname.empty())
    throw Error(ErrorCode::ConnectionFailed, "no database given (--db or CUBEKIT_DB_NAME)");
  return cfg;
}

std::shared_ptr<CubeSession> open_session(const std::string& db_flag,
                                          const std::string& meta_path) {
  std::shared_ptr<Driver> driver = connect_sqlite(config_for(db_flag));
  MetaGraph graph = parse_turtle(read_file(meta_path));
  auto cube = std::make_shared<CubeBinding>(schema_from_graph(graph, driver->introspect()));
  return std::make_shared<CubeSession>(driver,
                                       std::vector<std::shared_ptr<const CubeBinding>>{cube});
}

int cmd_infer(const std::string& db_flag, const std::string& out_path,
              const std::vector<std::string>& name_flags) {
  std::shared_ptr<Driver> driver = connect_sqlite(config_for(db_flag));
  InferenceReport report = infer_cube(driver->introspect());
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";

  NameOverrides names;
  for (const auto& flag : name_flags) {
    auto eq = flag.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ParseError, "--name expects key=value, got '" + flag + "'");
    names[flag.substr(0, eq)] = flag.substr(eq + 1);
  }

  std::ofstream out(out_path);
  if (!out) throw Error(ErrorCode::Internal, "cannot write '" + out_path + "'");
  out << serialize_turtle(add_to_graph(report.cube, "eg", names));
  return 0;
}

int cmd_query(const std::string& db_flag, const std::string& meta_path, const std::string& file,
              const std::string& format, bool explain, bool allow_huge) {
  auto session = open_session(db_flag, meta_path);
  std::string text = file.empty() ? slurp(std::cin) : read_file(file);
  ParsedQuery parsed = parse_query(text, session);
  ViewBuilder builder(session, parsed.view.cube);

  if (explain) {
    QueryPlan plan = builder.explain(parsed.view);
    std::cout << plan.sql << "\n";
    return 0;
  }
  OutputResult res = builder.output(parsed.view, allow_huge);
  std::cout << render(res.table, format == "csv" ? RenderFormat::Csv : RenderFormat::Pretty);
  std::fprintf(stderr, "engine=%.3fs db=%.3fs\n", res.engine_seconds, res.db_seconds);
  return 0;
}

int cmd_describe(const std::string& db_flag, const std::string& meta_path,
                 const std::string& path) {
  auto session = open_session(db_flag, meta_path);
  if (path.empty()) {
    for (const auto& name : session->views()) std::cout << name << "\n";
    return 0;
  }
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(part);

  auto cube = session->view(parts[0]);
  if (parts.size() == 1) {
    std::cout << "dimensions:";
    for (const auto& d : session->dimension_names(*cube)) std::cout << " " << d;
    std::cout << "\nmeasures:";
    for (const auto& m : session->measure_names(*cube)) std::cout << " " << m;
    std::cout << "\n";
    return 0;
  }
  if (parts.size() == 2) {
    for (const auto& chain : session->hierarchies(*cube, parts[1])) {
      std::cout << "[";
      for (std::size_t i = 0; i < chain.size(); ++i) std::cout << (i ? ", " : "") << chain[i];
      std::cout << "]\n";
    }
    return 0;
  }
  if (parts.size() == 3) {
    for (const auto& a : session->attributes(*cube, parts[1], parts[2])) std::cout << a << "\n";
    return 0;
  }
  throw Error(ErrorCode::ParseError, "describe path has too many components: '" + path + "'");
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConnectionFailed:
    case ErrorCode::SqlError:
      return 2;
    case ErrorCode::Internal:
      return 3;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubekit - semantic-layer OLAP engine"};
  app.require_subcommand(1);

  std::string db_flag, meta_path = "meta.ttl", out_path = "meta.ttl";
  std::vector<std::string> name_flags;

  auto* infer = app.add_subcommand("infer", "Infer cube metadata from the database");
  infer->add_option("--db", db_flag, "SQLite database file");
  infer->add_option("--out", out_path, "Output turtle file");
  infer->add_option("--name", name_flags, "Display-name override key=value ('view' renames the cube)");

  std::string query_file, format = "pretty";
  bool explain = false, allow_huge = false;
  auto* query = app.add_subcommand("query", "Run a query file against the cube");
  query->add_option("--db", db_flag, "SQLite database file");
  query->add_option("--meta", meta_path, "Metadata turtle file");
  query->add_option("--file", query_file, "Query file (default: stdin)");
  query->add_option("--format", format, "Output format: pretty or csv")
      ->check(CLI::IsMember({"pretty", "csv"}));
  query->add_flag("--explain", explain, "Print the generated SQL instead of running it");
  query->add_flag("--allow-huge", allow_huge, "Allow output of a default (all-members) view");

  std::string describe_path;
  auto* describe = app.add_subcommand("describe", "List views, hierarchies, or attributes");
  describe->add_option("--db", db_flag, "SQLite database file");
  describe->add_option("--meta", meta_path, "Metadata turtle file");
  describe->add_option("path", describe_path, "View[.dimension[.level]]");

  auto* ssb = app.add_subcommand("ssb", "Star Schema Benchmark harness");
  ssb->require_subcommand(1);

  double sf = 0.01;
  std::uint64_t seed = 42;
  std::string dir = "ssb-data";
  auto* gen = ssb->add_subcommand("gen", "Generate SSB CSV files");
  gen->add_option("--sf", sf, "Scale factor (fact rows = 6,000,000 x sf)");
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--out", dir, "Output directory");

  auto* load = ssb->add_subcommand("load", "Load CSV files into a fresh database");
  load->add_option("--dir", dir, "CSV directory");
  load->add_option("--db", db_flag, "Target SQLite database file")->required();

  std::string impls_flag = "engine,jff,jdf,sqlj", queries_flag, report_path;
  int runs = 5;
  auto* bench = ssb->add_subcommand("bench", "Run the measurement protocol");
  bench->add_option("--db", db_flag, "SQLite database file")->required();
  bench->add_option("--impls", impls_flag, "Comma-separated: engine,jff,jdf,sqlj");
  bench->add_option("--queries", queries_flag, "Comma-separated query ids (default: all)");
  bench->add_option("--runs", runs, "Runs per cell (>= 3)");
  bench->add_option("--seed", seed, "Shuffle seed");
  bench->add_option("--report", report_path, "Report CSV path (default: stdout)");

  std::string cell_query, cell_impl;
  auto* cell = ssb->add_subcommand("bench-cell", "");  // internal: one isolated measurement
  cell->add_option("--db", db_flag)->required();
  cell->add_option("--query", cell_query)->required();
  cell->add_option("--impl", cell_impl)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*infer) return cmd_infer(db_flag, out_path, name_flags);
    if (*query) return cmd_query(db_flag, meta_path, query_file, format, explain, allow_huge);
    if (*describe) return cmd_describe(db_flag, meta_path, describe_path);
    if (*gen) {
      ssb_generate(sf, seed, dir);
      return 0;
    }
    if (*load) {
      ssb_load(dir, db_flag);
      return 0;
    }
    if (*cell) {
      CellSample s = bench_cell(db_flag, cell_query, bench_impl_from(cell_impl));
      std::printf("%.6f %.6f %.6f %lu %d\n", s.elapsed_s, s.engine_s, s.db_s,
                  static_cast<unsigned long>(s.peak_rss_bytes), s.oom ? 1 : 0);
      return 0;
    }
    if (*bench) {
      BenchConfig config;
      config.scale_factor = sf;
      config.runs = runs;
      config.seed = seed;
      std::stringstream is(impls_flag);
      std::string item;
      while (std::getline(is, item, ',')) config.impls.push_back(bench_impl_from(item));
      if (!queries_flag.empty()) {
        std::stringstream qs(queries_flag);
        while (std::getline(qs, item, ',')) config.queries.push_back(item);
      }
      char exe[4096];
      ssize_t n = readlink("/proc/self/exe", exe, sizeof exe - 1);
      if (n <= 0) throw Error(ErrorCode::Internal, "cannot locate own executable");
      exe[n] = '\0';
      BenchReport report = run_bench(config, db_flag, exe);
      std::string csv = report_csv(report);
      if (report_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(report_path);
        out << csv;
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
