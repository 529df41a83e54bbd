// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubekit/dsl.hpp"
#include "cubekit/shaper.hpp"

namespace cubekit {

// ---------------------------------------------------------------------------
// SSB data generation and loading
// ---------------------------------------------------------------------------

/// Writes the snowflaked SSB tables as CSV files (header line first).
/// The fact table gets round(6,000,000 * sf) rows; dimension domains are
/// fixed so query constants stay valid across scale factors. Deterministic
/// per (sf, seed).
void ssb_generate(double sf, std::uint64_t seed, const std::string& out_dir);

/// Creates the SSB tables (PKs and FKs per the snowflake layout) in the
/// SQLite database at `db_path` and bulk-loads the CSVs. The database must
/// be empty.
void ssb_load(const std::string& dir, const std::string& db_path);

/// Names of all 13 SSB tables, fact first.
const std::vector<std::string>& ssb_tables();

// ---------------------------------------------------------------------------
// Queries and baselines
// ---------------------------------------------------------------------------

struct SsbQuery {
  std::string id;  // "1.1" .. "4.3"
  int flight;      // 1..4
  std::string dsl;
};

/// All 13 queries transcribed into the query DSL.
const std::vector<SsbQuery>& ssb_queries();
const SsbQuery& ssb_query(const std::string& id);

enum class BenchImpl { Engine, Jff, Jdf, Sqlj };

const char* to_string(BenchImpl impl);
BenchImpl bench_impl_from(const std::string& name);

/// Runs one query through one implementation. The three baselines pull raw
/// tables out of the database and join/filter/aggregate in memory; Engine
/// compiles the view to a single SQL statement. All four produce equal
/// tables. `db_seconds_out` accumulates time spent inside the database.
PivotTable run_impl(BenchImpl impl, const CubeView& view, CubeSession& session,
                    double* db_seconds_out = nullptr);

// ---------------------------------------------------------------------------
// Measurement protocol
// ---------------------------------------------------------------------------

struct BenchConfig {
  double scale_factor = 0.01;
  std::vector<std::string> queries;  // empty = all 13
  std::vector<BenchImpl> impls;
  int runs = 5;
  std::uint64_t seed = 0;
};

struct BenchCell {
  std::string query;
  BenchImpl impl{};
  double avg_s = 0.0;
  double engine_s = 0.0;  // averaged like avg_s
  double db_s = 0.0;
  std::uint64_t peak_rss_bytes = 0;  // max over kept runs
  bool oom = false;
};

struct BenchReport {
  std::vector<BenchCell> cells;
};

/// Drop the highest and lowest sample, average the rest.
double protocol_average(std::vector<double> samples);

/// One measured execution, run inside a `ssb bench-cell` subprocess so the
/// peak RSS of the cell is isolated. Produced by the child on stdout as
/// "elapsed_s engine_s db_s peak_rss_bytes oom".
struct CellSample {
  double elapsed_s = 0.0;
  double engine_s = 0.0;
  double db_s = 0.0;
  std::uint64_t peak_rss_bytes = 0;
  bool oom = false;
};

/// Executes every (query, impl) cell `runs` times in seed-shuffled order,
/// spawning `exe_path ssb bench-cell` per run and reading the sample line.
BenchReport run_bench(const BenchConfig& config, const std::string& db_path,
                      const std::string& exe_path);

/// The child side of one measurement: runs the cell once in-process and
/// reports its own peak RSS.
CellSample bench_cell(const std::string& db_path, const std::string& query_id, BenchImpl impl);

std::string report_csv(const BenchReport& report);

}  // namespace cubekit
