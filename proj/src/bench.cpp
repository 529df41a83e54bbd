// SPDX-License-Identifier: Apache-2.0
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "cubekit/bench.hpp"
#include "cubekit/inference.hpp"
#include "cubekit/view_builder.hpp"

namespace cubekit {

double protocol_average(std::vector<double> samples) {
  if (samples.size() < 3)
    throw Error(ErrorCode::Internal, "protocol needs at least three samples");
  std::sort(samples.begin(), samples.end());
  double sum = std::accumulate(samples.begin() + 1, samples.end() - 1, 0.0);
  return sum / static_cast<double>(samples.size() - 2);
}

CellSample bench_cell(const std::string& db_path, const std::string& query_id, BenchImpl impl) {
  CellSample sample;
  auto start = std::chrono::steady_clock::now();
  try {
    ConnectionConfig cfg;
    cfg.dbname = db_path;
    std::shared_ptr<Driver> driver = connect_sqlite(cfg);
    auto cube = std::make_shared<CubeBinding>(infer_cube(driver->introspect()).cube);
    auto session = std::make_shared<CubeSession>(
        driver, std::vector<std::shared_ptr<const CubeBinding>>{cube});

    ParsedQuery parsed = parse_query(ssb_query(query_id).dsl, session);
    run_impl(impl, parsed.view, *session, &sample.db_s);
  } catch (const std::bad_alloc&) {
    sample.oom = true;
  }
  sample.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  sample.engine_s = std::max(0.0, sample.elapsed_s - sample.db_s);

  struct rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  sample.peak_rss_bytes = static_cast<std::uint64_t>(ru.ru_maxrss) * 1024;
  return sample;
}

namespace {

/// Runs one cell in a child process so its peak RSS is its own.
CellSample spawn_cell(const std::string& exe, const std::string& db_path,
                      const std::string& query_id, BenchImpl impl) {
  int fds[2];
  if (pipe(fds) != 0) throw Error(ErrorCode::Internal, "pipe() failed");
  pid_t pid = fork();
  if (pid < 0) throw Error(ErrorCode::Internal, "fork() failed");
  if (pid == 0) {
    dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    execl(exe.c_str(), exe.c_str(), "ssb", "bench-cell", "--db", db_path.c_str(), "--query",
          query_id.c_str(), "--impl", to_string(impl), static_cast<char*>(nullptr));
    _exit(127);
  }
  ::close(fds[1]);
  std::string output;
  char buf[256];
  ssize_t n;
  while ((n = read(fds[0], buf, sizeof buf)) > 0) output.append(buf, static_cast<std::size_t>(n));
  ::close(fds[0]);
  int status = 0;
  struct rusage ru{};
  wait4(pid, &status, 0, &ru);

  CellSample sample;
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    // Killed children (e.g. by the OOM killer) count as out-of-memory runs.
    sample.oom = true;
    sample.peak_rss_bytes = static_cast<std::uint64_t>(ru.ru_maxrss) * 1024;
    return sample;
  }
  int oom_flag = 0;
  if (std::sscanf(output.c_str(), "%lf %lf %lf %lu %d", &sample.elapsed_s, &sample.engine_s,
                  &sample.db_s, &sample.peak_rss_bytes, &oom_flag) != 5)
    throw Error(ErrorCode::Internal, "bad bench-cell output: " + output);
  sample.oom = oom_flag != 0;
  return sample;
}

}  // namespace

BenchReport run_bench(const BenchConfig& config, const std::string& db_path,
                      const std::string& exe_path) {
  if (config.runs < 3) throw Error(ErrorCode::Internal, "protocol needs runs >= 3");
  std::vector<std::string> queries = config.queries;
  if (queries.empty())
    for (const auto& q : ssb_queries()) queries.push_back(q.id);

  struct CellRef {
    std::string query;
    BenchImpl impl;
  };
  std::vector<CellRef> cells;
  for (const auto& q : queries)
    for (BenchImpl impl : config.impls) cells.push_back({ssb_query(q).id, impl});

  // Randomized execution order over (cell, run) pairs, per the protocol.
  std::vector<std::size_t> schedule;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int r = 0; r < config.runs; ++r) schedule.push_back(c);
  std::mt19937_64 rng(config.seed);
  std::shuffle(schedule.begin(), schedule.end(), rng);

  std::vector<std::vector<CellSample>> samples(cells.size());
  for (std::size_t c : schedule)
    samples[c].push_back(spawn_cell(exe_path, db_path, cells[c].query, cells[c].impl));

  BenchReport report;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    BenchCell cell;
    cell.query = cells[c].query;
    cell.impl = cells[c].impl;
    std::vector<double> elapsed, engine, db;
    for (const auto& s : samples[c]) {
      elapsed.push_back(s.elapsed_s);
      engine.push_back(s.engine_s);
      db.push_back(s.db_s);
      cell.peak_rss_bytes = std::max(cell.peak_rss_bytes, s.peak_rss_bytes);
      cell.oom = cell.oom || s.oom;
    }
    cell.avg_s = protocol_average(elapsed);
    cell.engine_s = protocol_average(engine);
    cell.db_s = protocol_average(db);
    report.cells.push_back(std::move(cell));
  }
  return report;
}

std::string report_csv(const BenchReport& report) {
  std::ostringstream os;
  os << "query,impl,avg_s,engine_s,db_s,peak_rss_bytes,oom\n";
  for (const auto& c : report.cells) {
    char row[256];
    std::snprintf(row, sizeof row, "%s,%s,%.6f,%.6f,%.6f,%lu,%d\n", c.query.c_str(),
                  to_string(c.impl), c.avg_s, c.engine_s, c.db_s,
                  static_cast<unsigned long>(c.peak_rss_bytes), c.oom ? 1 : 0);
    os << row;
  }
  return os.str();
}

}  // namespace cubekit
