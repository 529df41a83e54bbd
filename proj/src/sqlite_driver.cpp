// SPDX-License-Identifier: Apache-2.0
#include <sqlite3.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>

#include "cubekit/dbio.hpp"

namespace cubekit {

ConnectionConfig ConnectionConfig::from_env() {
  auto get = [](const char* name, const char* fallback) {
    const char* v = std::getenv(name);
    return std::string(v ? v : fallback);
  };
  ConnectionConfig cfg;
  cfg.dbname = get("CUBEKIT_DB_NAME", "");
  cfg.user = get("CUBEKIT_DB_USER", "");
  cfg.password = get("CUBEKIT_DB_PASSWORD", "");
  cfg.host = get("CUBEKIT_DB_HOST", "localhost");
  cfg.port = get("CUBEKIT_DB_PORT", "5432");
  return cfg;
}

const TableInfo* CatalogSnapshot::find_table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

std::vector<ForeignKey> CatalogSnapshot::fks_from(const std::string& table) const {
  std::vector<ForeignKey> out;
  for (const auto& fk : foreign_keys)
    if (fk.from_table == table) out.push_back(fk);
  const TableInfo* t = find_table(table);
  if (t) {
    auto pos = [&](const std::string& col) {
      for (std::size_t i = 0; i < t->columns.size(); ++i)
        if (t->columns[i].name == col) return i;
      return t->columns.size();
    };
    std::stable_sort(out.begin(), out.end(), [&](const ForeignKey& a, const ForeignKey& b) {
      return pos(a.from_column) < pos(b.from_column);
    });
  }
  return out;
}

bool CatalogSnapshot::is_key_column(const std::string& table, const std::string& column) const {
  const TableInfo* t = find_table(table);
  if (t && std::find(t->primary_key.begin(), t->primary_key.end(), column) != t->primary_key.end())
    return true;
  for (const auto& fk : foreign_keys)
    if (fk.from_table == table && fk.from_column == column) return true;
  return false;
}

bool CatalogSnapshot::operator==(const CatalogSnapshot& other) const {
  return tables == other.tables && foreign_keys == other.foreign_keys;
}

namespace {

class SqliteDriver : public Driver {
 public:
  explicit SqliteDriver(const ConnectionConfig& config) {
    int rc = sqlite3_open_v2(config.dbname.c_str(), &db_,
                             SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE, nullptr);
    if (rc != SQLITE_OK) {
      std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
      if (db_) sqlite3_close(db_);
      throw Error(ErrorCode::ConnectionFailed, "cannot open '" + config.dbname + "': " + msg);
    }
    sqlite3_exec(db_, "PRAGMA foreign_keys = ON", nullptr, nullptr, nullptr);
  }

  ~SqliteDriver() override { close(); }

  void close() override {
    if (db_) {
      sqlite3_close(db_);
      db_ = nullptr;
    }
  }

  CatalogSnapshot introspect() override {
    CatalogSnapshot snap;
    auto names = query("SELECT name FROM sqlite_master WHERE type = 'table' "
                       "AND name NOT LIKE 'sqlite_%' ORDER BY rowid");
    for (auto& row : names.rows) {
      TableInfo table;
      table.name = std::get<std::string>(row[0]);

      auto cols = query("PRAGMA table_info(\"" + table.name + "\")");
      // pk ordinal -> column name, to keep composite key order
      std::vector<std::pair<std::int64_t, std::string>> pk_cols;
      for (auto& c : cols.rows) {
        ColumnInfo info;
        info.name = std::get<std::string>(c[1]);
        info.sql_type = is_null(c[2]) ? "" : std::get<std::string>(c[2]);
        info.is_numeric = numeric_type(info.sql_type);
        std::int64_t pk = is_null(c[5]) ? 0 : as_int(c[5]);
        if (pk > 0) pk_cols.emplace_back(pk, info.name);
        table.columns.push_back(std::move(info));
      }
      std::sort(pk_cols.begin(), pk_cols.end());
      for (auto& [ord, name] : pk_cols) table.primary_key.push_back(name);

      auto fks = query("PRAGMA foreign_key_list(\"" + table.name + "\")");
      for (auto& f : fks.rows) {
        ForeignKey fk;
        fk.from_table = table.name;
        fk.to_table = std::get<std::string>(f[2]);
        fk.from_column = std::get<std::string>(f[3]);
        fk.to_column = is_null(f[4]) ? "" : std::get<std::string>(f[4]);
        snap.foreign_keys.push_back(std::move(fk));
      }

      auto count = query("SELECT COUNT(*) FROM \"" + table.name + "\"");
      table.row_count = as_int(count.rows.at(0).at(0));
      snap.tables.push_back(std::move(table));
    }
    // Fill implicit FK targets (references to a table's PK).
    for (auto& fk : snap.foreign_keys) {
      if (fk.to_column.empty()) {
        const TableInfo* target = snap.find_table(fk.to_table);
        if (target && target->primary_key.size() == 1) fk.to_column = target->primary_key[0];
      }
    }
    return snap;
  }

  ResultSet execute(const std::string& sql, const std::vector<Value>& params) override {
    auto start = std::chrono::steady_clock::now();
    sqlite3_stmt* stmt = nullptr;
    if (sqlite3_prepare_v2(db_, sql.c_str(), -1, &stmt, nullptr) != SQLITE_OK)
      throw SqlError(sqlite3_errmsg(db_), sql);
    for (std::size_t i = 0; i < params.size(); ++i) bind(stmt, static_cast<int>(i + 1), params[i]);

    ResultSet rs;
    int ncols = sqlite3_column_count(stmt);
    for (int i = 0; i < ncols; ++i) rs.columns.emplace_back(sqlite3_column_name(stmt, i));
    int rc;
    while ((rc = sqlite3_step(stmt)) == SQLITE_ROW) {
      std::vector<Value> row;
      row.reserve(static_cast<std::size_t>(ncols));
      for (int i = 0; i < ncols; ++i) row.push_back(read_column(stmt, i));
      rs.rows.push_back(std::move(row));
    }
    if (rc != SQLITE_DONE) {
      std::string msg = sqlite3_errmsg(db_);
      sqlite3_finalize(stmt);
      throw SqlError(msg, sql);
    }
    sqlite3_finalize(stmt);
    rs.db_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rs;
  }

  void execute_script(const std::string& sql) override {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown error";
      sqlite3_free(err);
      throw SqlError(msg, sql);
    }
  }

 private:
  ResultSet query(const std::string& sql) { return execute(sql, {}); }

  static std::int64_t as_int(const Value& v) {
    if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
    if (auto* d = std::get_if<double>(&v)) return static_cast<std::int64_t>(*d);
    if (auto* s = std::get_if<std::string>(&v)) return std::atoll(s->c_str());
    return 0;
  }

  static bool numeric_type(const std::string& declared) {
    std::string u;
    for (char c : declared) u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return u.find("INT") != std::string::npos || u.find("REAL") != std::string::npos ||
           u.find("NUM") != std::string::npos || u.find("DEC") != std::string::npos ||
           u.find("DOUB") != std::string::npos || u.find("FLOA") != std::string::npos;
  }

  static void bind(sqlite3_stmt* stmt, int idx, const Value& v) {
    switch (v.index()) {
      case 0: sqlite3_bind_null(stmt, idx); break;
      case 1: sqlite3_bind_int64(stmt, idx, std::get<std::int64_t>(v)); break;
      case 2: sqlite3_bind_double(stmt, idx, std::get<double>(v)); break;
      default: {
        const auto& s = std::get<std::string>(v);
        sqlite3_bind_text(stmt, idx, s.c_str(), static_cast<int>(s.size()), SQLITE_TRANSIENT);
      }
    }
  }

  static Value read_column(sqlite3_stmt* stmt, int i) {
    switch (sqlite3_column_type(stmt, i)) {
      case SQLITE_NULL: return std::monostate{};
      case SQLITE_INTEGER: return static_cast<std::int64_t>(sqlite3_column_int64(stmt, i));
      case SQLITE_FLOAT: return sqlite3_column_double(stmt, i);
      default: {
        const unsigned char* text = sqlite3_column_text(stmt, i);
        return std::string(reinterpret_cast<const char*>(text ? text : (const unsigned char*)""));
      }
    }
  }

  sqlite3* db_ = nullptr;
};

}  // namespace

std::unique_ptr<Driver> connect_sqlite(const ConnectionConfig& config) {
  return std::make_unique<SqliteDriver>(config);
}

}  // namespace cubekit
