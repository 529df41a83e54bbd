// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cubekit/error.hpp"
#include "cubekit/value.hpp"

namespace cubekit {

struct ConnectionConfig {
  std::string dbname;  // for the embedded driver this is the database file path
  std::string user;
  std::string password;
  std::string host = "localhost";
  std::string port = "5432";

  /// Reads CUBEKIT_DB_{NAME,USER,PASSWORD,HOST,PORT} from the environment.
  static ConnectionConfig from_env();
};

struct ColumnInfo {
  std::string name;
  std::string sql_type;
  bool is_numeric = false;
};

struct TableInfo {
  std::string name;
  std::int64_t row_count = 0;
  std::vector<ColumnInfo> columns;       // in definition order
  std::vector<std::string> primary_key;  // column names
};

struct ForeignKey {
  std::string from_table;
  std::string from_column;
  std::string to_table;
  std::string to_column;
};

struct CatalogSnapshot {
  std::vector<TableInfo> tables;
  std::vector<ForeignKey> foreign_keys;

  const TableInfo* find_table(const std::string& name) const;
  /// FKs leaving `table`, ordered by the source column's position.
  std::vector<ForeignKey> fks_from(const std::string& table) const;
  bool is_key_column(const std::string& table, const std::string& column) const;

  bool operator==(const CatalogSnapshot&) const;
};

inline bool operator==(const ColumnInfo& a, const ColumnInfo& b) {
  return a.name == b.name && a.sql_type == b.sql_type && a.is_numeric == b.is_numeric;
}
inline bool operator==(const TableInfo& a, const TableInfo& b) {
  return a.name == b.name && a.row_count == b.row_count && a.columns == b.columns &&
         a.primary_key == b.primary_key;
}
inline bool operator==(const ForeignKey& a, const ForeignKey& b) {
  return a.from_table == b.from_table && a.from_column == b.from_column &&
         a.to_table == b.to_table && a.to_column == b.to_column;
}

struct ResultSet {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
  double db_seconds = 0.0;
};

struct QueryPlan;  // sqlgen

/// Narrow driver surface so the engine runs against any SQL backend.
class Driver {
 public:
  virtual ~Driver() = default;
  virtual CatalogSnapshot introspect() = 0;
  virtual ResultSet execute(const std::string& sql, const std::vector<Value>& params) = 0;
  virtual void execute_script(const std::string& sql) = 0;
  virtual void close() = 0;
};

/// Embedded SQLite backend. `config.dbname` is the database file path.
std::unique_ptr<Driver> connect_sqlite(const ConnectionConfig& config);

/// Driver decorator counting execute() calls; used by tests and the CLI's
/// timing line.
class CountingDriver : public Driver {
 public:
  explicit CountingDriver(std::unique_ptr<Driver> inner) : inner_(std::move(inner)) {}

  CatalogSnapshot introspect() override { return inner_->introspect(); }
  ResultSet execute(const std::string& sql, const std::vector<Value>& params) override {
    ++executes_;
    return inner_->execute(sql, params);
  }
  void execute_script(const std::string& sql) override { inner_->execute_script(sql); }
  void close() override { inner_->close(); }

  std::int64_t executes() const { return executes_; }
  void reset() { executes_ = 0; }

 private:
  std::unique_ptr<Driver> inner_;
  std::int64_t executes_ = 0;
};

}  // namespace cubekit
