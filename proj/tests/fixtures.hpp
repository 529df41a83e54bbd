// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "cubekit/inference.hpp"
#include "cubekit/navigator.hpp"

namespace cubekit::testfx {

/// In-memory snowflake sales database whose January/February Aalborg
/// aggregates hit known totals. Chains: date->month->year,
/// product->brand1->category->mfgr, city->nation->region.
std::shared_ptr<Driver> open_salesdb();

/// The four-dimension toy snowflake (supplier_name, store_address ->
/// store_city -> store_county, product_name, date_day) used by the
/// metadata golden tests.
std::shared_ptr<Driver> open_snowflake_toy();

/// Session over `driver` with its single inferred cube bound.
std::shared_ptr<CubeSession> session_over(std::shared_ptr<Driver> driver);

/// File-backed copies of the fixtures, for subprocess tests. Any existing
/// file at `db_path` is replaced.
void write_salesdb(const std::string& db_path);
void write_snowflake_toy(const std::string& db_path);

/// The worked-example query (months x categories x Aalborg, TSP/US).
extern const char* kSalesQuery;

}  // namespace cubekit::testfx
