// SPDX-License-Identifier: Apache-2.0
#include "fixtures.hpp"

#include <cstdio>

namespace cubekit::testfx {

namespace {

std::shared_ptr<Driver> open_memory(const char* script) {
  ConnectionConfig cfg;
  cfg.dbname = ":memory:";
  std::shared_ptr<Driver> driver = connect_sqlite(cfg);
  driver->execute_script(script);
  return driver;
}

const char* kSalesScript = R"sql(
CREATE TABLE year (yearkey INTEGER PRIMARY KEY, year INTEGER);
CREATE TABLE month (monthkey INTEGER PRIMARY KEY, month TEXT,
                    yearkey INTEGER REFERENCES year(yearkey));
CREATE TABLE "date" (datekey INTEGER PRIMARY KEY, day INTEGER,
                     monthkey INTEGER REFERENCES month(monthkey));
CREATE TABLE mfgr (mfgrkey INTEGER PRIMARY KEY, mfgr TEXT);
CREATE TABLE category (categorykey INTEGER PRIMARY KEY, category TEXT,
                       mfgrkey INTEGER REFERENCES mfgr(mfgrkey));
CREATE TABLE brand1 (brand1key INTEGER PRIMARY KEY, brand1 TEXT,
                     categorykey INTEGER REFERENCES category(categorykey));
CREATE TABLE product (productkey INTEGER PRIMARY KEY, product TEXT,
                      brand1key INTEGER REFERENCES brand1(brand1key));
CREATE TABLE region (regionkey INTEGER PRIMARY KEY, region TEXT);
CREATE TABLE nation (nationkey INTEGER PRIMARY KEY, nation TEXT,
                     regionkey INTEGER REFERENCES region(regionkey));
CREATE TABLE city (citykey INTEGER PRIMARY KEY, city TEXT,
                   nationkey INTEGER REFERENCES nation(nationkey));
CREATE TABLE sales (salekey INTEGER PRIMARY KEY,
                    datekey INTEGER REFERENCES "date"(datekey),
                    productkey INTEGER REFERENCES product(productkey),
                    storekey INTEGER REFERENCES city(citykey),
                    TotalSalesPrice INTEGER, UnitSales INTEGER);

INSERT INTO year VALUES (1, 2022);
INSERT INTO month VALUES
  (1,'January',1),(2,'February',1),(3,'March',1),(4,'April',1),
  (5,'May',1),(6,'June',1),(7,'July',1),(8,'August',1),
  (9,'September',1),(10,'October',1),(11,'November',1),(12,'December',1);
INSERT INTO "date"
  SELECT monthkey * 100 + 10, 10, monthkey FROM month
  UNION ALL
  SELECT monthkey * 100 + 24, 24, monthkey FROM month;

INSERT INTO mfgr VALUES (1, 'Acme');
INSERT INTO category VALUES (1, 'Blouse', 1), (2, 'Pants', 1);
INSERT INTO brand1 VALUES (1, 'B-100', 1), (2, 'P-200', 2);
INSERT INTO product VALUES (1, 'Blue Blouse', 1), (2, 'Red Pants', 2);

INSERT INTO region VALUES (1, 'Europe');
INSERT INTO nation VALUES (1, 'Denmark', 1);
INSERT INTO city VALUES (1, 'Aalborg', 1), (2, 'Copenhagen', 1);

-- January / February in Aalborg: two rows per cell, fixed totals.
INSERT INTO sales (datekey, productkey, storekey, TotalSalesPrice, UnitSales) VALUES
  (110, 1, 1, 500000, 400), (124, 1, 1, 446513, 354),   -- Jan Blouse: 946513 / 754
  (110, 2, 1, 800000, 300), (124, 2, 1,  46598,  78),   -- Jan Pants:  846598 / 378
  (210, 1, 1, 400000, 600), (224, 1, 1,  68954,  59),   -- Feb Blouse: 468954 / 659
  (210, 2, 1, 100000, 100), (224, 2, 1,  20546,  29),   -- Feb Pants:  120546 / 129
  (110, 1, 2,  77777,  70), (210, 2, 2,  33333,  30);   -- Copenhagen noise

-- The rest of the year, so the fact table outgrows the date table.
INSERT INTO sales (datekey, productkey, storekey, TotalSalesPrice, UnitSales)
  SELECT monthkey * 100 + 10, 1, 2, 1000 + monthkey, 10 FROM month WHERE monthkey >= 3;
INSERT INTO sales (datekey, productkey, storekey, TotalSalesPrice, UnitSales)
  SELECT monthkey * 100 + 24, 2, 1, 2000 + monthkey, 20 FROM month WHERE monthkey >= 3;
)sql";

const char* kSnowflakeScript = R"sql(
CREATE TABLE supplier_name (supplierid INTEGER PRIMARY KEY, name TEXT);
CREATE TABLE store_county (countyid INTEGER PRIMARY KEY, county TEXT);
CREATE TABLE store_city (cityid INTEGER PRIMARY KEY, city TEXT,
                         countyid INTEGER REFERENCES store_county(countyid));
CREATE TABLE store_address (storeid INTEGER PRIMARY KEY, address TEXT, size INTEGER,
                            cityid INTEGER REFERENCES store_city(cityid));
CREATE TABLE product_name (productid INTEGER PRIMARY KEY, name TEXT);
CREATE TABLE date_day (dateid INTEGER PRIMARY KEY, day TEXT);
CREATE TABLE salesdb_snowflake (saleid INTEGER PRIMARY KEY,
    supplier INTEGER REFERENCES supplier_name(supplierid),
    store INTEGER REFERENCES store_address(storeid),
    product INTEGER REFERENCES product_name(productid),
    date INTEGER REFERENCES date_day(dateid),
    unit_sales INTEGER, total_sales_price INTEGER);

INSERT INTO supplier_name VALUES (1, 'NordTex'), (2, 'WestWool');
INSERT INTO store_county VALUES (1, 'Nordjylland');
INSERT INTO store_city VALUES (1, 'Aalborg', 1);
INSERT INTO store_address VALUES (1, 'Bispensgade 4', 120, 1), (2, 'Vingaardsgade 9', 80, 1);
INSERT INTO product_name VALUES (1, 'Blouse'), (2, 'Pants');
INSERT INTO date_day VALUES (1, '2022-01-10'), (2, '2022-01-24');
INSERT INTO salesdb_snowflake (supplier, store, product, date, unit_sales, total_sales_price)
VALUES
  (1, 1, 1, 1, 12, 14400), (1, 2, 2, 1, 7, 9100), (2, 1, 1, 2, 20, 24000),
  (2, 2, 2, 2, 3, 3900), (1, 1, 2, 2, 5, 6500), (2, 2, 1, 1, 9, 10800);
)sql";

}  // namespace

namespace {

void write_db(const std::string& db_path, const char* script) {
  std::remove(db_path.c_str());
  ConnectionConfig cfg;
  cfg.dbname = db_path;
  connect_sqlite(cfg)->execute_script(script);
}

}  // namespace

void write_salesdb(const std::string& db_path) { write_db(db_path, kSalesScript); }

void write_snowflake_toy(const std::string& db_path) { write_db(db_path, kSnowflakeScript); }

std::shared_ptr<Driver> open_salesdb() { return open_memory(kSalesScript); }

std::shared_ptr<Driver> open_snowflake_toy() { return open_memory(kSnowflakeScript); }

std::shared_ptr<CubeSession> session_over(std::shared_ptr<Driver> driver) {
  auto cube = std::make_shared<CubeBinding>(infer_cube(driver->introspect()).cube);
  return std::make_shared<CubeSession>(std::move(driver),
                                       std::vector<std::shared_ptr<const CubeBinding>>{cube});
}

const char* kSalesQuery =
    "view Sales\n"
    "columns Date.month.month[\"January\", \"February\"]\n"
    "rows Product.category.category[\"Blouse\", \"Pants\"]\n"
    "pages Store.city.city[\"Aalborg\"]\n"
    "where Date.month.month == \"January\" or Date.month.month == \"February\"\n"
    "measures TSP = TotalSalesPrice, US = UnitSales\n";

}  // namespace cubekit::testfx
