// SPDX-License-Identifier: Apache-2.0
#include <sqlite3.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cubekit/bench.hpp"

namespace cubekit {

namespace {

// Column layout of the snowflaked SSB schema; 'i' integer, 't' text.
struct TableDef {
  const char* name;
  std::vector<std::pair<const char*, char>> cols;
  const char* constraints;  // trailing DDL (PK / FK clauses)
};

const std::vector<TableDef>& table_defs() {
  static const std::vector<TableDef> defs = {
      {"lineorder",
       {{"orderkey", 'i'},    {"linenumber", 'i'},    {"custkey", 'i'},
        {"partkey", 'i'},     {"suppkey", 'i'},       {"orderdate", 'i'},
        {"orderpriority", 't'}, {"shippriority", 't'}, {"quantity", 'i'},
        {"extendedprice", 'i'}, {"ordtotalprice", 'i'}, {"discount", 'i'},
        {"revenue", 'i'},     {"supplycost", 'i'},    {"tax", 'i'},
        {"commitdate", 'i'},  {"shipmode", 't'}},
       "PRIMARY KEY (orderkey, linenumber), "
       "FOREIGN KEY (custkey) REFERENCES customer(custkey), "
       "FOREIGN KEY (partkey) REFERENCES part(partkey), "
       "FOREIGN KEY (suppkey) REFERENCES supplier(suppkey), "
       "FOREIGN KEY (orderdate) REFERENCES day(daykey), "
       "FOREIGN KEY (commitdate) REFERENCES day(daykey)"},
      {"customer",
       {{"custkey", 'i'}, {"name", 't'}, {"address", 't'}, {"phone", 't'},
        {"mktsegment", 't'}, {"citykey", 'i'}},
       "PRIMARY KEY (custkey), FOREIGN KEY (citykey) REFERENCES city(citykey)"},
      {"supplier",
       {{"suppkey", 'i'}, {"name", 't'}, {"address", 't'}, {"phone", 't'}, {"citykey", 'i'}},
       "PRIMARY KEY (suppkey), FOREIGN KEY (citykey) REFERENCES city(citykey)"},
      {"city",
       {{"citykey", 'i'}, {"city", 't'}, {"nationkey", 'i'}},
       "PRIMARY KEY (citykey), FOREIGN KEY (nationkey) REFERENCES nation(nationkey)"},
      {"nation",
       {{"nationkey", 'i'}, {"nation", 't'}, {"regionkey", 'i'}},
       "PRIMARY KEY (nationkey), FOREIGN KEY (regionkey) REFERENCES region(regionkey)"},
      {"region", {{"regionkey", 'i'}, {"region", 't'}}, "PRIMARY KEY (regionkey)"},
      {"part",
       {{"partkey", 'i'}, {"name", 't'}, {"color", 't'}, {"type", 't'}, {"size", 'i'},
        {"container", 't'}, {"brand1key", 'i'}},
       "PRIMARY KEY (partkey), FOREIGN KEY (brand1key) REFERENCES brand1(brand1key)"},
      {"brand1",
       {{"brand1key", 'i'}, {"brand1", 't'}, {"categorykey", 'i'}},
       "PRIMARY KEY (brand1key), FOREIGN KEY (categorykey) REFERENCES category(categorykey)"},
      {"category",
       {{"categorykey", 'i'}, {"category", 't'}, {"mfgrkey", 'i'}},
       "PRIMARY KEY (categorykey), FOREIGN KEY (mfgrkey) REFERENCES mfgr(mfgrkey)"},
      {"mfgr", {{"mfgrkey", 'i'}, {"mfgr", 't'}}, "PRIMARY KEY (mfgrkey)"},
      {"day",
       {{"daykey", 'i'}, {"dayofweek", 't'}, {"daynuminweek", 'i'}, {"daynuminmonth", 'i'},
        {"sellingseason", 't'}, {"lastdayinweekfl", 'i'}, {"lastdayinmonthfl", 'i'},
        {"holidayfl", 'i'}, {"weekdayfl", 'i'}, {"daynuminyear", 'i'}, {"monthkey", 'i'}},
       "PRIMARY KEY (daykey), FOREIGN KEY (monthkey) REFERENCES month(monthkey)"},
      {"month",
       {{"monthkey", 'i'}, {"month", 't'}, {"yearmonthnum", 'i'}, {"yearmonth", 't'},
        {"monthnuminyear", 'i'}, {"yearkey", 'i'}},
       "PRIMARY KEY (monthkey), FOREIGN KEY (yearkey) REFERENCES year(yearkey)"},
      {"year", {{"yearkey", 'i'}, {"year", 'i'}}, "PRIMARY KEY (yearkey)"},
  };
  return defs;
}

const TableDef& def_of(const std::string& name) {
  for (const auto& d : table_defs())
    if (name == d.name) return d;
  throw Error(ErrorCode::Internal, "no SSB table '" + name + "'");
}

constexpr int kFirstYear = 1992;
constexpr int kYears = 7;
constexpr int kNationsPerRegion = 5;
constexpr int kCitiesPerNation = 10;
constexpr int kBrandsPerCategory = 40;
constexpr int kParts = 2000;

const char* kRegions[] = {"AFRICA", "AMERICA", "ASIA", "EUROPE", "MIDDLE EAST"};
const char* kNations[] = {
    "ALGERIA", "ETHIOPIA",  "KENYA",   "MOROCCO", "MOZAMBIQUE",      // AFRICA
    "ARGENTINA", "BRAZIL",  "CANADA",  "PERU",    "UNITED STATES",   // AMERICA
    "CHINA",   "INDIA",     "INDONESIA", "JAPAN", "VIETNAM",         // ASIA
    "FRANCE",  "GERMANY",   "ROMANIA", "RUSSIA",  "UNITED KINGDOM",  // EUROPE
    "EGYPT",   "IRAN",      "IRAQ",    "JORDAN",  "SAUDI ARABIA",    // MIDDLE EAST
};
const char* kMonthNames[] = {"January",   "February", "March",    "April",
                             "May",       "June",     "July",     "August",
                             "September", "October",  "November", "December"};
const char* kMonthAbbrev[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                              "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
const char* kWeekdays[] = {"Monday", "Tuesday",  "Wednesday", "Thursday",
                           "Friday", "Saturday", "Sunday"};
const char* kSegments[] = {"AUTOMOBILE", "BUILDING", "FURNITURE", "HOUSEHOLD", "MACHINERY"};
const char* kColors[] = {"almond", "azure", "blue", "green", "ivory", "linen", "plum", "red"};
const char* kTypes[] = {"ECONOMY ANODIZED", "LARGE BRUSHED", "MEDIUM POLISHED",
                        "PROMO BURNISHED", "SMALL PLATED", "STANDARD BURNISHED"};
const char* kContainers[] = {"JUMBO CASE", "LG BOX", "MED BAG", "SM PKG", "WRAP DRUM"};
const char* kPriorities[] = {"1-URGENT", "2-HIGH", "3-MEDIUM", "4-NOT SPECIFIED", "5-LOW"};
const char* kShipmodes[] = {"AIR", "FOB", "MAIL", "RAIL", "REG AIR", "SHIP", "TRUCK"};

const char* season_of(int month) {
  if (month == 12) return "Christmas";
  if (month <= 2) return "Winter";
  if (month <= 5) return "Spring";
  if (month <= 8) return "Summer";
  return "Fall";
}

class CsvWriter {
 public:
  CsvWriter(const std::string& dir, const TableDef& def)
      : out_(std::filesystem::path(dir) / (std::string(def.name) + ".csv")) {
    for (std::size_t i = 0; i < def.cols.size(); ++i)
      out_ << (i ? "," : "") << def.cols[i].first;
    out_ << "\n";
  }
  CsvWriter& field(std::int64_t v) {
    sep();
    out_ << v;
    return *this;
  }
  CsvWriter& field(const std::string& v) {
    sep();
    out_ << v;
    return *this;
  }
  void endrow() {
    out_ << "\n";
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ",";
    first_ = false;
  }
  std::ofstream out_;
  bool first_ = true;
};

int days_in_month(int year, int month) {
  static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && (year % 4 == 0 && (year % 100 != 0 || year % 400 == 0))) return 29;
  return d[month - 1];
}

}  // namespace

const std::vector<std::string>& ssb_tables() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& d : table_defs()) out.push_back(d.name);
    return out;
  }();
  return names;
}

void ssb_generate(double sf, std::uint64_t seed, const std::string& out_dir) {
  if (sf <= 0) throw Error(ErrorCode::Internal, "scale factor must be positive");
  std::filesystem::create_directories(out_dir);
  std::mt19937_64 rng(seed);

  // -- geography ----------------------------------------------------------
  {
    CsvWriter w(out_dir, def_of("region"));
    for (int r = 0; r < 5; ++r) w.field(r + 1).field(kRegions[r]).endrow();
  }
  {
    CsvWriter w(out_dir, def_of("nation"));
    for (int n = 0; n < 25; ++n)
      w.field(n + 1).field(kNations[n]).field(n / kNationsPerRegion + 1).endrow();
  }
  int n_cities = 25 * kCitiesPerNation;
  {
    CsvWriter w(out_dir, def_of("city"));
    for (int n = 0; n < 25; ++n)
      for (int c = 0; c < kCitiesPerNation; ++c) {
        // Real SSB city names: nation truncated to nine chars plus a digit.
        std::string name = std::string(kNations[n]).substr(0, 9) + std::to_string(c);
        w.field(n * kCitiesPerNation + c + 1).field(name).field(n + 1).endrow();
      }
  }

  // -- customers / suppliers (scale with sf) ------------------------------
  auto phone = [&rng] {
    std::uniform_int_distribution<int> d(1000000, 9999999);
    return "33-" + std::to_string(d(rng));
  };
  std::uniform_int_distribution<int> city_pick(1, n_cities);
  std::int64_t n_cust = std::max<std::int64_t>(100, std::llround(30000 * sf));
  {
    CsvWriter w(out_dir, def_of("customer"));
    std::uniform_int_distribution<int> seg(0, 4);
    for (std::int64_t i = 1; i <= n_cust; ++i)
      w.field(i)
          .field("Customer#" + std::to_string(i))
          .field("Address " + std::to_string(i))
          .field(phone())
          .field(kSegments[seg(rng)])
          .field(city_pick(rng))
          .endrow();
  }
  std::int64_t n_supp = std::max<std::int64_t>(20, std::llround(2000 * sf));
  {
    CsvWriter w(out_dir, def_of("supplier"));
    for (std::int64_t i = 1; i <= n_supp; ++i)
      w.field(i)
          .field("Supplier#" + std::to_string(i))
          .field("Address " + std::to_string(i))
          .field(phone())
          .field(city_pick(rng))
          .endrow();
  }

  // -- products -----------------------------------------------------------
  {
    CsvWriter w(out_dir, def_of("mfgr"));
    for (int m = 1; m <= 5; ++m) w.field(m).field("MFGR#" + std::to_string(m)).endrow();
  }
  {
    CsvWriter w(out_dir, def_of("category"));
    for (int m = 1; m <= 5; ++m)
      for (int c = 1; c <= 5; ++c)
        w.field((m - 1) * 5 + c)
            .field("MFGR#" + std::to_string(m) + std::to_string(c))
            .field(m)
            .endrow();
  }
  int n_brands = 25 * kBrandsPerCategory;
  {
    CsvWriter w(out_dir, def_of("brand1"));
    for (int m = 1; m <= 5; ++m)
      for (int c = 1; c <= 5; ++c)
        for (int b = 1; b <= kBrandsPerCategory; ++b) {
          int cat = (m - 1) * 5 + c;
          w.field((cat - 1) * kBrandsPerCategory + b)
              .field("MFGR#" + std::to_string(m) + std::to_string(c) + std::to_string(b))
              .field(cat)
              .endrow();
        }
  }
  {
    CsvWriter w(out_dir, def_of("part"));
    std::uniform_int_distribution<int> color(0, 7), type(0, 5), size(1, 50), cont(0, 4),
        brand(1, n_brands);
    for (int p = 1; p <= kParts; ++p)
      w.field(p)
          .field("Part " + std::to_string(p))
          .field(kColors[color(rng)])
          .field(kTypes[type(rng)])
          .field(size(rng))
          .field(kContainers[cont(rng)])
          .field(brand(rng))
          .endrow();
  }

  // -- calendar -----------------------------------------------------------
  {
    CsvWriter w(out_dir, def_of("year"));
    for (int y = 0; y < kYears; ++y) w.field(y + 1).field(kFirstYear + y).endrow();
  }
  {
    CsvWriter w(out_dir, def_of("month"));
    for (int y = 0; y < kYears; ++y)
      for (int m = 1; m <= 12; ++m)
        w.field(y * 12 + m)
            .field(kMonthNames[m - 1])
            .field((kFirstYear + y) * 100 + m)
            .field(std::string(kMonthAbbrev[m - 1]) + std::to_string(kFirstYear + y))
            .field(m)
            .field(y + 1)
            .endrow();
  }
  std::int64_t n_days = 0;
  {
    CsvWriter w(out_dir, def_of("day"));
    // 1992-01-01 was a Wednesday.
    int dow = 3;
    std::int64_t key = 0;
    for (int y = 0; y < kYears; ++y) {
      int doy = 0;
      for (int m = 1; m <= 12; ++m) {
        int dim = days_in_month(kFirstYear + y, m);
        for (int d = 1; d <= dim; ++d) {
          ++doy;
          bool holiday = (m == 12 && d == 25) || (m == 1 && d == 1) || (m == 7 && d == 4);
          w.field(++key)
              .field(kWeekdays[dow - 1])
              .field(dow)
              .field(d)
              .field(season_of(m))
              .field(dow == 7 ? 1 : 0)
              .field(d == dim ? 1 : 0)
              .field(holiday ? 1 : 0)
              .field(dow <= 5 ? 1 : 0)
              .field(doy)
              .field(y * 12 + m)
              .endrow();
          dow = dow % 7 + 1;
        }
      }
    }
    n_days = key;
  }

  // -- facts --------------------------------------------------------------
  {
    CsvWriter w(out_dir, def_of("lineorder"));
    std::int64_t n_facts = std::llround(6000000.0 * sf);
    std::uniform_int_distribution<std::int64_t> cust(1, n_cust), supp(1, n_supp);
    std::uniform_int_distribution<int> part(1, kParts);
    std::uniform_int_distribution<std::int64_t> date(1, n_days);
    std::uniform_int_distribution<int> qty(1, 50), price(90000, 104950), disc(0, 10), tax(0, 8),
        cost(10000, 100000), prio(0, 4), mode(0, 6);
    for (std::int64_t i = 0; i < n_facts; ++i) {
      std::int64_t ep = price(rng);
      int dc = disc(rng);
      w.field(i / 7 + 1)
          .field(i % 7 + 1)
          .field(cust(rng))
          .field(part(rng))
          .field(supp(rng))
          .field(date(rng))
          .field(kPriorities[prio(rng)])
          .field("0")
          .field(qty(rng))
          .field(ep)
          .field(ep * 7 / 2)
          .field(dc)
          .field(ep * (100 - dc) / 100)
          .field(cost(rng))
          .field(tax(rng))
          .field(date(rng))
          .field(kShipmodes[mode(rng)])
          .endrow();
    }
  }
}

namespace {

void exec_or_throw(sqlite3* db, const std::string& sql) {
  char* msg = nullptr;
  if (sqlite3_exec(db, sql.c_str(), nullptr, nullptr, &msg) != SQLITE_OK) {
    std::string what = msg ? msg : "unknown sqlite error";
    sqlite3_free(msg);
    throw SqlError(what, sql);
  }
}

}  // namespace

void ssb_load(const std::string& dir, const std::string& db_path) {
  sqlite3* db = nullptr;
  if (sqlite3_open(db_path.c_str(), &db) != SQLITE_OK)
    throw Error(ErrorCode::ConnectionFailed, "cannot open '" + db_path + "'");

  struct Closer {
    sqlite3* db;
    ~Closer() { sqlite3_close(db); }
  } closer{db};

  {
    sqlite3_stmt* st = nullptr;
    sqlite3_prepare_v2(db, "SELECT count(*) FROM sqlite_master WHERE type='table'", -1, &st,
                       nullptr);
    sqlite3_step(st);
    int existing = sqlite3_column_int(st, 0);
    sqlite3_finalize(st);
    if (existing > 0)
      throw Error(ErrorCode::SqlError, "target database '" + db_path + "' is not empty");
  }

  exec_or_throw(db, "PRAGMA journal_mode=OFF; PRAGMA synchronous=OFF;");
  // Dimension tables first so FK enforcement could be enabled downstream.
  std::vector<const TableDef*> order;
  for (const auto& d : table_defs()) order.push_back(&d);
  std::reverse(order.begin(), order.end());

  for (const TableDef* def : order) {
    std::ostringstream ddl;
    ddl << "CREATE TABLE \"" << def->name << "\" (";
    for (const auto& [col, ty] : def->cols)
      ddl << "\"" << col << "\" " << (ty == 'i' ? "INTEGER" : "TEXT") << ", ";
    ddl << def->constraints << ")";
    exec_or_throw(db, ddl.str());

    std::ifstream in(std::filesystem::path(dir) / (std::string(def->name) + ".csv"));
    if (!in) throw Error(ErrorCode::MissingTable, std::string("no CSV for table ") + def->name);
    std::string line;
    std::getline(in, line);  // header

    std::ostringstream ins;
    ins << "INSERT INTO \"" << def->name << "\" VALUES (";
    for (std::size_t i = 0; i < def->cols.size(); ++i) ins << (i ? ",?" : "?");
    ins << ")";
    sqlite3_stmt* st = nullptr;
    if (sqlite3_prepare_v2(db, ins.str().c_str(), -1, &st, nullptr) != SQLITE_OK)
      throw SqlError(sqlite3_errmsg(db), ins.str());

    exec_or_throw(db, "BEGIN");
    std::int64_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t start = 0;
      for (std::size_t c = 0; c < def->cols.size(); ++c) {
        std::size_t end = c + 1 == def->cols.size() ? line.size() : line.find(',', start);
        std::string field = line.substr(start, end - start);
        if (def->cols[c].second == 'i')
          sqlite3_bind_int64(st, static_cast<int>(c) + 1, std::strtoll(field.c_str(), nullptr, 10));
        else
          sqlite3_bind_text(st, static_cast<int>(c) + 1, field.c_str(),
                            static_cast<int>(field.size()), SQLITE_TRANSIENT);
        start = end + 1;
      }
      if (sqlite3_step(st) != SQLITE_DONE) {
        std::string what = sqlite3_errmsg(db);
        sqlite3_finalize(st);
        throw Error(ErrorCode::SqlError, std::string("loading ") + def->name + " line " +
                                             std::to_string(lineno) + ": " + what);
      }
      sqlite3_reset(st);
    }
    sqlite3_finalize(st);
    exec_or_throw(db, "COMMIT");
  }
}

// ---------------------------------------------------------------------------
// Query transcriptions
// ---------------------------------------------------------------------------

const std::vector<SsbQuery>& ssb_queries() {
  static const std::vector<SsbQuery> queries = {
      {"1.1", 1,
       "view Lineorder\n"
       "columns Orderdate.year.year[1993]\n"
       "measures revenue = extendedprice * discount\n"},
      {"1.2", 1,
       "view Lineorder\n"
       "columns Orderdate.month.yearmonthnum[199401]\n"
       "measures revenue = extendedprice * discount\n"},
      {"1.3", 1,
       "view Lineorder\n"
       "columns Orderdate.month.yearmonth[\"Feb1994\"]\n"
       "measures revenue = extendedprice * discount\n"},
      {"2.1", 2,
       "view Lineorder\n"
       "columns Orderdate.year.year.members()\n"
       "rows Part.category.category[\"MFGR#12\"].children()\n"
       "where Supplier.region.region == \"AMERICA\"\n"
       "measures revenue\n"},
      {"2.2", 2,
       "view Lineorder\n"
       "columns Orderdate.year.year.members()\n"
       "rows Part.brand1.brand1[\"MFGR#2221\", \"MFGR#2222\", \"MFGR#2223\", \"MFGR#2224\","
       " \"MFGR#2225\", \"MFGR#2226\", \"MFGR#2227\", \"MFGR#2228\"]\n"
       "where Supplier.region.region == \"ASIA\"\n"
       "measures revenue\n"},
      {"2.3", 2,
       "view Lineorder\n"
       "columns Orderdate.year.year.members()\n"
       "rows Part.brand1.brand1[\"MFGR#2239\"]\n"
       "where Supplier.region.region == \"EUROPE\"\n"
       "measures revenue\n"},
      {"3.1", 3,
       "view Lineorder\n"
       "columns Orderdate.year.year.members()\n"
       "rows Customer.nation.nation.members()\n"
       "pages Supplier.nation.nation.members()\n"
       "where Customer.region.region == \"ASIA\" and Supplier.region.region == \"ASIA\""
       " and Orderdate.year.year >= 1992 and Orderdate.year.year <= 1997\n"
       "measures revenue\n"},
      {"3.2", 3,
       "view Lineorder\n"
       "columns Orderdate.year.year.members()\n"
       "rows Customer.nation.nation[\"UNITED STATES\"].children()\n"
       "pages Supplier.nation.nation[\"UNITED STATES\"].children()\n"
       "where Orderdate.year.year >= 1992 and Orderdate.year.year <= 1997\n"
       "measures revenue\n"},
      {"3.3", 3,
       "view Lineorder\n"
       "columns Orderdate.year.year.members()\n"
       "rows Customer.city.city[\"UNITED KI1\", \"UNITED KI5\"]\n"
       "pages Supplier.city.city[\"UNITED KI1\", \"UNITED KI5\"]\n"
       "where Orderdate.year.year >= 1992 and Orderdate.year.year <= 1997\n"
       "measures revenue\n"},
      {"3.4", 3,
       "view Lineorder\n"
       "columns Orderdate.year.year.members()\n"
       "rows Customer.city.city[\"UNITED KI1\", \"UNITED KI5\"]\n"
       "pages Supplier.city.city[\"UNITED KI1\", \"UNITED KI5\"]\n"
       "where Orderdate.month.yearmonth == \"Dec1997\"\n"
       "measures revenue\n"},
      {"4.1", 4,
       "view Lineorder\n"
       "columns Orderdate.year.year.members()\n"
       "rows Customer.nation.nation.members()\n"
       "where Customer.region.region == \"AMERICA\" and Supplier.region.region == \"AMERICA\""
       " and (Part.mfgr.mfgr == \"MFGR#1\" or Part.mfgr.mfgr == \"MFGR#2\")\n"
       "measures profit = revenue - supplycost\n"},
      {"4.2", 4,
       "view Lineorder\n"
       "columns Orderdate.year.year[1997, 1998]\n"
       "rows Supplier.nation.nation.members()\n"
       "pages Part.category.category.members()\n"
       "where Customer.region.region == \"AMERICA\" and Supplier.region.region == \"AMERICA\""
       " and (Part.mfgr.mfgr == \"MFGR#1\" or Part.mfgr.mfgr == \"MFGR#2\")\n"
       "measures profit = revenue - supplycost\n"},
      {"4.3", 4,
       "view Lineorder\n"
       "columns Orderdate.year.year[1997, 1998]\n"
       "rows Supplier.nation.nation[\"UNITED STATES\"].children()\n"
       "pages Part.category.category[\"MFGR#14\"].children()\n"
       "where Customer.region.region == \"AMERICA\" and Supplier.nation.nation == \"UNITED STATES\""
       " and Part.category.category == \"MFGR#14\"\n"
       "measures profit = revenue - supplycost\n"},
  };
  return queries;
}

const SsbQuery& ssb_query(const std::string& id) {
  for (const auto& q : ssb_queries())
    if (q.id == id) return q;
  throw Error(ErrorCode::ParseError, "unknown SSB query '" + id + "'");
}

}  // namespace cubekit
