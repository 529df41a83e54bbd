// SPDX-License-Identifier: Apache-2.0
#include "cubekit/dsl.hpp"

#include <cctype>
#include <cstdlib>
#include <memory>
#include <vector>

#include "cubekit/levenshtein.hpp"

namespace cubekit {

namespace {

struct Tok {
  enum Kind { Ident, Int, Float, Str, Punct, Newline, End };
  Kind kind;
  std::string text;
  std::int64_t ival = 0;
  double fval = 0.0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Tok> run() {
    std::vector<Tok> out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (c == '\n') {
        out.push_back(tok(Tok::Newline, "\n"));
        advance();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
        continue;
      }
      if (c == '"') {
        out.push_back(string_tok());
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(number_tok());
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        Tok t = tok(Tok::Ident, "");
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text += src_[pos_];
          advance();
        }
        out.push_back(std::move(t));
        continue;
      }
      out.push_back(punct_tok());
    }
    out.push_back(tok(Tok::End, ""));
    return out;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Tok tok(Tok::Kind k, std::string text) const {
    Tok t;
    t.kind = k;
    t.text = std::move(text);
    t.line = line_;
    t.col = col_;
    return t;
  }

  Tok string_tok() {
    Tok t = tok(Tok::Str, "");
    advance();  // opening quote
    while (pos_ < src_.size() && src_[pos_] != '"') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
      if (src_[pos_] == '\n') throw ParseError("unterminated string", t.line, t.col);
      t.text += src_[pos_];
      advance();
    }
    if (pos_ >= src_.size()) throw ParseError("unterminated string", t.line, t.col);
    advance();  // closing quote
    return t;
  }

  Tok number_tok() {
    Tok t = tok(Tok::Int, "");
    bool has_dot = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        t.text += c;
      } else if (c == '.' && !has_dot && pos_ + 1 < src_.size() &&
                 std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
        has_dot = true;
        t.text += c;
      } else {
        break;
      }
      advance();
    }
    if (has_dot) {
      t.kind = Tok::Float;
      t.fval = std::strtod(t.text.c_str(), nullptr);
    } else {
      t.ival = std::strtoll(t.text.c_str(), nullptr, 10);
    }
    return t;
  }

  Tok punct_tok() {
    static const char* two[] = {"==", "!=", "<=", ">="};
    for (const char* op : two) {
      if (src_.compare(pos_, 2, op) == 0) {
        Tok t = tok(Tok::Punct, op);
        advance();
        advance();
        return t;
      }
    }
    char c = src_[pos_];
    if (std::string(".,[]()=<>+-*/").find(c) == std::string::npos)
      throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    Tok t = tok(Tok::Punct, std::string(1, c));
    advance();
    return t;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  // ---- token plumbing ---------------------------------------------------
  const Tok& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  Tok take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_punct(const std::string& p) const {
    return peek().kind == Tok::Punct && peek().text == p;
  }
  bool accept_punct(const std::string& p) {
    if (!at_punct(p)) return false;
    take();
    return true;
  }
  void expect_punct(const std::string& p) {
    if (!accept_punct(p)) throw err("expected '" + p + "'");
  }
  std::string expect_ident(const std::string& what) {
    if (peek().kind != Tok::Ident) throw err("expected " + what);
    return take().text;
  }
  void skip_newlines() {
    while (peek().kind == Tok::Newline) take();
  }
  ParseError err(const std::string& msg) const {
    return ParseError(msg, peek().line, peek().col);
  }

  // ---- shared grammar ---------------------------------------------------
  Value literal() {
    const Tok& t = peek();
    if (t.kind == Tok::Str) return Value(take().text);
    bool neg = false;
    if (at_punct("-")) {
      take();
      neg = true;
    }
    if (peek().kind == Tok::Int) {
      auto v = take().ival;
      return Value(neg ? -v : v);
    }
    if (peek().kind == Tok::Float) {
      auto v = take().fval;
      return Value(neg ? -v : v);
    }
    throw err("expected a literal");
  }

  AttrRef attr_ref() {
    AttrRef ref;
    ref.dimension = expect_ident("a dimension name");
    expect_punct(".");
    ref.level = expect_ident("a level name");
    expect_punct(".");
    ref.attribute = expect_ident("an attribute name");
    return ref;
  }

  PredicatePtr pred_or() {
    PredicatePtr l = pred_and();
    while (peek().kind == Tok::Ident && peek().text == "or") {
      take();
      l = Predicate::make_or(l, pred_and());
    }
    return l;
  }

  PredicatePtr pred_and() {
    PredicatePtr l = pred_primary();
    while (peek().kind == Tok::Ident && peek().text == "and") {
      take();
      l = Predicate::make_and(l, pred_primary());
    }
    return l;
  }

  PredicatePtr pred_primary() {
    if (accept_punct("(")) {
      PredicatePtr inner = pred_or();
      expect_punct(")");
      return Predicate::make_group(inner);
    }
    if (peek().kind == Tok::Ident && peek().text == "true") {
      take();
      return Predicate::make_true();
    }
    if (peek().kind == Tok::Ident && peek().text == "false") {
      take();
      return Predicate::make_false();
    }
    AttrRef ref = attr_ref();
    CompareOp op = compare_op();
    return Predicate::make_atom(std::move(ref), op, literal());
  }

  CompareOp compare_op() {
    if (peek().kind != Tok::Punct) throw err("expected a comparison operator");
    std::string p = take().text;
    if (p == "<") return CompareOp::Lt;
    if (p == "<=") return CompareOp::Le;
    if (p == "==") return CompareOp::Eq;
    if (p == "!=") return CompareOp::Ne;
    if (p == ">=") return CompareOp::Ge;
    if (p == ">") return CompareOp::Gt;
    throw err("'" + p + "' is not a comparison operator");
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

int axis_index(const std::string& keyword) {
  if (keyword == "columns") return 0;
  if (keyword == "rows") return 1;
  if (keyword == "pages") return 2;
  if (keyword == "sections") return 3;
  if (keyword == "chapters") return 4;
  return -1;
}

// Measure expressions fold constants until a measure column appears.
struct MeasureTerm {
  bool is_const = false;
  double constant = 0.0;
  MeasureSchema schema;
};

class QueryParser : public Parser {
 public:
  QueryParser(std::vector<Tok> toks, std::shared_ptr<CubeSession> session)
      : Parser(std::move(toks)), session_(std::move(session)) {}

  ParsedQuery run() {
    // The view clause may appear anywhere; find it first.
    for (std::size_t i = 0; i + 1 < toks_.size(); ++i) {
      bool line_start = i == 0 || toks_[i - 1].kind == Tok::Newline;
      if (line_start && toks_[i].kind == Tok::Ident && toks_[i].text == "view") {
        if (!name_.empty()) throw ParseError("duplicate view clause", toks_[i].line, toks_[i].col);
        if (toks_[i + 1].kind != Tok::Ident)
          throw ParseError("expected a view name", toks_[i + 1].line, toks_[i + 1].col);
        name_ = toks_[i + 1].text;
      }
    }
    if (name_.empty()) throw ParseError("missing view clause", 1, 1);

    cube_ = session_->view(name_);
    builder_ = std::make_unique<ViewBuilder>(session_, cube_);
    CubeView view = builder_->fresh();

    skip_newlines();
    while (peek().kind != Tok::End) {
      view = clause(view);
      if (peek().kind != Tok::End && peek().kind != Tok::Newline)
        throw err("expected end of clause");
      skip_newlines();
    }
    return {name_, std::move(view)};
  }

 private:
  CubeView clause(CubeView view) {
    std::string kw = expect_ident("a clause keyword");
    if (kw == "view") {
      expect_ident("a view name");  // already consumed during the scan
      return view;
    }
    if (int ax = axis_index(kw); ax >= 0)
      return builder_->axis(view, static_cast<std::size_t>(ax), member_expr());
    if (kw == "where") return builder_->where(view, pred_or());
    if (kw == "measures") return measures_clause(std::move(view));
    throw err("unknown clause '" + kw + "'");
  }

  // Dim.level.attr followed by [list], .members(), or [m].children().
  MemberList member_expr() {
    AttrRef ref = attr_ref();
    if (accept_punct("[")) {
      std::vector<Value> values;
      values.push_back(literal());
      while (accept_punct(",")) values.push_back(literal());
      expect_punct("]");
      if (accept_punct(".")) {
        std::string call = expect_ident("'children'");
        if (call != "children") throw err("expected 'children'");
        expect_punct("(");
        expect_punct(")");
        if (values.size() != 1) throw err("children() takes a single member");
        MemberPath path = session_->member(*cube_, ref, values[0]);
        return session_->children(*cube_, path);
      }
      for (const auto& v : values) session_->member(*cube_, ref, v);
      MemberList list;
      list.attr = session_->resolve_attr(*cube_, ref);
      list.values = std::move(values);
      list.ordering = MemberOrdering::UserGiven;
      return list;
    }
    expect_punct(".");
    std::string call = expect_ident("'members'");
    if (call != "members") throw err("expected 'members' or a member list");
    expect_punct("(");
    expect_punct(")");
    return session_->members(*cube_, ref);
  }

  CubeView measures_clause(CubeView view) {
    std::vector<NamedMeasure> list;
    do {
      std::string name = expect_ident("a measure name");
      if (accept_punct("=")) {
        MeasureTerm t = measure_sum();
        if (t.is_const) throw err("measure '" + name + "' has no measure column");
        t.schema.name = name;
        list.push_back({name, std::move(t.schema)});
      } else {
        list.push_back({name, lookup_measure(name)});
      }
    } while (accept_punct(","));
    return builder_->measures(std::move(view), std::move(list));
  }

  MeasureSchema lookup_measure(const std::string& name) {
    std::string needle = to_lower(name);
    for (const auto& m : cube_->measures)
      if (to_lower(m.name) == needle) return m;
    throw err("cube '" + cube_->name + "' has no measure '" + name + "'");
  }

  MeasureTerm measure_sum() {
    MeasureTerm l = measure_product();
    while (at_punct("+") || at_punct("-")) {
      MeasureOp op = take().text == "+" ? MeasureOp::Add : MeasureOp::Sub;
      l = combine(l, op, measure_product());
    }
    return l;
  }

  MeasureTerm measure_product() {
    MeasureTerm l = measure_factor();
    while (at_punct("*") || at_punct("/")) {
      MeasureOp op = take().text == "*" ? MeasureOp::Mul : MeasureOp::Div;
      l = combine(l, op, measure_factor());
    }
    return l;
  }

  MeasureTerm measure_factor() {
    if (accept_punct("(")) {
      MeasureTerm t = measure_sum();
      expect_punct(")");
      return t;
    }
    if (peek().kind == Tok::Int || peek().kind == Tok::Float || at_punct("-")) {
      MeasureTerm t;
      t.is_const = true;
      t.constant = as_double(literal());
      return t;
    }
    MeasureTerm t;
    t.schema = lookup_measure(expect_ident("a measure name or number"));
    return t;
  }

  MeasureTerm combine(const MeasureTerm& l, MeasureOp op, const MeasureTerm& r) {
    MeasureTerm out;
    if (l.is_const && r.is_const) {
      out.is_const = true;
      switch (op) {
        case MeasureOp::Add: out.constant = l.constant + r.constant; break;
        case MeasureOp::Sub: out.constant = l.constant - r.constant; break;
        case MeasureOp::Mul: out.constant = l.constant * r.constant; break;
        case MeasureOp::Div: out.constant = l.constant / r.constant; break;
      }
      return out;
    }
    if (l.is_const)
      out.schema = combine_measures(l.constant, op, r.schema);
    else if (r.is_const)
      out.schema = combine_measures(l.schema, op, r.constant);
    else
      out.schema = combine_measures(l.schema, op, r.schema);
    return out;
  }

  std::shared_ptr<CubeSession> session_;
  std::shared_ptr<const CubeBinding> cube_;
  std::unique_ptr<ViewBuilder> builder_;
  std::string name_;
};

}  // namespace

ParsedQuery parse_query(const std::string& text, const std::shared_ptr<CubeSession>& session) {
  return QueryParser(Lexer(text).run(), session).run();
}

PredicatePtr parse_predicate(const std::string& text) {
  Parser p(Lexer(text).run());
  p.skip_newlines();
  PredicatePtr out = p.pred_or();
  p.skip_newlines();
  if (p.peek().kind != Tok::End) throw p.err("trailing input after predicate");
  return out;
}

}  // namespace cubekit
