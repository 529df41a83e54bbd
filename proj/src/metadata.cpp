// SPDX-License-Identifier: Apache-2.0
#include "cubekit/metadata.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "cubekit/inference.hpp"
#include "cubekit/levenshtein.hpp"

namespace cubekit {

namespace {

constexpr const char* kType = "rdf:type";

std::string local_name(const RdfNode& iri) {
  auto pos = iri.value.find(':');
  return pos == std::string::npos ? iri.value : iri.value.substr(pos + 1);
}

}  // namespace

RdfNode MetaGraph::new_blank() {
  return {RdfNode::Kind::Blank, "b" + std::to_string(next_blank_++)};
}

void MetaGraph::add(RdfNode s, RdfNode p, RdfNode o) {
  triples.push_back({std::move(s), std::move(p), std::move(o)});
}

std::vector<const Triple*> MetaGraph::with_subject(const RdfNode& s) const {
  std::vector<const Triple*> out;
  for (const auto& t : triples)
    if (t.subject == s) out.push_back(&t);
  return out;
}

std::vector<RdfNode> MetaGraph::objects_of(const RdfNode& s, const std::string& predicate_iri) const {
  std::vector<RdfNode> out;
  for (const auto& t : triples)
    if (t.subject == s && t.predicate.value == predicate_iri) out.push_back(t.object);
  return out;
}

std::vector<RdfNode> MetaGraph::subjects_of_type(const std::string& type_iri) const {
  std::vector<RdfNode> out;
  for (const auto& t : triples)
    if (t.predicate.value == kType && t.object.value == type_iri) out.push_back(t.subject);
  return out;
}

MetaGraph default_graph(const std::string& base_prefix) {
  MetaGraph g;
  g.prefixes["qb"] = "http://purl.org/linked-data/cube#";
  g.prefixes["qb4o"] = "http://purl.org/qb4olap/cubes#";
  g.prefixes["rdfs"] = "http://www.w3.org/2000/01/rdf-schema#";
  g.prefixes[base_prefix] = "http://example.org/cube#";
  return g;
}

// ---------------------------------------------------------------------------
// Isomorphism
// ---------------------------------------------------------------------------

namespace {

std::string node_key(const RdfNode& n) {
  switch (n.kind) {
    case RdfNode::Kind::Iri: return "<" + n.value + ">";
    case RdfNode::Kind::Literal: return "\"" + n.value + "\"";
    case RdfNode::Kind::Blank: return "_:" + n.value;
  }
  return n.value;
}

/// Replaces blank nodes by a canonical signature built from their own
/// triples. Blank nodes may not reference other blank nodes.
std::vector<std::string> canonical_triples(const MetaGraph& g) {
  std::map<std::string, std::vector<std::string>> blank_sig;
  for (const auto& t : g.triples) {
    if (t.subject.kind == RdfNode::Kind::Blank) {
      blank_sig[t.subject.value].push_back(node_key(t.predicate) + " " + node_key(t.object));
    }
  }
  for (auto& [id, sig] : blank_sig) std::sort(sig.begin(), sig.end());

  std::vector<std::string> out;
  for (const auto& t : g.triples) {
    if (t.subject.kind == RdfNode::Kind::Blank) continue;
    std::string obj;
    if (t.object.kind == RdfNode::Kind::Blank) {
      obj = "[";
      auto it = blank_sig.find(t.object.value);
      if (it != blank_sig.end())
        for (const auto& s : it->second) obj += s + " ; ";
      obj += "]";
    } else {
      obj = node_key(t.object);
    }
    out.push_back(node_key(t.subject) + " " + node_key(t.predicate) + " " + obj);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool graph_isomorphic(const MetaGraph& a, const MetaGraph& b) {
  return canonical_triples(a) == canonical_triples(b);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

std::string render_node(const RdfNode& n) {
  if (n.kind == RdfNode::Kind::Literal) {
    std::string out = "\"";
    for (char c : n.value) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  }
  return n.value;
}

void render_blank(const MetaGraph& g, const RdfNode& blank, std::string& out, int indent);

void render_object(const MetaGraph& g, const RdfNode& o, std::string& out, int indent) {
  if (o.kind == RdfNode::Kind::Blank)
    render_blank(g, o, out, indent);
  else
    out += render_node(o);
}

void render_blank(const MetaGraph& g, const RdfNode& blank, std::string& out, int indent) {
  out += "[ ";
  auto triples = g.with_subject(blank);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (i > 0) out += " ;\n" + std::string(static_cast<std::size_t>(indent) + 4, ' ');
    out += triples[i]->predicate.value + " ";
    render_object(g, triples[i]->object, out, indent + 4);
  }
  out += " ]";
}

}  // namespace

std::string serialize_turtle(const MetaGraph& graph) {
  std::string out;
  for (const auto& [prefix, ns] : graph.prefixes)
    out += "@prefix " + prefix + ": <" + ns + "> .\n";
  if (!graph.prefixes.empty()) out += "\n";

  // Subjects in first-appearance order; blank subjects render inline.
  std::vector<RdfNode> subjects;
  for (const auto& t : graph.triples) {
    if (t.subject.kind == RdfNode::Kind::Blank) continue;
    if (std::find(subjects.begin(), subjects.end(), t.subject) == subjects.end())
      subjects.push_back(t.subject);
  }

  for (const auto& subj : subjects) {
    auto triples = graph.with_subject(subj);
    // Predicates in first-appearance order, rdf:type first.
    std::vector<std::string> preds;
    for (const auto* t : triples)
      if (std::find(preds.begin(), preds.end(), t->predicate.value) == preds.end())
        preds.push_back(t->predicate.value);
    std::stable_partition(preds.begin(), preds.end(),
                          [](const std::string& p) { return p == kType; });

    out += render_node(subj);
    bool first_pred = true;
    for (const auto& pred : preds) {
      if (!first_pred) out += " ;\n    ";
      else out += " ";
      first_pred = false;
      out += pred == kType ? "a" : pred;
      bool first_obj = true;
      for (const auto* t : triples) {
        if (t->predicate.value != pred) continue;
        out += first_obj ? " " : ",\n        ";
        first_obj = false;
        render_object(graph, t->object, out, 8);
      }
    }
    out += " .\n\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Kind { Pname, IriRef, String, Punct, AtPrefix, End };
  Kind kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_ws();
    int line = line_, col = col_;
    if (pos_ >= text_.size()) return {Token::Kind::End, "", line, col};
    char c = text_[pos_];
    if (c == '[' || c == ']' || c == ';' || c == ',' || c == '.') {
      advance();
      return {Token::Kind::Punct, std::string(1, c), line, col};
    }
    if (c == '"') {
      advance();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) advance();
        s += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated string", line, col);
      advance();
      return {Token::Kind::String, s, line, col};
    }
    if (c == '<') {
      advance();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '>') {
        s += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated IRI", line, col);
      advance();
      return {Token::Kind::IriRef, s, line, col};
    }
    if (c == '@') {
      std::string word;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        word += text_[pos_];
        advance();
      }
      if (word != "@prefix") throw ParseError("unknown directive '" + word + "'", line, col);
      return {Token::Kind::AtPrefix, word, line, col};
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':') {
      std::string word;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == ':' || d == '-') {
          word += d;
          advance();
        } else {
          break;
        }
      }
      return {Token::Kind::Pname, word, line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class TurtleParser {
 public:
  explicit TurtleParser(const std::string& text) : lexer_(text) { shift(); }

  MetaGraph parse() {
    while (tok_.kind != Token::Kind::End) {
      if (tok_.kind == Token::Kind::AtPrefix) {
        parse_prefix();
      } else {
        parse_statement();
      }
    }
    return std::move(graph_);
  }

 private:
  void parse_prefix() {
    shift();
    expect(Token::Kind::Pname, "prefix name");
    std::string prefix = tok_.text;
    if (!prefix.empty() && prefix.back() == ':') prefix.pop_back();
    shift();
    expect(Token::Kind::IriRef, "namespace IRI");
    graph_.prefixes[prefix] = tok_.text;
    shift();
    expect_punct(".");
    shift();
  }

  void parse_statement() {
    expect(Token::Kind::Pname, "subject");
    RdfNode subject = RdfNode::iri(check_prefixed(tok_.text));
    shift();
    parse_predicate_object_list(subject);
    expect_punct(".");
    shift();
  }

  void parse_predicate_object_list(const RdfNode& subject) {
    while (true) {
      expect(Token::Kind::Pname, "predicate");
      std::string pred = tok_.text == "a" ? kType : check_prefixed(tok_.text);
      shift();
      while (true) {
        graph_.add(subject, RdfNode::iri(pred), parse_object());
        if (is_punct(",")) {
          shift();
          continue;
        }
        break;
      }
      if (is_punct(";")) {
        shift();
        // allow trailing ';' before '.' or ']'
        if (is_punct(".") || is_punct("]")) break;
        continue;
      }
      break;
    }
  }

  RdfNode parse_object() {
    if (tok_.kind == Token::Kind::String) {
      RdfNode n = RdfNode::literal(tok_.text);
      shift();
      return n;
    }
    if (is_punct("[")) {
      shift();
      RdfNode blank = graph_.new_blank();
      if (!is_punct("]")) parse_predicate_object_list(blank);
      expect_punct("]");
      shift();
      return blank;
    }
    expect(Token::Kind::Pname, "object");
    RdfNode n = RdfNode::iri(check_prefixed(tok_.text));
    shift();
    return n;
  }

  std::string check_prefixed(const std::string& name) {
    auto pos = name.find(':');
    if (pos == std::string::npos)
      throw ParseError("expected prefixed name, got '" + name + "'", tok_.line, tok_.col);
    std::string prefix = name.substr(0, pos);
    if (!graph_.prefixes.count(prefix))
      throw ParseError("undeclared prefix '" + prefix + "'", tok_.line, tok_.col);
    return name;
  }

  bool is_punct(const char* p) const {
    return tok_.kind == Token::Kind::Punct && tok_.text == p;
  }

  void expect(Token::Kind kind, const char* what) const {
    if (tok_.kind != kind)
      throw ParseError(std::string("expected ") + what + ", got '" + tok_.text + "'", tok_.line,
                       tok_.col);
  }

  void expect_punct(const char* p) const {
    if (!is_punct(p))
      throw ParseError(std::string("expected '") + p + "', got '" + tok_.text + "'", tok_.line,
                       tok_.col);
  }

  void shift() { tok_ = lexer_.next(); }

  Lexer lexer_;
  Token tok_{};
  MetaGraph graph_;
};

}  // namespace

MetaGraph parse_turtle(const std::string& text) { return TurtleParser(text).parse(); }

// ---------------------------------------------------------------------------
// QB4OLAP construction
// ---------------------------------------------------------------------------

namespace {

std::string lower(const std::string& s) { return to_lower(s); }

/// Level IRI local name: table name, role-qualified when the table is shared
/// by several dimensions.
std::string level_local(const CubeBinding& cube, const DimensionBinding& dim,
                        const LevelBinding& lb) {
  int uses = 0;
  for (const auto& d : cube.dimensions)
    for (const auto& l : d.level_bindings)
      if (l.table == lb.table) ++uses;
  if (uses > 1) return lower(dim.role_name) + "_" + lower(lb.table);
  return lower(lb.table);
}

}  // namespace

MetaGraph add_to_graph(const CubeBinding& cube, const std::string& base_prefix,
                       const NameOverrides& names) {
  MetaGraph g = default_graph(base_prefix);
  auto eg = [&](const std::string& local) { return RdfNode::iri(base_prefix + ":" + local); };
  auto iri = [](const char* v) { return RdfNode::iri(v); };

  std::set<std::string> declared_attrs;
  for (const auto& dim : cube.dimensions) {
    RdfNode dim_node = eg(lower(dim.role_name));
    g.add(dim_node, iri(kType), iri("qb:DimensionProperty"));
    if (auto it = names.find(dim.role_name); it != names.end())
      g.add(dim_node, iri("rdfs:label"), RdfNode::literal(it->second));

    for (const auto& lb : dim.level_bindings) {
      for (const auto& attr : lb.level.attrs) {
        if (attr == lb.member_attr) continue;
        if (declared_attrs.insert(lower(attr)).second)
          g.add(eg(lower(attr)), iri(kType), iri("qb:AttributeProperty"));
      }
    }
    for (std::size_t i = 0; i < dim.level_bindings.size(); ++i) {
      const auto& lb = dim.level_bindings[i];
      RdfNode level_node = eg(level_local(cube, dim, lb));
      g.add(level_node, iri(kType), iri("qb4o:LevelProperty"));
      for (const auto& attr : lb.level.attrs)
        if (attr != lb.member_attr) g.add(level_node, iri("qb4o:hasAttribute"), eg(lower(attr)));
      g.add(level_node, iri("qb4o:inDimension"), dim_node);
      if (i + 1 < dim.level_bindings.size())
        g.add(level_node, iri("qb4o:parentLevel"),
              eg(level_local(cube, dim, dim.level_bindings[i + 1])));
    }
  }

  RdfNode dsd = eg(lower(cube.fact_table) + "_dsd");
  g.add(dsd, iri(kType), iri("qb:DataStructureDefinition"));
  if (auto it = names.find("view"); it != names.end())
    g.add(dsd, iri("rdfs:label"), RdfNode::literal(it->second));
  for (const auto& dim : cube.dimensions) {
    RdfNode comp = g.new_blank();
    g.add(dsd, iri("qb:component"), comp);
    g.add(comp, iri("qb4o:level"), eg(level_local(cube, dim, dim.level_bindings.front())));
  }
  for (const auto& m : cube.measures) {
    RdfNode comp = g.new_blank();
    g.add(dsd, iri("qb:component"), comp);
    g.add(comp, iri("qb:measure"), eg(lower(m.name)));
    g.add(comp, iri("qb4o:hasAggregateFunction"), iri("qb4o:sum"));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Rebinding
// ---------------------------------------------------------------------------

namespace {

const TableInfo* find_table_ci(const CatalogSnapshot& catalog, const std::string& name) {
  std::string needle = to_lower(name);
  for (const auto& t : catalog.tables)
    if (to_lower(t.name) == needle) return &t;
  return nullptr;
}

}  // namespace

CubeBinding schema_from_graph(const MetaGraph& graph, const CatalogSnapshot& catalog) {
  auto dsds = graph.subjects_of_type("qb:DataStructureDefinition");
  if (dsds.size() != 1)
    throw Error(ErrorCode::MissingTable, "metadata must contain exactly one DataStructureDefinition");
  std::string dsd_local = local_name(dsds[0]);
  std::string fact = dsd_local;
  if (fact.size() > 4 && fact.ends_with("_dsd")) fact.resize(fact.size() - 4);
  const TableInfo* fact_table = find_table_ci(catalog, fact);
  if (!fact_table) throw Error(ErrorCode::MissingTable, "fact table '" + fact + "' not found");

  CubeBinding cube;
  cube.fact_table = fact_table->name;
  cube.name = cube.fact_table;
  if (!cube.name.empty())
    cube.name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cube.name[0])));
  auto view_labels = graph.objects_of(dsds[0], "rdfs:label");
  if (!view_labels.empty()) cube.name = view_labels[0].value;

  // Dimensions follow the fact table's FK column order.
  auto dim_nodes = graph.subjects_of_type("qb:DimensionProperty");
  auto level_nodes = graph.subjects_of_type("qb4o:LevelProperty");

  std::vector<std::string> missing;
  for (const auto& fk : catalog.fks_from(cube.fact_table)) {
    const RdfNode* dim_node = nullptr;
    for (const auto& d : dim_nodes)
      if (local_name(d) == to_lower(fk.from_column)) dim_node = &d;
    if (!dim_node) continue;

    // Levels of this dimension, ordered by parentLevel chain.
    std::vector<RdfNode> levels;
    for (const auto& l : level_nodes) {
      auto in_dim = graph.objects_of(l, "qb4o:inDimension");
      if (!in_dim.empty() && in_dim[0] == *dim_node) levels.push_back(l);
    }
    std::vector<RdfNode> chain;
    for (const auto& l : levels) {
      bool is_parent = false;
      for (const auto& other : levels)
        for (const auto& p : graph.objects_of(other, "qb4o:parentLevel"))
          if (p == l) is_parent = true;
      if (!is_parent) chain.push_back(l);
    }
    if (chain.size() != 1) continue;
    while (true) {
      auto parents = graph.objects_of(chain.back(), "qb4o:parentLevel");
      if (parents.empty()) break;
      chain.push_back(parents[0]);
    }

    DimensionBinding dim;
    dim.fact_fk_column = fk.from_column;
    dim.role_name = fk.from_column;
    auto labels = graph.objects_of(*dim_node, "rdfs:label");
    if (!labels.empty()) dim.role_name = labels[0].value;
    dim.schema.name = dim.role_name;

    bool ok = true;
    for (const auto& level : chain) {
      std::string name = local_name(level);
      const TableInfo* t = find_table_ci(catalog, name);
      if (!t) {
        // Role-qualified level IRI: strip the "<dim>_" prefix.
        std::string prefix = local_name(*dim_node) + "_";
        if (name.starts_with(prefix)) t = find_table_ci(catalog, name.substr(prefix.size()));
      }
      if (!t) {
        missing.push_back(name);
        ok = false;
        continue;
      }
      dim.level_bindings.push_back(bind_level_table(catalog, t->name, nullptr));
    }
    if (!ok) continue;
    for (const auto& lb : dim.level_bindings) dim.schema.levels.push_back(lb.level);
    dim.schema.levels.push_back(LevelSchema::all());
    cube.dimensions.push_back(std::move(dim));
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorCode::MissingTable, "unresolved level tables: " + list);
  }

  // Measures in DSD component order.
  for (const auto& comp : graph.objects_of(dsds[0], "qb:component")) {
    auto measures = graph.objects_of(comp, "qb:measure");
    if (measures.empty()) continue;
    std::string col = local_name(measures[0]);
    // Resolve against fact columns case-insensitively.
    for (const auto& c : fact_table->columns)
      if (to_lower(c.name) == col) col = c.name;
    cube.measures.push_back({col, MeasureExpr::make_column(col), AggFunc::Sum});
  }
  return cube;
}

}  // namespace cubekit
