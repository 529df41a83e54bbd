// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "cubekit/dbio.hpp"
#include "cubekit/model.hpp"

namespace cubekit {

// ---------------------------------------------------------------------------
// Triple graph
// ---------------------------------------------------------------------------

struct RdfNode {
  enum class Kind { Iri, Blank, Literal };
  Kind kind = Kind::Iri;
  std::string value;  // prefixed name, blank id, or literal text

  bool operator==(const RdfNode&) const = default;
  auto operator<=>(const RdfNode&) const = default;

  static RdfNode iri(std::string v) { return {Kind::Iri, std::move(v)}; }
  static RdfNode literal(std::string v) { return {Kind::Literal, std::move(v)}; }
};

struct Triple {
  RdfNode subject, predicate, object;
  bool operator==(const Triple&) const = default;
  auto operator<=>(const Triple&) const = default;
};

struct MetaGraph {
  std::vector<Triple> triples;  // insertion order is the serialization order
  std::map<std::string, std::string> prefixes;  // prefix -> namespace IRI

  RdfNode new_blank();
  void add(RdfNode s, RdfNode p, RdfNode o);
  std::vector<const Triple*> with_subject(const RdfNode& s) const;
  std::vector<RdfNode> objects_of(const RdfNode& s, const std::string& predicate_iri) const;
  std::vector<RdfNode> subjects_of_type(const std::string& type_iri) const;

 private:
  int next_blank_ = 0;
};

/// Equality up to blank-node renaming and triple order.
bool graph_isomorphic(const MetaGraph& a, const MetaGraph& b);

MetaGraph default_graph(const std::string& base_prefix = "eg");

// ---------------------------------------------------------------------------
// Turtle subset (prefixed names, `a`, `;`/`,` lists, `[ ]` blank nodes)
// ---------------------------------------------------------------------------

std::string serialize_turtle(const MetaGraph& graph);
MetaGraph parse_turtle(const std::string& text);

// ---------------------------------------------------------------------------
// QB4OLAP construction / rebinding
// ---------------------------------------------------------------------------

/// Optional display-name overrides written as rdfs:label triples
/// (identifier -> display name; the key "view" renames the cube).
using NameOverrides = std::map<std::string, std::string>;

MetaGraph add_to_graph(const CubeBinding& cube, const std::string& base_prefix = "eg",
                       const NameOverrides& names = {});

/// Rebinds persisted metadata to live tables. The result equals what
/// inference produced for the same catalog.
CubeBinding schema_from_graph(const MetaGraph& graph, const CatalogSnapshot& catalog);

}  // namespace cubekit
