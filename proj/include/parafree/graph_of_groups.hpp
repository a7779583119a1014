#pragma once

// Graphs of groups with finite-rank free vertex groups and cyclic edge groups.
//
// Generator names are global: no two vertices share a generator name and no
// edge id coincides with a generator name. This lets presentations of
// sub-graphs and of the whole graph speak about the same symbols, with each
// edge id doubling as the name of its stable letter.

#include "parafree/lattice.hpp"
#include "parafree/word.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace parafree {

enum class EdgeGroup { Trivial, InfiniteCyclic };

struct RawVertex {
  std::string id;
  std::vector<std::string> generators;
};

/// Edge words are raw letter sequences over the endpoint's own alphabet
/// (u over `from`, v over `to`); they are reduced during validation.
struct RawEdge {
  std::string id;
  std::string from;
  std::string to;
  EdgeGroup group = EdgeGroup::Trivial;
  std::optional<std::vector<Letter>> u;
  std::optional<std::vector<Letter>> v;
};

struct RawGraphOfGroups {
  std::vector<RawVertex> vertices;
  std::vector<RawEdge> edges;
};

struct Vertex {
  std::string id;
  Alphabet alphabet;

  bool operator==(const Vertex&) const = default;
};

struct Edge {
  std::string id;
  std::size_t from = 0;  // vertex index
  std::size_t to = 0;
  EdgeGroup group = EdgeGroup::Trivial;
  Word u;  // over vertices[from].alphabet; empty for trivial edges
  Word v;  // over vertices[to].alphabet

  bool is_loop() const noexcept { return from == to; }
  bool operator==(const Edge&) const = default;
};

/// A validated, connected graph of groups. Immutable once built.
class GraphOfGroups {
 public:
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::optional<std::size_t> vertex_index(std::string_view id) const;
  std::optional<std::size_t> edge_index(std::string_view id) const;
  const Edge& edge(std::string_view id) const;  // throws Error(UnknownEdge)

  /// Edge indices sorted by id.
  std::vector<std::size_t> edges_by_id() const;

  /// Sub-graph on the given vertices and edges (indices into this graph),
  /// preserving relative order. The caller guarantees it is connected.
  GraphOfGroups induced(const std::vector<std::size_t>& vertex_indices,
                        const std::vector<std::size_t>& edge_indices) const;

  bool operator==(const GraphOfGroups&) const = default;

  friend GraphOfGroups validate(const RawGraphOfGroups& raw);

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
};

/// Throws Error with DisconnectedGraph, TrivialEdgeWord, DuplicateId,
/// UnknownVertexRef, MissingEdgeWord, UnexpectedEdgeWord, InvalidName or
/// InvalidLetter.
GraphOfGroups validate(const RawGraphOfGroups& raw);

/// Back to the raw form (words become plain letter sequences).
RawGraphOfGroups to_raw(const GraphOfGroups& g);

/// Breadth-first from the lexicographically least vertex id, incident edges
/// explored in lexicographic id order. Loops are never tree edges.
std::set<std::string> spanning_tree(const GraphOfGroups& g);

struct Relation {
  std::string id;  // the edge that contributes it
  Word relator;

  bool operator==(const Relation&) const = default;
};

/// Presentation of pi_1 relative to the canonical spanning tree: all vertex
/// generators (vertex order, then alphabet order) followed by one stable
/// letter per non-tree edge (edge order). Cyclic tree edges contribute
/// u v^-1, cyclic non-tree edges t u t^-1 v^-1.
struct Presentation {
  Alphabet generators;
  std::vector<Relation> relations;
  std::vector<std::size_t> vertex_offset;  // first generator of each vertex
  std::size_t stable_letters = 0;

  bool operator==(const Presentation&) const = default;
};

Presentation present(const GraphOfGroups& g);

/// A vertex-local word rewritten over the presentation generators.
Word lift(const Presentation& p, std::size_t vertex, const Word& local);

/// Rewrites a word between two alphabets by generator name. Throws
/// Error(UnknownGenerator) if a name is missing from `to`.
Word translate(const Word& w, const Alphabet& from, const Alphabet& to);

/// Relation matrix of the abelianized presentation (rows = relators).
IntMatrix relation_matrix(const Presentation& p);

/// W_ab in full, including the free summand from stable letters.
struct Abelianization {
  CokernelInvariants invariants;
  std::size_t stable_letters = 0;
};

Abelianization abelianization(const GraphOfGroups& g);

/// sum rank(v) - #cyclic edges - (|V| - |E| - 1).
std::int64_t expected_rank(const GraphOfGroups& g);

enum class DecompositionKind { Amalgam, Hnn };

/// Result of removing one edge. For an amalgam `left` holds the component of
/// the edge's source and `right` the component of its target; for an HNN
/// extension `left` is the base and `right` is empty. `u` and `v` are the
/// edge words rewritten over the presentation generators of the piece they
/// live in.
struct Decomposition {
  DecompositionKind kind = DecompositionKind::Amalgam;
  std::string removed_edge;
  EdgeGroup group = EdgeGroup::Trivial;
  GraphOfGroups left;
  std::optional<GraphOfGroups> right;
  Word u;
  Word v;
};

/// Throws Error(UnknownEdge).
Decomposition decompose(const GraphOfGroups& g, std::string_view edge_id);

}  // namespace parafree
