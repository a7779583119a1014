#include "parafree/graph_of_groups.hpp"

#include "parafree/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace parafree {

namespace {

std::string edge_path(std::size_t i) { return "edges[" + std::to_string(i) + "]"; }

// Vertices reachable from `start` without using edge `skip`.
std::vector<bool> reachable(std::size_t vertex_count, const std::vector<Edge>& edges,
                            std::size_t start, std::optional<std::size_t> skip) {
  std::vector<std::vector<std::size_t>> adj(vertex_count);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (skip && *skip == i) continue;
    adj[edges[i].from].push_back(edges[i].to);
    adj[edges[i].to].push_back(edges[i].from);
  }
  std::vector<bool> seen(vertex_count, false);
  std::deque<std::size_t> queue{start};
  seen[start] = true;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t y : adj[x])
      if (!seen[y]) {
        seen[y] = true;
        queue.push_back(y);
      }
  }
  return seen;
}

}  // namespace

std::optional<std::size_t> GraphOfGroups::vertex_index(std::string_view id) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> GraphOfGroups::edge_index(std::string_view id) const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].id == id) return i;
  return std::nullopt;
}

const Edge& GraphOfGroups::edge(std::string_view id) const {
  auto i = edge_index(id);
  if (!i) throw Error(ErrorCode::UnknownEdge, "unknown edge '" + std::string(id) + "'");
  return edges_[*i];
}

std::vector<std::size_t> GraphOfGroups::edges_by_id() const {
  std::vector<std::size_t> order(edges_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return edges_[a].id < edges_[b].id; });
  return order;
}

GraphOfGroups GraphOfGroups::induced(const std::vector<std::size_t>& vertex_indices,
                                     const std::vector<std::size_t>& edge_indices) const {
  GraphOfGroups out;
  std::map<std::size_t, std::size_t> remap;
  for (std::size_t v : vertex_indices) {
    remap[v] = out.vertices_.size();
    out.vertices_.push_back(vertices_.at(v));
  }
  for (std::size_t e : edge_indices) {
    Edge edge = edges_.at(e);
    edge.from = remap.at(edge.from);
    edge.to = remap.at(edge.to);
    out.edges_.push_back(std::move(edge));
  }
  return out;
}

GraphOfGroups validate(const RawGraphOfGroups& raw) {
  GraphOfGroups g;
  if (raw.vertices.empty()) throw Error(ErrorCode::DisconnectedGraph, "graph has no vertices");

  std::set<std::string> vertex_ids;
  std::set<std::string> symbols;  // generator names and edge ids share one namespace
  for (std::size_t i = 0; i < raw.vertices.size(); ++i) {
    const auto& rv = raw.vertices[i];
    const std::string path = "vertices[" + std::to_string(i) + "]";
    if (rv.id.empty()) throw Error(ErrorCode::InvalidName, path + ".id: empty vertex id");
    if (!vertex_ids.insert(rv.id).second)
      throw Error(ErrorCode::DuplicateId, path + ".id: duplicate vertex id '" + rv.id + "'");
    Alphabet alphabet;
    try {
      alphabet = Alphabet(rv.generators);
    } catch (const Error& e) {
      throw Error(e.code(), path + ".generators: " + e.what());
    }
    for (const auto& name : alphabet.names())
      if (!symbols.insert(name).second)
        throw Error(ErrorCode::DuplicateId,
                    path + ".generators: generator '" + name + "' already used");
    g.vertices_.push_back({rv.id, std::move(alphabet)});
  }

  std::set<std::string> edge_ids;
  for (std::size_t i = 0; i < raw.edges.size(); ++i) {
    const auto& re = raw.edges[i];
    const std::string path = edge_path(i);
    if (!is_identifier(re.id))
      throw Error(ErrorCode::InvalidName, path + ".id: edge id '" + re.id +
                                              "' is not an identifier");
    if (!edge_ids.insert(re.id).second || symbols.count(re.id))
      throw Error(ErrorCode::DuplicateId, path + ".id: duplicate id '" + re.id + "'");
    symbols.insert(re.id);

    Edge edge;
    edge.id = re.id;
    edge.group = re.group;
    auto from = g.vertex_index(re.from);
    if (!from)
      throw Error(ErrorCode::UnknownVertexRef, path + ".from: unknown vertex '" + re.from + "'");
    auto to = g.vertex_index(re.to);
    if (!to) throw Error(ErrorCode::UnknownVertexRef, path + ".to: unknown vertex '" + re.to + "'");
    edge.from = *from;
    edge.to = *to;

    if (re.group == EdgeGroup::Trivial) {
      if (re.u) throw Error(ErrorCode::UnexpectedEdgeWord, path + ".u: trivial edge carries a word");
      if (re.v) throw Error(ErrorCode::UnexpectedEdgeWord, path + ".v: trivial edge carries a word");
    } else {
      auto reduce = [&](const std::optional<std::vector<Letter>>& letters, std::size_t vertex,
                        const char* field) {
        if (!letters) throw Error(ErrorCode::MissingEdgeWord, path + "." + field + " missing");
        Word w;
        try {
          w = free_reduce(*letters, g.vertices_[vertex].alphabet.rank());
        } catch (const Error& e) {
          throw Error(e.code(), path + "." + field + ": " + e.what());
        }
        if (w.empty())
          throw Error(ErrorCode::TrivialEdgeWord,
                      path + "." + field + ": edge word reduces to the identity");
        return w;
      };
      edge.u = reduce(re.u, edge.from, "u");
      edge.v = reduce(re.v, edge.to, "v");
    }
    g.edges_.push_back(std::move(edge));
  }

  auto seen = reachable(g.vertices_.size(), g.edges_, 0, std::nullopt);
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw Error(ErrorCode::DisconnectedGraph,
                  "vertex '" + g.vertices_[i].id + "' is not connected to '" +
                      g.vertices_[0].id + "'");
  return g;
}

RawGraphOfGroups to_raw(const GraphOfGroups& g) {
  RawGraphOfGroups raw;
  for (const auto& v : g.vertices()) raw.vertices.push_back({v.id, v.alphabet.names()});
  for (const auto& e : g.edges()) {
    RawEdge re{e.id, g.vertices()[e.from].id, g.vertices()[e.to].id, e.group, std::nullopt,
               std::nullopt};
    if (e.group == EdgeGroup::InfiniteCyclic) {
      re.u = std::vector<Letter>(e.u.letters().begin(), e.u.letters().end());
      re.v = std::vector<Letter>(e.v.letters().begin(), e.v.letters().end());
    }
    raw.edges.push_back(std::move(re));
  }
  return raw;
}

std::set<std::string> spanning_tree(const GraphOfGroups& g) {
  const auto& vs = g.vertices();
  const auto& es = g.edges();
  std::size_t root = 0;
  for (std::size_t i = 1; i < vs.size(); ++i)
    if (vs[i].id < vs[root].id) root = i;

  std::vector<std::vector<std::size_t>> incident(vs.size());
  for (std::size_t e : g.edges_by_id()) {
    if (es[e].is_loop()) continue;
    incident[es[e].from].push_back(e);
    incident[es[e].to].push_back(e);
  }
  std::set<std::string> tree;
  std::vector<bool> seen(vs.size(), false);
  std::deque<std::size_t> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t e : incident[x]) {
      const std::size_t y = es[e].from == x ? es[e].to : es[e].from;
      if (seen[y]) continue;
      seen[y] = true;
      tree.insert(es[e].id);
      queue.push_back(y);
    }
  }
  return tree;
}

Word lift(const Presentation& p, std::size_t vertex, const Word& local) {
  const auto offset = static_cast<Letter>(p.vertex_offset.at(vertex));
  std::vector<Letter> out;
  out.reserve(local.size());
  for (Letter l : local.letters()) out.push_back(l > 0 ? l + offset : l - offset);
  return Word::from_letters(out);
}

Word translate(const Word& w, const Alphabet& from, const Alphabet& to) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (Letter l : w.letters()) {
    const auto& name = from.name(generator_of(l));
    auto idx = to.index_of(name);
    if (!idx)
      throw Error(ErrorCode::UnknownGenerator, "generator '" + name + "' missing from target");
    out.push_back(make_letter(*idx, sign_of(l)));
  }
  return Word::from_letters(out);
}

Presentation present(const GraphOfGroups& g) {
  const auto tree = spanning_tree(g);
  std::vector<std::string> names;
  Presentation p;
  for (const auto& v : g.vertices()) {
    p.vertex_offset.push_back(names.size());
    names.insert(names.end(), v.alphabet.names().begin(), v.alphabet.names().end());
  }
  std::map<std::size_t, std::size_t> stable;  // edge index -> generator index
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    if (tree.count(g.edges()[e].id)) continue;
    stable[e] = names.size();
    names.push_back(g.edges()[e].id);
  }
  p.stable_letters = stable.size();
  p.generators = Alphabet(std::move(names));

  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const Edge& edge = g.edges()[e];
    if (edge.group == EdgeGroup::Trivial) continue;
    Word u = lift(p, edge.from, edge.u);
    Word v = lift(p, edge.to, edge.v);
    auto it = stable.find(e);
    if (it == stable.end()) {
      p.relations.push_back({edge.id, u * v.inverse()});
    } else {
      const Letter t = make_letter(it->second, 1);
      Word tw = Word::from_letters(std::vector<Letter>{t});
      p.relations.push_back({edge.id, tw * u * tw.inverse() * v.inverse()});
    }
  }
  return p;
}

IntMatrix relation_matrix(const Presentation& p) {
  const auto cols = static_cast<Eigen::Index>(p.generators.rank());
  IntMatrix m(static_cast<Eigen::Index>(p.relations.size()), cols);
  for (std::size_t r = 0; r < p.relations.size(); ++r) {
    ExponentVector x = exponent_vector(p.relations[r].relator, p.generators.rank());
    for (Eigen::Index c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), c) = static_cast<long>(x(c));
  }
  return m;
}

Abelianization abelianization(const GraphOfGroups& g) {
  const Presentation p = present(g);
  return {cokernel_invariants(relation_matrix(p), static_cast<Eigen::Index>(p.generators.rank())),
          p.stable_letters};
}

std::int64_t expected_rank(const GraphOfGroups& g) {
  std::int64_t vertex_rank = 0;
  for (const auto& v : g.vertices()) vertex_rank += static_cast<std::int64_t>(v.alphabet.rank());
  std::int64_t cyclic = 0;
  for (const auto& e : g.edges())
    if (e.group == EdgeGroup::InfiniteCyclic) ++cyclic;
  const auto vertex_count = static_cast<std::int64_t>(g.vertices().size());
  const auto edge_count = static_cast<std::int64_t>(g.edges().size());
  const std::int64_t chi = vertex_count - edge_count - 1;
  return vertex_rank - cyclic - chi;
}

Decomposition decompose(const GraphOfGroups& g, std::string_view edge_id) {
  auto idx = g.edge_index(edge_id);
  if (!idx) throw Error(ErrorCode::UnknownEdge, "unknown edge '" + std::string(edge_id) + "'");
  const Edge& edge = g.edges()[*idx];

  std::vector<std::size_t> other_edges;
  for (std::size_t e = 0; e < g.edges().size(); ++e)
    if (e != *idx) other_edges.push_back(e);

  Decomposition d;
  d.removed_edge = edge.id;
  d.group = edge.group;

  auto seen = reachable(g.vertices().size(), g.edges(), edge.from, *idx);
  if (seen[edge.to]) {
    std::vector<std::size_t> all(g.vertices().size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    d.kind = DecompositionKind::Hnn;
    d.left = g.induced(all, other_edges);
    const Presentation base = present(d.left);
    d.u = lift(base, edge.from, edge.u);
    d.v = lift(base, edge.to, edge.v);
    return d;
  }

  d.kind = DecompositionKind::Amalgam;
  std::vector<std::size_t> left_vertices, right_vertices, left_edges, right_edges;
  std::vector<std::size_t> new_index(g.vertices().size());
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    auto& side = seen[v] ? left_vertices : right_vertices;
    new_index[v] = side.size();
    side.push_back(v);
  }
  for (std::size_t e : other_edges) (seen[g.edges()[e].from] ? left_edges : right_edges).push_back(e);
  d.left = g.induced(left_vertices, left_edges);
  d.right = g.induced(right_vertices, right_edges);
  d.u = lift(present(d.left), new_index[edge.from], edge.u);
  d.v = lift(present(*d.right), new_index[edge.to], edge.v);
  return d;
}

}  // namespace parafree
