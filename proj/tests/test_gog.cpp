#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "parafree/error.hpp"
#include "parafree/graph_of_groups.hpp"

using namespace parafree;

namespace {

ErrorCode code_of(const RawGraphOfGroups& raw) {
  try {
    validate(raw);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("validation passed");
  return ErrorCode::Internal;
}

GraphOfGroups trefoil() {
  return validate({{{"A", {"a"}}, {"B", {"b"}}}, {gen::cyclic_edge("e", "A", "B", {1, 1}, {1, 1, 1})}});
}

GraphOfGroups loop(std::vector<std::string> gens, std::vector<int> u, std::vector<int> v) {
  return validate({{{"U", std::move(gens)}}, {gen::cyclic_edge("t", "U", "U", std::move(u), std::move(v))}});
}

// Abelian invariants of the group reassembled from a decomposition.
CokernelInvariants reassembled(const Decomposition& d) {
  const Presentation pl = present(d.left);
  const IntMatrix ml = relation_matrix(pl);
  const auto rl = static_cast<Eigen::Index>(pl.generators.rank());
  if (d.kind == DecompositionKind::Hnn) {
    IntMatrix m = IntMatrix::Zero(ml.rows() + 1, rl + 1);
    m.topLeftCorner(ml.rows(), rl) = ml;
    if (d.group == EdgeGroup::InfiniteCyclic)
      for (Eigen::Index j = 0; j < rl; ++j)
        m(ml.rows(), j) = exponent_vector(d.u, pl.generators.rank())(j) - exponent_vector(d.v, pl.generators.rank())(j);
    return cokernel_invariants(m, rl + 1);
  }
  const Presentation pr = present(*d.right);
  const IntMatrix mr = relation_matrix(pr);
  const auto rr = static_cast<Eigen::Index>(pr.generators.rank());
  IntMatrix m = IntMatrix::Zero(ml.rows() + mr.rows() + 1, rl + rr);
  m.topLeftCorner(ml.rows(), rl) = ml;
  m.block(ml.rows(), rl, mr.rows(), rr) = mr;
  if (d.group == EdgeGroup::InfiniteCyclic) {
    for (Eigen::Index j = 0; j < rl; ++j) m(m.rows() - 1, j) = exponent_vector(d.u, pl.generators.rank())(j);
    for (Eigen::Index j = 0; j < rr; ++j) m(m.rows() - 1, rl + j) = -exponent_vector(d.v, pr.generators.rank())(j);
  }
  return cokernel_invariants(m, rl + rr);
}

}  // namespace

TEST_CASE("validate examples") {
  CHECK_NOTHROW(validate({{{"A", {"a", "b"}}}, {}}));
  CHECK(code_of({{{"A", {"a"}}, {"B", {"b"}}}, {gen::cyclic_edge("e", "A", "B", {1, -1}, {1})}}) ==
        ErrorCode::TrivialEdgeWord);
  CHECK(code_of({{{"A", {"a"}}}, {gen::cyclic_edge("e", "A", "Z", {1}, {1})}}) == ErrorCode::UnknownVertexRef);
  CHECK(code_of({{{"A", {"a"}}, {"B", {"b"}}}, {}}) == ErrorCode::DisconnectedGraph);
  CHECK(code_of({{{"A", {"a"}}, {"A", {"b"}}}, {gen::trivial_edge("e", "A", "A")}}) == ErrorCode::DuplicateId);
  CHECK(code_of({{{"A", {"a"}}, {"B", {"a"}}}, {gen::trivial_edge("e", "A", "B")}}) == ErrorCode::DuplicateId);
  CHECK(code_of({{{"A", {"a"}}}, {gen::trivial_edge("a", "A", "A")}}) == ErrorCode::DuplicateId);
  CHECK(code_of({{}, {}}) != ErrorCode::Internal);
  RawEdge missing = gen::cyclic_edge("e", "A", "A", {1}, {1});
  missing.u.reset();
  try {
    validate({{{"A", {"a"}}}, {missing}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingEdgeWord);
    CHECK(std::string(e.what()) == "edges[0].u missing");
  }
  RawEdge extra = gen::trivial_edge("e", "A", "A");
  extra.v = std::vector<Letter>{1};
  CHECK(code_of({{{"A", {"a"}}}, {extra}}) == ErrorCode::UnexpectedEdgeWord);
  CHECK(code_of({{{"A", {"a"}}}, {gen::cyclic_edge("e", "A", "A", {2}, {1})}}) == ErrorCode::InvalidLetter);
}

TEST_CASE("spanning_tree examples") {
  auto path = validate({{{"A", {"a"}}, {"B", {"b"}}, {"C", {"c"}}},
                        {gen::trivial_edge("e1", "A", "B"), gen::trivial_edge("e2", "B", "C")}});
  CHECK(spanning_tree(path) == std::set<std::string>{"e1", "e2"});
  CHECK(spanning_tree(loop({"a"}, {1}, {1})).empty());
  auto triangle = validate({{{"A", {"a"}}, {"B", {"b"}}, {"C", {"c"}}},
                            {gen::trivial_edge("e1", "A", "B"), gen::trivial_edge("e2", "A", "C"),
                             gen::trivial_edge("e3", "B", "C")}});
  CHECK(spanning_tree(triangle) == std::set<std::string>{"e1", "e2"});
}

TEST_CASE("abelianization examples") {
  auto ab = abelianization(trefoil());
  CHECK(ab.invariants.free_rank == 1);
  CHECK(ab.invariants.torsion.empty());
  ab = abelianization(loop({"a", "b"}, {1}, {2}));
  CHECK(ab.invariants.free_rank == 2);
  CHECK(ab.invariants.torsion.empty());
  CHECK(ab.stable_letters == 1);
  ab = abelianization(loop({"a"}, {1}, {-1}));
  CHECK(ab.invariants.free_rank == 1);
  CHECK(ab.invariants.torsion == std::vector<Integer>{2});
}

TEST_CASE("expected_rank examples") {
  auto amalgam = validate({{{"A", {"a", "b"}}, {"B", {"c", "d"}}}, {gen::cyclic_edge("e", "A", "B", {1}, {1})}});
  CHECK(expected_rank(amalgam) == 3);
  CHECK(expected_rank(loop({"a", "b"}, {1}, {2})) == 2);
  CHECK(expected_rank(validate({{{"A", {"a", "b", "c"}}}, {}})) == 3);
}

TEST_CASE("presentation of a loop and a tree edge") {
  const Presentation p = present(trefoil());
  CHECK(p.generators.names() == std::vector<std::string>{"a", "b"});
  REQUIRE(p.relations.size() == 1);
  CHECK(format_word(p.relations[0].relator, p.generators) == "a^2 b^-3");
  const Presentation q = present(loop({"a", "b"}, {1}, {2}));
  CHECK(q.generators.names() == std::vector<std::string>{"a", "b", "t"});
  CHECK(format_word(q.relations[0].relator, q.generators) == "t a t^-1 b^-1");
}

TEST_CASE("decompose examples") {
  auto d = decompose(trefoil(), "e");
  CHECK(d.kind == DecompositionKind::Amalgam);
  CHECK(d.left.vertices().front().id == "A");
  CHECK(d.right->vertices().front().id == "B");
  CHECK(d.u.size() == 2);
  CHECK(d.v.size() == 3);

  d = decompose(loop({"a", "b"}, {1}, {2}), "t");
  CHECK(d.kind == DecompositionKind::Hnn);
  CHECK(d.left.edges().empty());
  CHECK_FALSE(d.right);

  auto theta = validate({{{"A", {"a"}}, {"B", {"b"}}},
                         {gen::cyclic_edge("e1", "A", "B", {1}, {1}), gen::cyclic_edge("e2", "A", "B", {1, 1}, {1})}});
  d = decompose(theta, "e2");
  CHECK(d.kind == DecompositionKind::Hnn);
  CHECK(d.left.edges().size() == 1);
  CHECK(d.left.vertices().size() == 2);
  CHECK_THROWS_AS(decompose(theta, "nope"), Error);
}

TEST_CASE("graphs with trivial edge groups have free abelianization of the free rank") {
  gen::Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const GraphOfGroups g = validate(gen::trivial_edge_graph(rng, 5));
    std::int64_t ranks = 0;
    for (const auto& v : g.vertices()) ranks += static_cast<std::int64_t>(v.alphabet.rank());
    const auto e = static_cast<std::int64_t>(g.edges().size());
    const auto n = static_cast<std::int64_t>(g.vertices().size());
    const auto ab = abelianization(g);
    CHECK(ab.invariants.torsion.empty());
    CHECK(static_cast<std::int64_t>(ab.invariants.free_rank) == ranks + e - n + 1);
    CHECK(expected_rank(g) == ranks + e - n + 1);
    CHECK(spanning_tree(g).size() == static_cast<std::size_t>(n - 1));
  }
}

TEST_CASE("decomposition preserves the abelianization") {
  gen::Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const GraphOfGroups g = validate(gen::two_edge_graph(rng, 5));
    const auto whole = abelianization(g).invariants;
    for (const auto& e : g.edges()) CHECK(reassembled(decompose(g, e.id)) == whole);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const GraphOfGroups g = validate(gen::trivial_edge_graph(rng, 4));
    const auto whole = abelianization(g).invariants;
    for (const auto& e : g.edges()) CHECK(reassembled(decompose(g, e.id)) == whole);
  }
}

TEST_CASE("lift and translate") {
  const GraphOfGroups g = trefoil();
  const Presentation p = present(g);
  const Word b = lift(p, 1, parse_word("b", g.vertices()[1].alphabet));
  CHECK(format_word(b, p.generators) == "b");
  CHECK_THROWS_AS(translate(b, p.generators, Alphabet({"a"})), Error);
  CHECK(translate(b, p.generators, Alphabet({"x", "b"})) == parse_word("b", Alphabet({"x", "b"})));
}
