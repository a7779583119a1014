#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "parafree/error.hpp"
#include "parafree/nil_witness.hpp"

using namespace parafree;

namespace {

GraphOfGroups loop(std::vector<std::string> gens, std::vector<int> u, std::vector<int> v) {
  return validate({{{"U", std::move(gens)}}, {gen::cyclic_edge("t", "U", "U", std::move(u), std::move(v))}});
}

UtElement random_ut(gen::Rng& rng, int n, int p) {
  return UtElement::from_index(n, p, std::uniform_int_distribution<std::uint64_t>(0, ut_group_order(n, p) - 1)(rng));
}

UtElement elementary(int n, int p, int i, int j) {
  std::vector<std::int32_t> e(static_cast<std::size_t>(n * (n - 1) / 2), 0);
  std::size_t k = 0;
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c, ++k)
      if (r == i && c == j) e[k] = 1;
  return UtElement::from_entries(n, p, e);
}

std::vector<oracle::Letters> plain_relators(const Presentation& p) {
  std::vector<oracle::Letters> out;
  for (const auto& r : p.relations) out.emplace_back(r.relator.letters().begin(), r.relator.letters().end());
  return out;
}

// First image tuple in lexicographic order (generator 0 most significant).
std::optional<std::vector<std::uint64_t>> lex_first(const Presentation& p, const Word& survivor, int n, int pr) {
  const std::size_t m = p.generators.rank();
  const std::uint64_t order = oracle::ut_order(n, pr);
  const auto rels = plain_relators(p);
  const oracle::Letters s(survivor.letters().begin(), survivor.letters().end());
  std::vector<std::uint64_t> idx(m, 0);
  while (true) {
    std::vector<oracle::Ut> images;
    for (auto i : idx) images.push_back(oracle::Ut::from_index(n, pr, i));
    bool ok = !oracle::eval(images, s, n, pr).is_identity();
    for (const auto& r : rels) ok = ok && oracle::eval(images, r, n, pr).is_identity();
    if (ok) return idx;
    std::size_t k = m;
    while (k > 0 && ++idx[k - 1] == order) idx[--k] = 0;
    if (k == 0) return std::nullopt;
  }
}

}  // namespace

TEST_CASE("UT(n, p) is a group of the expected order") {
  for (auto [n, p] : {std::pair{3, 2}, std::pair{3, 3}}) {
    const std::uint64_t order = ut_group_order(n, p);
    CHECK(order == oracle::ut_order(n, p));
    std::vector<UtElement> all;
    for (std::uint64_t i = 0; i < order; ++i) {
      all.push_back(UtElement::from_index(n, p, i));
      CHECK(all.back().index() == i);
    }
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = 0; j < all.size(); ++j) {
        const UtElement prod = all[i] * all[j];
        CHECK(prod.index() < order);
        CHECK(prod == all[prod.index()]);
      }
  }
}

TEST_CASE("UT arithmetic: associativity, inverses, nilpotency") {
  gen::Rng rng(41);
  for (int n = 3; n <= 5; ++n)
    for (int p : {2, 3, 5, 7}) {
      for (int trial = 0; trial < 1000 / 12; ++trial) {
        const UtElement a = random_ut(rng, n, p), b = random_ut(rng, n, p), c = random_ut(rng, n, p);
        CHECK((a * b) * c == a * (b * c));
        CHECK((a * a.inverse()).is_identity());
        CHECK((a.inverse() * a).is_identity());
        UtElement acc = random_ut(rng, n, p);
        for (int k = 1; k < n; ++k) acc = commutator(acc, random_ut(rng, n, p));
        CHECK(acc.is_identity());
      }
    }
}

TEST_CASE("UT arithmetic agrees with plain matrices") {
  gen::Rng rng(42);
  auto index_of = [](const oracle::Ut& u) {
    std::uint64_t idx = 0;
    for (int i = 0; i < u.n; ++i)
      for (int j = i + 1; j < u.n; ++j) idx = idx * static_cast<std::uint64_t>(u.p) + static_cast<std::uint64_t>(u.a[i][j]);
    return idx;
  };
  for (int trial = 0; trial < 500; ++trial) {
    const int n = gen::uniform(rng, 3, 5), p = std::array{2, 3, 5, 7}[gen::uniform(rng, 0, 3)];
    const UtElement a = random_ut(rng, n, p), b = random_ut(rng, n, p);
    const auto oa = oracle::Ut::from_index(n, p, a.index()), ob = oracle::Ut::from_index(n, p, b.index());
    CHECK((a * b).index() == index_of(oa * ob));
    CHECK(a.inverse().index() == index_of(oa.inverse()));
  }
}

TEST_CASE("UT construction errors") {
  CHECK_THROWS_AS(UtElement::identity(2, 2), Error);
  CHECK_THROWS_AS(UtElement::identity(6, 2), Error);
  CHECK_THROWS_AS(UtElement::identity(3, 4), Error);
  const std::vector<std::int32_t> bad{0, 2, 0};
  CHECK_THROWS_AS(UtElement::from_entries(3, 2, bad), Error);
  CHECK_THROWS_AS(UtElement::identity(3, 2) * UtElement::identity(3, 3), Error);
}

TEST_CASE("eval_word examples") {
  const Alphabet ab({"a", "b"});
  const std::vector<UtElement> trivial{UtElement::identity(3, 5)};
  CHECK(eval_word(trivial, parse_word("a^7", Alphabet({"a"}))).is_identity());
  const std::vector<UtElement> e12{elementary(3, 2, 0, 1)};
  CHECK(eval_word(e12, parse_word("a^2", Alphabet({"a"}))).is_identity());
  const std::vector<UtElement> gens{elementary(3, 3, 0, 1), elementary(3, 3, 1, 2)};
  const UtElement c = eval_word(gens, parse_word("a b a^-1 b^-1", ab));
  CHECK(c.upper_entries() == std::vector<std::int32_t>{0, 1, 0});
  CHECK_THROWS_AS(eval_word(std::vector<UtElement>{elementary(3, 3, 0, 1)}, parse_word("b", ab)), Error);
  const std::vector<UtElement> mixed{elementary(3, 3, 0, 1), elementary(3, 2, 0, 1)};
  CHECK_THROWS_AS(eval_word(mixed, parse_word("a b", ab)), Error);
}

TEST_CASE("abelian_witness examples") {
  CHECK(abelian_witness(loop({"a", "b"}, {1}, {2}), "t").value == Truth::Yes);
  CHECK(abelian_witness(loop({"a"}, {1}, {1, 1}), "t").value == Truth::Unknown);
  auto free_product = validate({{{"A", {"a"}}, {"B", {"b"}}},
                                {gen::cyclic_edge("e", "A", "B", {1}, {1}), gen::trivial_edge("f", "A", "B")}});
  CHECK(abelian_witness(free_product, "e").value == Truth::Yes);
  CHECK_THROWS_AS(abelian_witness(free_product, "f"), Error);
  CHECK_THROWS_AS(abelian_witness(free_product, "zz"), Error);
}

TEST_CASE("abelian survival needs a small prime") {
  // <a, t | t a t^-1 = a^18>: a has order 17 in W_ab, out of reach of primes <= 13.
  std::vector<int> v(18, 1);
  CHECK(abelian_witness(loop({"a"}, {1}, v), "t").value == Truth::Unknown);
  // order 9 = 3^2: a survives mod 9
  std::vector<int> w(10, 1);
  const auto d = abelian_witness(loop({"a"}, {1}, w), "t");
  CHECK(d.value == Truth::Yes);
  CHECK(std::get<SurvivalCertificate>(d.evidence).modulus == 9);
}

TEST_CASE("search_witness examples") {
  const auto hnn = loop({"a", "b"}, {1}, {2});
  SearchBounds bounds;
  const auto found = search_witness(hnn, "t", bounds);
  REQUIRE(found.found());
  CHECK(found.witness->n == 3);
  CHECK(found.witness->p == 2);
  CHECK(verify_witness(hnn, *found.witness));

  const auto bs12 = loop({"a"}, {1}, {1, 1});
  SearchBounds small;
  small.dims = {3};
  small.primes = {2, 3};
  const auto none = search_witness(bs12, "t", small);
  CHECK_FALSE(none.found());
  REQUIRE(none.report.targets.size() == 2);
  for (const auto& t : none.report.targets) CHECK(t.exhausted);
  const Presentation p = present(bs12);
  for (int prime : {2, 3})
    CHECK_FALSE(oracle::nilpotent_witness_exists(2, plain_relators(p), {1}, 3, prime));

  auto with_trivial = validate({{{"A", {"a"}}}, {gen::trivial_edge("f", "A", "A")}});
  CHECK_THROWS_AS(search_witness(with_trivial, "f", bounds), Error);
}

TEST_CASE("verify_witness rejects broken witnesses") {
  const auto hnn = loop({"a", "b"}, {1}, {2});
  const auto found = search_witness(hnn, "t", SearchBounds{});
  REQUIRE(found.found());
  NilWitness w = *found.witness;
  CHECK(verify_witness(hnn, w));

  NilWitness dead = w;
  for (auto& img : dead.images) img = UtElement::identity(w.n, w.p);
  CHECK_FALSE(verify_witness(hnn, dead));

  // Perturb one entry of one image at a time; any relation break is caught.
  int rejected = 0;
  for (std::size_t g = 0; g < w.images.size(); ++g) {
    auto entries = w.images[g].upper_entries();
    for (std::size_t k = 0; k < entries.size(); ++k) {
      NilWitness bent = w;
      auto e = entries;
      e[k] = (e[k] + 1) % w.p;
      bent.images[g] = UtElement::from_entries(w.n, w.p, e);
      const auto plain = present(hnn);
      std::vector<UtElement> imgs = bent.images;
      bool relations_hold = true;
      for (const auto& r : plain.relations) relations_hold = relations_hold && eval_word(imgs, r.relator).is_identity();
      const bool survives = !eval_word(imgs, bent.surviving_word).is_identity();
      CHECK(verify_witness(hnn, bent) == (relations_hold && survives));
      if (!relations_hold) ++rejected;
    }
  }
  CHECK(rejected > 0);

  NilWitness renamed = w;
  renamed.generators[0] = "z";
  CHECK_FALSE(verify_witness(hnn, renamed));
  NilWitness wrong_edge = w;
  wrong_edge.edge = "nope";
  CHECK_FALSE(verify_witness(hnn, wrong_edge));
}

TEST_CASE("search returns the lexicographically least witness") {
  gen::Rng rng(43);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const GraphOfGroups g = loop({"a", "b"}, gen::reduced_word(rng, 2, 3), gen::reduced_word(rng, 2, 3));
    const Presentation p = present(g);
    const Edge& e = g.edge("t");
    const Word survivor = lift(p, e.from, e.u);
    SearchBounds b;
    b.dims = {3};
    b.primes = {2};
    b.exhaustive_cap = 1'000'000;
    b.sample_count = 0;
    const auto got = search_witness(p, survivor, "t", b);
    const auto expect = lex_first(p, survivor, 3, 2);
    CHECK(got.found() == expect.has_value());
    if (got.found() && expect) {
      std::vector<std::uint64_t> idx;
      for (const auto& img : got.witness->images) idx.push_back(img.index());
      CHECK(idx == *expect);
      ++compared;
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("worker count does not change the outcome") {
  gen::Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    const GraphOfGroups g = validate(gen::two_edge_graph(rng, 4));
    SearchBounds b;
    b.dims = {3};
    b.primes = {2, 3};
    b.exhaustive_cap = static_cast<std::uint64_t>(gen::uniform(rng, 10, 5000));
    b.sample_count = 200;
    b.seed = static_cast<std::uint64_t>(trial);
    const auto& e = g.edges().front();
    const auto one = search_witness(g, e.id, b, {1});
    for (unsigned workers : {2u, 3u, 8u}) {
      const auto many = search_witness(g, e.id, b, {workers});
      CHECK(one.witness == many.witness);
      REQUIRE(one.report.targets.size() == many.report.targets.size());
      for (std::size_t i = 0; i < one.report.targets.size(); ++i) {
        CHECK(one.report.targets[i].nodes == many.report.targets[i].nodes);
        CHECK(one.report.targets[i].samples == many.report.targets[i].samples);
        CHECK(one.report.targets[i].exhausted == many.report.targets[i].exhausted);
      }
    }
  }
}

TEST_CASE("sampling after the cap is seeded") {
  const auto hnn = loop({"a", "b"}, {1, 2, -1, -2, 1}, {2});
  SearchBounds b;
  b.dims = {4};
  b.primes = {3};
  b.exhaustive_cap = 1;
  b.sample_count = 5000;
  const auto x = search_witness(hnn, "t", b);
  const auto y = search_witness(hnn, "t", b);
  CHECK(x.witness == y.witness);
  REQUIRE(x.report.targets.size() == 1);
  CHECK_FALSE(x.report.targets[0].exhausted);
  CHECK(x.report.targets[0].nodes <= 1);
  if (x.found()) CHECK(verify_witness(hnn, *x.witness));
}

TEST_CASE("returned witnesses always verify") {
  gen::Rng rng(45);
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const GraphOfGroups g = validate(gen::two_edge_graph(rng, 4));
    SearchBounds b;
    b.dims = {3, 4};
    b.primes = {2, 3};
    b.exhaustive_cap = 20'000;
    b.sample_count = 500;
    b.seed = static_cast<std::uint64_t>(trial);
    for (const auto& e : g.edges()) {
      const auto out = search_witness(g, e.id, b);
      if (out.found()) {
        ++found;
        CHECK(verify_witness(g, *out.witness));
      }
    }
  }
  CHECK(found > 50);
}

TEST_CASE("bounds validation") {
  SearchBounds b;
  CHECK_NOTHROW(b.validate());
  b.dims = {2};
  CHECK_THROWS_AS(b.validate(), Error);
  b = {};
  b.primes = {4};
  CHECK_THROWS_AS(b.validate(), Error);
  b = {};
  b.primes = {};
  CHECK_THROWS_AS(b.validate(), Error);
  b = {};
  b.exhaustive_cap = 0;
  b.sample_count = 0;
  CHECK_THROWS_AS(b.validate(), Error);
}
