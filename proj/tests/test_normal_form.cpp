#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "parafree/error.hpp"
#include "parafree/normal_form.hpp"

using namespace parafree;

namespace {

const Alphabet ab({"a", "b"});

Word w(std::string_view text, const Alphabet& a = ab) { return parse_word(text, a); }

GraphOfGroups free_hnn() {
  return validate({{{"U", {"a", "b"}}}, {gen::cyclic_edge("t", "U", "U", {1}, {2})}});
}

GraphOfGroups trefoil() {
  return validate({{{"A", {"a"}}, {"B", {"b"}}}, {gen::cyclic_edge("e", "A", "B", {1, 1}, {1, 1, 1})}});
}

bool has_pinch(const NormalForm& nf, const Word& u, const Word& v) {
  const auto& r = nf.reduced;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    if (r[i].kind != MixedToken::Kind::Stable) continue;
    std::size_t j = i + 1;
    Word middle;
    if (r[j].kind == MixedToken::Kind::Factor) {
      middle = r[j].word;
      ++j;
    }
    if (j >= r.size() || r[j].kind != MixedToken::Kind::Stable || r[j].sign != -r[i].sign) continue;
    if (cyclic_membership(middle, r[i].sign > 0 ? u : v)) return true;
  }
  return false;
}

// A random mixed word over {a, b, t} as raw letters (t is letter 3).
std::vector<int> random_hnn_letters(gen::Rng& rng, int max_len) { return gen::raw_letters(rng, 3, max_len); }

MixedWord to_mixed(const std::vector<int>& letters) {
  MixedWord out;
  std::vector<Letter> pending;
  auto flush = [&]() {
    if (!pending.empty()) out.push_back(MixedToken::factor(0, Word::from_letters(pending)));
    pending.clear();
  };
  for (int l : letters) {
    if (std::abs(l) == 3) {
      flush();
      out.push_back(MixedToken::stable(0, l > 0 ? 1 : -1));
    } else {
      pending.push_back(l);
    }
  }
  flush();
  return out;
}

}  // namespace

TEST_CASE("cyclic_membership examples") {
  CHECK(cyclic_membership(w("a a a"), w("a")) == 3);
  CHECK_FALSE(cyclic_membership(w("b"), w("a")));
  CHECK(cyclic_membership(Word{}, w("a")) == 0);
  CHECK(cyclic_membership(w("a^4"), w("a^2")) == 2);
  CHECK(cyclic_membership(w("a^-4"), w("a^2")) == -2);
  CHECK_FALSE(cyclic_membership(w("a^3"), w("a^2")));
  CHECK(cyclic_membership(w("b a^3 b^-1"), w("b a b^-1")) == 3);
  CHECK_FALSE(cyclic_membership(w("a b a b"), w("b a")));
  CHECK(cyclic_membership(w("a b a b"), w("a b")) == 2);
  CHECK_FALSE(cyclic_membership(w("a"), Word{}));
}

TEST_CASE("britton_reduce examples") {
  const MixedWord pinch{MixedToken::stable(0, 1), MixedToken::factor(0, w("a")), MixedToken::stable(0, -1)};
  auto nf = britton_reduce(ab, w("a"), w("b"), pinch);
  REQUIRE(nf.reduced.size() == 1);
  CHECK(nf.reduced[0].word == w("b"));
  CHECK_FALSE(nf.trivial);

  nf = britton_reduce(ab, w("a"), w("b"), {MixedToken::stable(0, 1), MixedToken::stable(0, -1)});
  CHECK(nf.trivial);

  const MixedWord stuck{MixedToken::stable(0, 1), MixedToken::factor(0, w("b")), MixedToken::stable(0, -1)};
  nf = britton_reduce(ab, w("a"), w("b"), stuck);
  CHECK(nf.reduced == stuck);
  CHECK_FALSE(nf.trivial);

  CHECK_THROWS_AS(britton_reduce(ab, w("a"), w("b"), {MixedToken::stable(0, 2)}), Error);
  const Alphabet abc({"a", "b", "c"});
  CHECK_THROWS_AS(britton_reduce(ab, w("a"), w("b"), {MixedToken::factor(0, w("c", abc))}), Error);
}

TEST_CASE("amalgam_reduce examples") {
  const Alphabet a({"a"}), b({"b"});
  const Word u = w("a^2", a), v = w("b^3", b);
  auto nf = amalgam_reduce(a, b, u, v, {MixedToken::factor(0, w("a^2", a)), MixedToken::factor(1, w("b^-3", b))});
  CHECK(nf.trivial);
  nf = amalgam_reduce(a, b, u, v, {MixedToken::factor(0, w("a", a)), MixedToken::factor(1, w("b", b))});
  CHECK_FALSE(nf.trivial);
  CHECK(nf.reduced.size() == 2);
  nf = amalgam_reduce(a, b, u, v, {MixedToken::factor(0, w("a^4", a)), MixedToken::factor(1, w("b^-6", b))});
  CHECK(nf.trivial);
  // a^2 b a^-2 = b^3 b b^-3 = b
  nf = amalgam_reduce(a, b, u, v,
                      {MixedToken::factor(0, w("a^2", a)), MixedToken::factor(1, w("b", b)),
                       MixedToken::factor(0, w("a^-2", a))});
  REQUIRE(nf.reduced.size() == 1);
  CHECK(nf.reduced[0].index == 1);
  CHECK(nf.reduced[0].word == w("b", b));
  CHECK_THROWS_AS(amalgam_reduce(a, b, u, v, {MixedToken::stable(0, 1)}), Error);
}

TEST_CASE("is_nontrivial examples") {
  const auto single = validate({{{"A", {"a", "b"}}}, {}});
  CHECK(is_nontrivial(single, parse_mixed_word("a", single)).value == Truth::Yes);
  CHECK(is_nontrivial(single, parse_mixed_word("a b b^-1 a^-1", single)).value == Truth::No);
  const auto hnn = free_hnn();
  CHECK(is_nontrivial(hnn, parse_mixed_word("t a t^-1 b^-1", hnn)).value == Truth::No);
  CHECK(is_nontrivial(hnn, parse_mixed_word("t b t^-1", hnn)).value == Truth::Yes);
  const auto two = validate({{{"A", {"a"}}, {"B", {"b"}}, {"C", {"c"}}},
                             {gen::cyclic_edge("e1", "A", "B", {1}, {1, 1}), gen::cyclic_edge("e2", "B", "C", {1}, {1, 1})}});
  CHECK(is_nontrivial(two, parse_mixed_word("a c", two)).value == Truth::Unknown);
  CHECK(is_nontrivial(two, parse_mixed_word("c^2 c^-2", two)).value == Truth::No);
  const auto t = trefoil();
  CHECK(is_nontrivial(t, parse_mixed_word("a^2 b^-3", t)).value == Truth::No);
  CHECK(is_nontrivial(t, parse_mixed_word("a b", t)).value == Truth::Yes);
}

TEST_CASE("mixed word syntax") {
  const auto t = trefoil();
  try {
    parse_mixed_word("a e b", t);
    FAIL("tree edge accepted");
  } catch (const WordSyntaxError& e) {
    CHECK(e.position() == 2);
  }
  CHECK_THROWS_AS(parse_mixed_word("a^0", t), WordSyntaxError);
  const auto hnn = free_hnn();
  const MixedWord mw = parse_mixed_word("a t^2 b", hnn);
  REQUIRE(mw.size() == 4);
  CHECK(mw[1].kind == MixedToken::Kind::Stable);
  CHECK(format_mixed_word(mw, hnn) == "a t^2 b");
  const auto loop_trivial = validate({{{"A", {"a"}}}, {gen::trivial_edge("s", "A", "A")}});
  CHECK(is_nontrivial(loop_trivial, parse_mixed_word("s a s^-1", loop_trivial)).value == Truth::Yes);
  CHECK(is_nontrivial(loop_trivial, parse_mixed_word("s s^-1", loop_trivial)).value == Truth::No);
}

TEST_CASE("Britton triviality agrees with free reduction after eliminating b") {
  // <a, b, t | t a t^-1 = x b y> with x, y words in a is free on a, t via
  // b = x^-1 t a t^-1 y^-1.
  gen::Rng rng(51);
  for (int trial = 0; trial < 1000; ++trial) {
    const int xe = gen::uniform(rng, -2, 2), ye = gen::uniform(rng, -2, 2);
    std::vector<int> v;
    for (int i = 0; i < std::abs(xe); ++i) v.push_back(xe > 0 ? 1 : -1);
    v.push_back(2);
    for (int i = 0; i < std::abs(ye); ++i) v.push_back(ye > 0 ? 1 : -1);
    const std::vector<Letter> vl(v.begin(), v.end());
    const Word vw = Word::from_letters(vl);

    std::vector<int> b_image;  // over a = 1, t = 3
    for (int i = 0; i < std::abs(xe); ++i) b_image.push_back(xe > 0 ? -1 : 1);
    b_image.insert(b_image.end(), {3, 1, -3});
    for (int i = 0; i < std::abs(ye); ++i) b_image.push_back(ye > 0 ? -1 : 1);

    auto letters = random_hnn_letters(rng, 20);
    if (trial % 4 == 0) {  // bias toward trivial words
      auto inv = oracle::invert(letters);
      std::vector<int> conj{3, 1, -3, -2};  // t a t^-1 b^-1 ... only trivial when x = y = 1
      letters.insert(letters.end(), inv.begin(), inv.end());
    }
    std::vector<int> rewritten;
    for (int l : letters) {
      if (std::abs(l) == 2) {
        auto img = l > 0 ? b_image : oracle::invert(b_image);
        rewritten.insert(rewritten.end(), img.begin(), img.end());
      } else {
        rewritten.push_back(l);
      }
    }
    const bool expect_trivial = oracle::reduce(rewritten).empty();
    const auto nf = britton_reduce(ab, w("a"), vw, to_mixed(letters));
    CHECK(nf.trivial == expect_trivial);
    CHECK_FALSE(has_pinch(nf, w("a"), vw));
    const MixedWord mw = to_mixed(letters);
    CHECK(britton_reduce(ab, w("a"), vw, concat(mw, inverse(mw))).trivial);
  }
}

TEST_CASE("amalgam triviality agrees with free reduction in a collapsed amalgam") {
  // <a> *_{a = v} F(c, d) is F(c, d) via a -> v.
  gen::Rng rng(52);
  const Alphabet a({"a"}), cd({"c", "d"});
  for (int trial = 0; trial < 1000; ++trial) {
    const auto v = gen::reduced_word(rng, 2, 4);
    const std::vector<Letter> vl(v.begin(), v.end());
    const Word vw = Word::from_letters(vl);
    MixedWord mw;
    std::vector<int> image;
    const int factors = gen::uniform(rng, 0, 6);
    for (int f = 0; f < factors; ++f) {
      if (f % 2 == 0) {
        const int k = gen::uniform(rng, -3, 3);
        const std::vector<Letter> ak(static_cast<std::size_t>(std::abs(k)), k > 0 ? 1 : -1);
        mw.push_back(MixedToken::factor(0, Word::from_letters(ak)));
        for (int i = 0; i < std::abs(k); ++i) {
          auto img = k > 0 ? v : oracle::invert(v);
          image.insert(image.end(), img.begin(), img.end());
        }
      } else {
        auto x = gen::raw_letters(rng, 2, 4);
        if (trial % 3 == 0) x = oracle::invert(v);
        const std::vector<Letter> xl(x.begin(), x.end());
        mw.push_back(MixedToken::factor(1, Word::from_letters(xl)));
        image.insert(image.end(), x.begin(), x.end());
      }
    }
    const auto nf = amalgam_reduce(a, cd, w("a", a), vw, mw);
    CHECK(nf.trivial == oracle::reduce(image).empty());
    CHECK(amalgam_reduce(a, cd, w("a", a), vw, concat(mw, inverse(mw))).trivial);
    if (nf.reduced.size() > 1)
      for (const auto& f : nf.reduced)
        CHECK_FALSE(cyclic_membership(f.word, f.index == 0 ? w("a", a) : vw));
  }
}

TEST_CASE("random one-edge instances: mw times its inverse is trivial") {
  gen::Rng rng(53);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto u = gen::reduced_word(rng, 2, 4), v = gen::reduced_word(rng, 2, 4);
    const bool loop = trial % 2 == 0;
    const GraphOfGroups g =
        loop ? validate({{{"U", {"a", "b"}}}, {gen::cyclic_edge("t", "U", "U", u, v)}})
             : validate({{{"U", {"a", "b"}}, {"V", {"c", "d"}}}, {gen::cyclic_edge("e", "U", "V", u, v)}});
    const Presentation p = present(g);
    const auto raw = gen::raw_letters(rng, static_cast<int>(p.generators.rank()), 20);
    const std::vector<Letter> rl(raw.begin(), raw.end());
    const MixedWord mw = to_mixed_word(g, p, Word::from_letters(rl));
    const auto nf = reduce(g, concat(mw, inverse(mw)));
    REQUIRE(nf);
    CHECK(nf->trivial);
    const auto once = reduce(g, mw);
    REQUIRE(once);
    if (loop) CHECK_FALSE(has_pinch(*once, g.edges()[0].u, g.edges()[0].v));
    // reducing twice changes nothing
    CHECK(reduce(g, once->reduced)->reduced == once->reduced);
  }
}
