#include "parafree/normal_form.hpp"

#include "parafree/error.hpp"

#include <algorithm>

namespace parafree {

MixedWord inverse(const MixedWord& mw) {
  MixedWord out;
  out.reserve(mw.size());
  for (auto it = mw.rbegin(); it != mw.rend(); ++it) {
    MixedToken t = *it;
    if (t.kind == MixedToken::Kind::Factor)
      t.word = t.word.inverse();
    else
      t.sign = -t.sign;
    out.push_back(std::move(t));
  }
  return out;
}

MixedWord concat(const MixedWord& a, const MixedWord& b) {
  MixedWord out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::optional<std::int64_t> cyclic_membership(const Word& w, const Word& u) {
  if (w.empty()) return 0;
  if (u.empty()) return std::nullopt;
  const RootDecomposition ru = primitive_root(u);
  const Word inner = ru.conjugator.inverse() * w * ru.conjugator;
  const auto len = static_cast<std::int64_t>(ru.root.size());
  const auto total = static_cast<std::int64_t>(inner.size());
  if (total % len != 0) return std::nullopt;
  for (std::int64_t m : {total / len, -total / len}) {
    if (ru.root.pow(m) != inner) continue;
    if (m % ru.exponent != 0) return std::nullopt;
    return m / ru.exponent;
  }
  return std::nullopt;
}

namespace {

using Kind = MixedToken::Kind;

void check_factor(const MixedToken& t, const Alphabet& a) {
  if (t.word.support_rank() > a.rank())
    throw Error(ErrorCode::WordSyntax, "factor uses a generator outside its vertex group");
}

}  // namespace

NormalForm britton_reduce(const Alphabet& base, const Word& u, const Word& v, const MixedWord& mw) {
  MixedWord st;
  auto push_factor = [&](MixedToken f) {
    if (!st.empty() && st.back().kind == Kind::Factor) {
      f.word = st.back().word * f.word;
      f.index = st.back().index;
      st.pop_back();
    }
    if (!f.word.empty()) st.push_back(std::move(f));
  };

  for (const MixedToken& tok : mw) {
    if (tok.kind == Kind::Factor) {
      check_factor(tok, base);
      push_factor(tok);
      continue;
    }
    if (tok.sign != 1 && tok.sign != -1)
      throw Error(ErrorCode::WordSyntax, "stable letter exponent must be +1 or -1");
    const std::size_t n = st.size();
    std::optional<std::size_t> stable_pos;
    Word middle;
    std::size_t tag = 0;
    if (n >= 1 && st[n - 1].kind == Kind::Stable) {
      stable_pos = n - 1;
    } else if (n >= 2 && st[n - 2].kind == Kind::Stable) {
      stable_pos = n - 2;
      middle = st[n - 1].word;
      tag = st[n - 1].index;
    }
    if (stable_pos && st[*stable_pos].sign == -tok.sign) {
      // t (u^k) t^-1 = v^k and t^-1 (v^k) t = u^k
      const bool forward = st[*stable_pos].sign > 0;
      if (auto k = cyclic_membership(middle, forward ? u : v)) {
        st.resize(*stable_pos);
        push_factor(MixedToken::factor(tag, (forward ? v : u).pow(*k)));
        continue;
      }
    }
    st.push_back(tok);
  }
  const bool trivial = st.empty();
  return {std::move(st), trivial};
}

NormalForm amalgam_reduce(const Alphabet& left, const Alphabet& right, const Word& u,
                          const Word& v, const MixedWord& mw, std::size_t left_vertex,
                          std::size_t right_vertex) {
  // Side 0 is `left` (subgroup <u>), side 1 is `right` (subgroup <v>).
  const Word* sub[2] = {&u, &v};
  const std::size_t tag[2] = {left_vertex, right_vertex};
  std::vector<std::pair<int, Word>> st;

  auto push = [&](int side, Word f) {
    while (!f.empty()) {
      if (st.empty()) {
        st.emplace_back(side, std::move(f));
        return;
      }
      auto& top = st.back();
      if (top.first == side) {
        f = top.second * f;
        st.pop_back();
        continue;
      }
      if (auto k = cyclic_membership(f, *sub[side])) {
        f = sub[1 - side]->pow(*k);
        side = 1 - side;
        continue;
      }
      if (auto k = cyclic_membership(top.second, *sub[top.first])) {
        f = sub[side]->pow(*k) * f;
        st.pop_back();
        continue;
      }
      st.emplace_back(side, std::move(f));
      return;
    }
  };

  for (const MixedToken& tok : mw) {
    if (tok.kind == Kind::Stable)
      throw Error(ErrorCode::WordSyntax, "stable letter in an amalgam word");
    int side;
    if (tok.index == left_vertex)
      side = 0;
    else if (tok.index == right_vertex)
      side = 1;
    else
      throw Error(ErrorCode::WordSyntax, "factor outside both amalgam factors");
    check_factor(tok, side == 0 ? left : right);
    push(side, tok.word);
  }

  NormalForm out;
  for (auto& [side, w] : st) out.reduced.push_back(MixedToken::factor(tag[side], std::move(w)));
  out.trivial = out.reduced.empty();
  return out;
}

namespace {

void check_tokens(const GraphOfGroups& g, const MixedWord& mw) {
  for (const auto& t : mw) {
    if (t.kind == Kind::Factor) {
      if (t.index >= g.vertices().size())
        throw Error(ErrorCode::WordSyntax, "factor names an unknown vertex");
      check_factor(t, g.vertices()[t.index].alphabet);
    } else if (t.index >= g.edges().size() || (t.sign != 1 && t.sign != -1)) {
      throw Error(ErrorCode::WordSyntax, "malformed stable letter");
    }
  }
}

// The product when every token is a factor of one vertex.
std::optional<MixedToken> single_vertex(const MixedWord& mw) {
  std::optional<std::size_t> vertex;
  Word product;
  for (const auto& t : mw) {
    if (t.kind == Kind::Stable) return std::nullopt;
    if (vertex && *vertex != t.index) return std::nullopt;
    vertex = t.index;
    product = product * t.word;
  }
  return MixedToken::factor(vertex.value_or(0), std::move(product));
}

}  // namespace

std::optional<NormalForm> reduce(const GraphOfGroups& g, const MixedWord& mw) {
  check_tokens(g, mw);
  if (auto f = single_vertex(mw)) {
    NormalForm out;
    if (!f->word.empty()) out.reduced.push_back(std::move(*f));
    out.trivial = out.reduced.empty();
    return out;
  }
  if (g.edges().size() != 1) return std::nullopt;
  const Edge& e = g.edges().front();
  const auto& vs = g.vertices();
  if (e.is_loop()) return britton_reduce(vs[e.from].alphabet, e.u, e.v, mw);
  return amalgam_reduce(vs[e.from].alphabet, vs[e.to].alphabet, e.u, e.v, mw, e.from, e.to);
}

Determination is_nontrivial(const GraphOfGroups& g, const MixedWord& mw) {
  auto nf = reduce(g, mw);
  if (!nf)
    return Determination::unknown(
        "word_problem_scope", Note{"word crosses vertex groups of a graph with several edges"});
  const std::string rule = single_vertex(mw)            ? "free_reduction"
                           : g.edges().front().is_loop() ? "britton_reduction"
                                                         : "reduced_sequence";
  if (nf->trivial) return Determination::no(rule, Note{"reduces to the identity"});
  return Determination::yes(rule, Note{"reduced form: " + format_mixed_word(nf->reduced, g)});
}

namespace {

std::vector<std::size_t> non_tree_edges(const GraphOfGroups& g) {
  const auto tree = spanning_tree(g);
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < g.edges().size(); ++e)
    if (!tree.count(g.edges()[e].id)) out.push_back(e);
  return out;
}

}  // namespace

MixedWord to_mixed_word(const GraphOfGroups& g, const Presentation& p, const Word& w) {
  const auto stable = non_tree_edges(g);
  const std::size_t vertex_gens = p.generators.rank() - p.stable_letters;
  MixedWord out;
  std::vector<Letter> pending;
  std::size_t pending_vertex = 0;
  auto flush = [&]() {
    if (!pending.empty()) out.push_back(MixedToken::factor(pending_vertex, Word::from_letters(pending)));
    pending.clear();
  };
  for (Letter l : w.letters()) {
    const std::size_t gen = generator_of(l);
    if (gen >= p.generators.rank())
      throw Error(ErrorCode::UnknownGenerator, "letter outside the presentation");
    if (gen >= vertex_gens) {
      flush();
      out.push_back(MixedToken::stable(stable.at(gen - vertex_gens), sign_of(l)));
      continue;
    }
    const auto it = std::upper_bound(p.vertex_offset.begin(), p.vertex_offset.end(), gen);
    const auto vertex = static_cast<std::size_t>(it - p.vertex_offset.begin()) - 1;
    if (!pending.empty() && vertex != pending_vertex) flush();
    pending_vertex = vertex;
    pending.push_back(make_letter(gen - p.vertex_offset[vertex], sign_of(l)));
  }
  flush();
  return out;
}

MixedWord parse_mixed_word(std::string_view text, const GraphOfGroups& g) {
  const Presentation p = present(g);
  std::vector<Letter> letters;
  try {
    letters = parse_letters(text, p.generators);
  } catch (const WordSyntaxError& e) {
    std::size_t end = e.position();
    while (end < text.size() && (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
      ++end;
    const std::string name(text.substr(e.position(), end - e.position()));
    if (auto idx = g.edge_index(name))
      throw WordSyntaxError(e.position(), "edge '" + name + "' lies in the spanning tree and has no stable letter (position " +
                                              std::to_string(e.position()) + ")");
    throw;
  }
  return to_mixed_word(g, p, Word::from_letters(letters));
}

std::string format_mixed_word(const MixedWord& mw, const GraphOfGroups& g) {
  std::string out;
  auto append = [&](const std::string& s) {
    if (!out.empty()) out += ' ';
    out += s;
  };
  for (std::size_t i = 0; i < mw.size();) {
    const MixedToken& t = mw[i];
    if (t.kind == Kind::Factor) {
      append(format_word(t.word, g.vertices().at(t.index).alphabet));
      ++i;
      continue;
    }
    std::int64_t run = 0;
    std::size_t j = i;
    while (j < mw.size() && mw[j].kind == Kind::Stable && mw[j].index == t.index && mw[j].sign == t.sign) {
      run += t.sign;
      ++j;
    }
    const std::string& id = g.edges().at(t.index).id;
    append(run == 1 ? id : id + "^" + std::to_string(run));
    i = j;
  }
  return out;
}

}  // namespace parafree
