#pragma once

// Word problem for one-edge graphs of free groups: reduced sequences in
// amalgams U *_{u=v} V and Britton reduction in HNN extensions U *_{tut^-1=v}.

#include "parafree/determination.hpp"
#include "parafree/graph_of_groups.hpp"
#include "parafree/word.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace parafree {

/// A vertex-group factor or a single stable letter.
struct MixedToken {
  enum class Kind { Factor, Stable };

  Kind kind = Kind::Factor;
  std::size_t index = 0;  // vertex index (factor) or edge index (stable letter)
  Word word;              // factor only, over the vertex alphabet
  int sign = 1;           // stable only

  static MixedToken factor(std::size_t vertex, Word w) {
    return {Kind::Factor, vertex, std::move(w), 1};
  }
  static MixedToken stable(std::size_t edge, int sign) { return {Kind::Stable, edge, {}, sign}; }

  bool operator==(const MixedToken&) const = default;
};

using MixedWord = std::vector<MixedToken>;

MixedWord inverse(const MixedWord& mw);
MixedWord concat(const MixedWord& a, const MixedWord& b);

struct NormalForm {
  MixedWord reduced;
  bool trivial = false;
};

/// k with w = u^k, or nothing. Empty w gives 0; empty u only contains the
/// identity.
std::optional<std::int64_t> cyclic_membership(const Word& w, const Word& u);

/// Britton reduction in <base, t | t u t^-1 = v>. Factor tags are carried
/// through; throws Error(WordSyntax) on a factor outside `base`.
NormalForm britton_reduce(const Alphabet& base, const Word& u, const Word& v, const MixedWord& mw);

/// Reduced sequence in left *_{u=v} right. Factors tagged `left_vertex`
/// belong to `left`, all others to `right`. Throws Error(WordSyntax) on a
/// stable letter or a factor outside its alphabet.
NormalForm amalgam_reduce(const Alphabet& left, const Alphabet& right, const Word& u,
                          const Word& v, const MixedWord& mw, std::size_t left_vertex = 0,
                          std::size_t right_vertex = 1);

/// Exact on graphs with at most one edge and on words inside one vertex
/// group; Unknown otherwise.
Determination is_nontrivial(const GraphOfGroups& g, const MixedWord& mw);

/// Reduced form for graphs with at most one edge, nothing otherwise.
std::optional<NormalForm> reduce(const GraphOfGroups& g, const MixedWord& mw);

/// Word-grammar tokens naming vertex generators or stable letters (ids of
/// non-tree edges). Throws WordSyntaxError.
MixedWord parse_mixed_word(std::string_view text, const GraphOfGroups& g);

/// A word over the presentation generators of g, split into tokens.
MixedWord to_mixed_word(const GraphOfGroups& g, const Presentation& p, const Word& w);

std::string format_mixed_word(const MixedWord& mw, const GraphOfGroups& g);

}  // namespace parafree
