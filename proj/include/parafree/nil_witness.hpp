#pragma once

// Witnesses for survival in finite nilpotent quotients.
//
// Two tiers: the abelianization (exact and cheap) and a bounded search for
// homomorphisms into UT(n, F_p). The search is a positive semi-decision only;
// running out of bounds is reported, never turned into a negative answer.

#include "parafree/determination.hpp"
#include "parafree/graph_of_groups.hpp"
#include "parafree/ut_group.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace parafree {

/// Largest prime tried by the abelian tier.
constexpr int kAbelianPrimeCap = 13;

struct SearchBounds {
  std::vector<int> dims{3, 4};
  std::vector<int> primes{2, 3, 5};
  std::uint64_t exhaustive_cap = 10'000'000;
  std::uint64_t sample_count = 100'000;
  std::uint64_t seed = 0;

  /// Throws Error(InvalidBounds).
  void validate() const;
  bool operator==(const SearchBounds&) const = default;
};

struct SearchOptions {
  /// Worker threads for the exhaustive phase. The result never depends on it.
  unsigned workers = 1;
};

struct SearchOutcome {
  std::optional<NilWitness> witness;
  SearchReport report;

  bool found() const noexcept { return witness.has_value(); }
};

/// Image of `word` in the abelianization of `p`; Yes when it is nonzero in a
/// finite abelian p-group quotient for some prime p <= 13, Unknown otherwise.
Determination abelian_survival(const Presentation& p, const Word& word);

/// The abelian tier for the `u` word of a cyclic edge of g.
/// Throws Error(UnknownEdge) or Error(EdgeNotCyclic).
Determination abelian_witness(const GraphOfGroups& g, std::string_view edge);

/// Searches (n, p) targets in bounds order. For each target, generator image
/// tuples are enumerated in lexicographic order of their entry vectors until
/// `exhaustive_cap` nodes have been visited, then `sample_count` uniformly
/// random tuples are drawn from a generator seeded by (seed, n, p). The first
/// tuple satisfying every relation with nontrivial image of `survivor` wins.
SearchOutcome search_witness(const Presentation& p, const Word& survivor, std::string edge_label,
                             const SearchBounds& bounds, const SearchOptions& options = {});

/// The same on the full presentation of g, surviving word u of `edge`.
/// Throws Error(UnknownEdge) or Error(EdgeNotCyclic).
SearchOutcome search_witness(const GraphOfGroups& g, std::string_view edge,
                             const SearchBounds& bounds, const SearchOptions& options = {});

/// Recomputes every relation and the survival of the word from scratch.
bool verify_witness(const Presentation& p, const NilWitness& w);
bool verify_witness(const GraphOfGroups& g, const NilWitness& w);

}  // namespace parafree
