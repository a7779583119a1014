#pragma once

// Parafreeness checks for amalgams, HNN extensions and graphs of free groups
// with cyclic edge groups.
//
// Every condition is a three-valued Determination; the verdict is their
// Kleene conjunction, so Parafree and NotParafree are never guesses.

#include "parafree/determination.hpp"
#include "parafree/graph_of_groups.hpp"
#include "parafree/nil_witness.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace parafree {

enum class Status { Parafree, NotParafree, Unknown };

std::string_view to_string(Status s);
Status status_of(Truth t);

/// One edge removal of the recursive decomposition.
struct Step {
  std::string edge;
  DecompositionKind kind = DecompositionKind::Amalgam;
  EdgeGroup group = EdgeGroup::Trivial;
  std::vector<std::string> left;   // vertex ids of the source piece (the base for HNN)
  std::vector<std::string> right;  // vertex ids of the target piece
  std::vector<Determination> conditions;
};

struct Verdict {
  Status status = Status::Unknown;
  std::map<std::string, Determination> conditions;  // "cond1" .. "cond4"
  std::vector<Step> trace;
  SearchBounds bounds;
};

struct CheckOptions {
  SearchBounds bounds;
  SearchOptions search;
  /// Decide condition 4 over a free base of rank 2 by the determinant of the
  /// abelianized edge words.
  bool rank2_fast_path = true;
  /// Edge removal order; lexicographic by id when absent. Must list every
  /// edge exactly once.
  std::optional<std::vector<std::string>> edge_order;
};

/// Yes iff w is not a proper power in pi_1(group); w is a word over the
/// presentation generators of `group`. Exact on a single free vertex.
/// Throws Error(Precondition) unless w is known to be nontrivial.
Determination not_proper_power_in(const GraphOfGroups& group, const Word& w);

Verdict check_gog(const GraphOfGroups& g, const CheckOptions& options = {});

/// pi_1(U) *_{u=v} pi_1(V); u, v are words over the presentation generators
/// of U and V. Throws Error(Precondition) unless both are known nontrivial.
Verdict check_amalgam(const GraphOfGroups& U, const GraphOfGroups& V, const Word& u,
                      const Word& v, const CheckOptions& options = {});

/// pi_1(U) *_{t u t^-1 = v}. Throws Error(Precondition) as above.
Verdict check_hnn(const GraphOfGroups& U, const Word& u, const Word& v,
                  const CheckOptions& options = {});

}  // namespace parafree
