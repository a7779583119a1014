#pragma once

// Three-valued outcomes with checkable evidence.

#include "parafree/lattice.hpp"
#include "parafree/ut_group.hpp"
#include "parafree/word.hpp"

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace parafree {

enum class Truth { No, Unknown, Yes };

std::string_view to_string(Truth t);

/// Kleene conjunction / disjunction.
Truth conjunction(std::initializer_list<Truth> values);
Truth disjunction(std::initializer_list<Truth> values);
Truth conjunction(const std::vector<Truth>& values);
Truth disjunction(const std::vector<Truth>& values);

/// w = conjugator * root^exponent * conjugator^-1 in the named group.
struct RootCertificate {
  std::string group;
  Alphabet alphabet;
  Word word;
  RootDecomposition decomposition;

  bool verify() const;
};

/// W_ab as computed, against the rank the graph predicts.
struct AbelianCertificate {
  CokernelInvariants invariants;
  std::int64_t expected_rank = 0;
};

/// Image of a word in an abelianization, in Smith coordinates, plus the
/// verdict of the exact proper-power test there.
struct AbelianImageCertificate {
  CokernelInvariants group;
  CokernelElement image;
  std::optional<Integer> power_divisor;  // set when the image is a proper power
};

/// The image of a word survives in a finite abelian p-group quotient of W_ab:
/// coordinate `coordinate` is nonzero modulo `modulus` = p^k.
struct SurvivalCertificate {
  std::string coordinate;
  Integer value;
  Integer prime;
  Integer modulus;
};

/// Images of u and v in Z^2 stacked as rows, and their determinant.
struct DeterminantCertificate {
  IntMatrix rows;
  Integer determinant;
};

struct SearchTargetReport {
  int n = 0;
  int p = 0;
  std::uint64_t nodes = 0;
  std::uint64_t samples = 0;
  bool exhausted = false;  // the whole space was enumerated
};

struct SearchReport {
  std::vector<SearchTargetReport> targets;
};

/// Free-form justification for rule-based outcomes and skipped tests.
struct Note {
  std::string text;
};

using Evidence = std::variant<std::monostate, Note, ContentCertificate, RootCertificate,
                              AbelianCertificate, AbelianImageCertificate, SurvivalCertificate,
                              DeterminantCertificate, NilWitness, SearchReport>;

struct Determination {
  std::string label;
  Truth value = Truth::Unknown;
  std::string rule;  // short machine-readable tag naming the test used
  Evidence evidence;
  std::vector<Determination> parts;

  static Determination yes(std::string rule, Evidence evidence = {});
  static Determination no(std::string rule, Evidence evidence = {});
  static Determination unknown(std::string rule, Evidence evidence = {});

  Determination& labelled(std::string l) {
    label = std::move(l);
    return *this;
  }
};

/// Combined determinations keep their inputs as parts.
Determination all_of(std::string rule, std::vector<Determination> parts);
Determination any_of(std::string rule, std::vector<Determination> parts);

}  // namespace parafree
