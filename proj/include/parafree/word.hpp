#pragma once

// Words in finite-rank free groups.
//
// A letter is a signed generator index: +(i+1) is generator i, -(i+1) its
// inverse. Generator names only exist at the parsing boundary (Alphabet);
// everything below works on indices.

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parafree {

using Letter = std::int32_t;
using ExponentVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

constexpr Letter make_letter(std::size_t generator, int sign) {
  return sign > 0 ? static_cast<Letter>(generator + 1)
                  : -static_cast<Letter>(generator + 1);
}
constexpr std::size_t generator_of(Letter l) {
  return static_cast<std::size_t>(l > 0 ? l : -l) - 1;
}
constexpr int sign_of(Letter l) { return l > 0 ? 1 : -1; }

/// Ordered, duplicate-free list of generator names.
class Alphabet {
 public:
  Alphabet() = default;
  /// Throws Error(InvalidName) on an empty list, a malformed or repeated name.
  explicit Alphabet(std::vector<std::string> names);

  std::size_t rank() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t generator) const { return names_.at(generator); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> names_;
};

bool is_identifier(std::string_view name);

/// A freely reduced word. The only way to build one is through reduction, so
/// the invariant holds for every instance.
class Word {
 public:
  Word() = default;

  std::span<const Letter> letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  Word inverse() const;
  Word pow(std::int64_t k) const;
  /// Largest generator index plus one (0 for the identity).
  std::size_t support_rank() const;

  friend Word operator*(const Word& a, const Word& b);
  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word&, const Word&) = default;

  /// Reduces without range checks; for callers that already own valid letters.
  static Word from_letters(std::span<const Letter> raw);

 private:
  explicit Word(std::vector<Letter> reduced) : letters_(std::move(reduced)) {}
  std::vector<Letter> letters_;
};

/// Free reduction with generator range checking against `rank`.
/// Throws Error(InvalidLetter) for a zero letter or an index >= rank.
Word free_reduce(std::span<const Letter> raw, std::size_t rank);

struct CyclicReduction {
  Word core;
  Word conjugator;
};

/// w = conjugator * core * conjugator^-1 with core cyclically reduced.
CyclicReduction cyclic_reduce(const Word& w);

struct RootDecomposition {
  Word conjugator;
  Word root;
  std::int64_t exponent = 0;

  bool is_proper_power() const noexcept { return exponent >= 2; }
};

/// w = conjugator * root^exponent * conjugator^-1, root cyclically reduced and
/// primitive, exponent maximal. Throws Error(EmptyWord) for the identity.
RootDecomposition primitive_root(const Word& w);

/// Signed letter counts; the image of w in Z^rank.
ExponentVector exponent_vector(const Word& w, std::size_t rank);

/// Parses whitespace-separated `name` / `name^k` tokens (k a nonzero integer).
std::vector<Letter> parse_letters(std::string_view text, const Alphabet& alphabet);
Word parse_word(std::string_view text, const Alphabet& alphabet);

/// Inverse of parse_word: runs of one letter collapse to `name^k`.
std::string format_word(const Word& w, const Alphabet& alphabet);

}  // namespace parafree
