#pragma once

// Upper unitriangular groups UT(n, F_p), the finite nilpotent targets used to
// witness that an element survives in a nilpotent quotient.

#include "parafree/word.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace parafree {

constexpr int kMinUtDimension = 3;
constexpr int kMaxUtDimension = 5;

bool is_prime(std::int64_t p);

/// p^(n(n-1)/2).
std::uint64_t ut_group_order(int n, int p);

class UtElement {
 public:
  using Storage = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor,
                                kMaxUtDimension, kMaxUtDimension>;

  UtElement() = default;
  static UtElement identity(int n, int p);
  /// Strictly-upper entries read row-major form the digits of `index` in base
  /// p, most significant first; index order is lexicographic entry order.
  static UtElement from_index(int n, int p, std::uint64_t index);
  /// Throws Error(Shape) unless there are n(n-1)/2 entries in [0, p).
  static UtElement from_entries(int n, int p, std::span<const std::int32_t> upper);

  int dimension() const noexcept { return n_; }
  int modulus() const noexcept { return p_; }
  const Storage& matrix() const noexcept { return m_; }
  std::vector<std::int32_t> upper_entries() const;
  std::uint64_t index() const;

  bool is_identity() const;
  UtElement inverse() const;

  /// Throws Error(IncompatibleTargets) when (n, p) differ.
  friend UtElement operator*(const UtElement& a, const UtElement& b);
  friend bool operator==(const UtElement& a, const UtElement& b);

 private:
  UtElement(int n, int p, Storage m) : n_(n), p_(p), m_(std::move(m)) {}
  int n_ = 0;
  int p_ = 0;
  Storage m_;
};

UtElement commutator(const UtElement& a, const UtElement& b);

/// Product of images (inverted for negative letters) along w; the image of
/// the identity word is `identity(n, p)` taken from the first image. Throws
/// Error(UnknownGenerator) if w uses a generator without an image and
/// Error(IncompatibleTargets) if the images live in different groups.
UtElement eval_word(std::span<const UtElement> images, const Word& w);

/// A homomorphism from a presented group into UT(n, p) under which
/// `surviving_word` has nontrivial image.
struct NilWitness {
  int n = 0;
  int p = 0;
  std::vector<std::string> generators;  // presentation generator names
  std::vector<UtElement> images;        // aligned with generators
  std::string edge;                     // edge whose word survives
  Word surviving_word;                  // over the presentation generators
  std::vector<std::string> checked_relations;

  bool operator==(const NilWitness&) const = default;
};

}  // namespace parafree
