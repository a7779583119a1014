#pragma once

// Exact integer lattice algebra over Eigen dense types.
//
// Algorithms are templated on the scalar so they run on GMP integers in
// production and on machine integers in tests. A scalar must provide
// truncating `/` and `%`, `abs`, comparison with 0 and construction from int.

#include "parafree/error.hpp"

#include <Eigen/Core>
#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace Eigen {
template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  using Real = mpz_class;
  using NonInteger = mpz_class;
  using Nested = mpz_class;
  using Literal = mpz_class;
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace parafree {

using Integer = mpz_class;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Integer>;
using IntVector = Vector<Integer>;

namespace detail {

inline Integer abs_value(const Integer& x) { return abs(x); }
inline std::int64_t abs_value(std::int64_t x) { return x < 0 ? -x : x; }

template <typename Scalar>
Scalar gcd(Scalar a, Scalar b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    Scalar r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

template <typename Scalar>
void swap_rows(Matrix<Scalar>& m, Eigen::Index i, Eigen::Index j) {
  if (i != j) m.row(i).swap(m.row(j));
}
template <typename Scalar>
void swap_cols(Matrix<Scalar>& m, Eigen::Index i, Eigen::Index j) {
  if (i != j) m.col(i).swap(m.col(j));
}

}  // namespace detail

/// D = left * input * right with left, right unimodular and D diagonal with
/// nonnegative entries d_1 | d_2 | ... | d_rank and zeros after.
template <typename Scalar>
struct SmithDecomposition {
  Matrix<Scalar> left;
  Matrix<Scalar> diagonal;
  Matrix<Scalar> right;

  Eigen::Index rank() const {
    Eigen::Index r = 0;
    const Eigen::Index k = std::min(diagonal.rows(), diagonal.cols());
    while (r < k && diagonal(r, r) != 0) ++r;
    return r;
  }

  std::vector<Scalar> invariant_factors() const {
    std::vector<Scalar> out;
    for (Eigen::Index i = 0; i < rank(); ++i) out.push_back(diagonal(i, i));
    return out;
  }
};

/// Smith normal form by elementary row/column operations, always pivoting on
/// the smallest nonzero magnitude in the active block.
template <typename Scalar>
SmithDecomposition<Scalar> smith_normal_form(const Matrix<Scalar>& input) {
  using detail::abs_value;
  const Eigen::Index rows = input.rows();
  const Eigen::Index cols = input.cols();
  SmithDecomposition<Scalar> out{Matrix<Scalar>::Identity(rows, rows), input,
                                 Matrix<Scalar>::Identity(cols, cols)};
  Matrix<Scalar>& d = out.diagonal;
  Matrix<Scalar>& u = out.left;
  Matrix<Scalar>& v = out.right;

  const Eigen::Index steps = std::min(rows, cols);
  for (Eigen::Index t = 0; t < steps; ++t) {
    while (true) {
      Eigen::Index pr = -1;
      Eigen::Index pc = -1;
      Scalar best = 0;
      for (Eigen::Index i = t; i < rows; ++i) {
        for (Eigen::Index j = t; j < cols; ++j) {
          if (d(i, j) == 0) continue;
          Scalar a = abs_value(d(i, j));
          if (pr < 0 || a < best) {
            best = a;
            pr = i;
            pc = j;
          }
        }
      }
      if (pr < 0) return out;  // active block is zero

      detail::swap_rows(d, t, pr);
      detail::swap_rows(u, t, pr);
      detail::swap_cols(d, t, pc);
      detail::swap_cols(v, t, pc);

      bool clean = true;
      for (Eigen::Index i = t + 1; i < rows; ++i) {
        if (d(i, t) == 0) continue;
        Scalar q = d(i, t) / d(t, t);
        d.row(i) -= q * d.row(t);
        u.row(i) -= q * u.row(t);
        if (d(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < cols; ++j) {
        if (d(t, j) == 0) continue;
        Scalar q = d(t, j) / d(t, t);
        d.col(j) -= q * d.col(t);
        v.col(j) -= q * v.col(t);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Pivot isolated; enforce divisibility of the remaining block.
      Eigen::Index bad_row = -1;
      for (Eigen::Index i = t + 1; i < rows && bad_row < 0; ++i)
        for (Eigen::Index j = t + 1; j < cols; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad_row = i;
            break;
          }
      if (bad_row < 0) break;
      d.row(t) += d.row(bad_row);
      u.row(t) += u.row(bad_row);
    }
    if (d(t, t) < 0) {
      d.row(t) = -d.row(t);
      u.row(t) = -u.row(t);
    }
  }
  return out;
}

/// Z^ambient / rowspace(relations) = Z^free_rank + sum Z/torsion_i.
struct CokernelInvariants {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // each >= 2, each dividing the next

  bool torsion_free() const noexcept { return torsion.empty(); }
  bool operator==(const CokernelInvariants&) const = default;
};

/// Coordinates of an element of a cokernel in its Smith basis.
struct CokernelElement {
  std::vector<Integer> torsion;  // residue mod the matching invariant factor
  std::vector<Integer> free;

  bool is_zero() const;
};

/// The finitely generated abelian group Z^ambient / rowspace(relations),
/// together with the coordinate map that sends a vector to its image.
class Cokernel {
 public:
  /// Throws Error(Shape) unless relations has `ambient_rank` columns.
  Cokernel(const IntMatrix& relations, Eigen::Index ambient_rank);

  const CokernelInvariants& invariants() const noexcept { return invariants_; }
  Eigen::Index ambient_rank() const noexcept { return change_of_basis_.rows(); }

  /// Throws Error(Shape) on a length mismatch.
  CokernelElement image(const IntVector& x) const;

 private:
  IntMatrix change_of_basis_;        // Smith `right` factor
  std::vector<Integer> factors_;     // full diagonal, zeros padded to ambient
  CokernelInvariants invariants_;
};

CokernelInvariants cokernel_invariants(const IntMatrix& relations, Eigen::Index ambient_rank);

/// Nonzero with content 1.
template <typename Derived>
bool is_primitive_vector(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Scalar g = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) g = detail::gcd<Scalar>(g, x(i));
  return g == 1;
}

/// content = gcd(vector) and cofactors . vector = content.
struct ContentCertificate {
  IntVector vector;
  IntVector cofactors;
  Integer content;

  bool primitive() const { return content == 1; }
  /// Independent recheck of both identities.
  bool verify() const;
};

ContentCertificate content_certificate(const IntVector& x);

/// Some k >= 2 with x in k*A, or nullopt when x is not a proper power in A.
/// Exact for any finitely generated abelian A given in Smith coordinates:
/// torsion elements (including 0) are always proper powers.
std::optional<Integer> proper_power_divisor(const CokernelElement& x,
                                            const CokernelInvariants& group);

/// Exact determinant by fraction-free elimination.
Integer determinant(const IntMatrix& m);

std::string to_string(const Integer& x);

}  // namespace parafree
