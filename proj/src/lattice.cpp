#include "parafree/lattice.hpp"

namespace parafree {

bool CokernelElement::is_zero() const {
  for (const auto& t : torsion)
    if (t != 0) return false;
  for (const auto& f : free)
    if (f != 0) return false;
  return true;
}

Cokernel::Cokernel(const IntMatrix& relations, Eigen::Index ambient_rank) {
  if (relations.cols() != ambient_rank)
    throw Error(ErrorCode::Shape, "relation matrix has " + std::to_string(relations.cols()) +
                                      " columns, expected " + std::to_string(ambient_rank));
  auto snf = smith_normal_form(relations);
  change_of_basis_ = std::move(snf.right);
  const Eigen::Index r = snf.rank();
  factors_.assign(static_cast<std::size_t>(ambient_rank), Integer(0));
  for (Eigen::Index i = 0; i < r; ++i) {
    factors_[static_cast<std::size_t>(i)] = snf.diagonal(i, i);
    if (snf.diagonal(i, i) > 1) invariants_.torsion.push_back(snf.diagonal(i, i));
  }
  invariants_.free_rank = static_cast<std::size_t>(ambient_rank - r);
}

CokernelElement Cokernel::image(const IntVector& x) const {
  if (x.size() != ambient_rank())
    throw Error(ErrorCode::Shape, "vector length " + std::to_string(x.size()) +
                                      " does not match ambient rank " +
                                      std::to_string(ambient_rank()));
  // rowspace(M) * V = rowspace(D), so x maps to x^T V in Smith coordinates.
  IntVector y = change_of_basis_.transpose() * x;
  CokernelElement out;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const Integer& d = factors_[static_cast<std::size_t>(i)];
    if (d == 0) {
      out.free.push_back(y(i));
    } else if (d > 1) {
      Integer r = y(i) % d;
      if (r < 0) r += d;
      out.torsion.push_back(r);
    }
  }
  return out;
}

CokernelInvariants cokernel_invariants(const IntMatrix& relations, Eigen::Index ambient_rank) {
  return Cokernel(relations, ambient_rank).invariants();
}

bool ContentCertificate::verify() const {
  if (vector.size() != cofactors.size()) return false;
  Integer g = 0;
  Integer dot = 0;
  for (Eigen::Index i = 0; i < vector.size(); ++i) {
    g = detail::gcd<Integer>(g, vector(i));
    dot += vector(i) * cofactors(i);
  }
  return g == content && dot == content;
}

ContentCertificate content_certificate(const IntVector& x) {
  // Running extended gcd: invariant g = cof . x[0..i].
  ContentCertificate out{x, IntVector::Constant(x.size(), Integer(0)), Integer(0)};
  Integer g = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) == 0) continue;
    if (g == 0) {
      g = abs(x(i));
      out.cofactors(i) = x(i) > 0 ? 1 : -1;
      continue;
    }
    Integer s, t, h;
    mpz_gcdext(h.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.get_mpz_t(), x(i).get_mpz_t());
    // h = s*g + t*x_i
    for (Eigen::Index j = 0; j < i; ++j) out.cofactors(j) *= s;
    out.cofactors(i) = t;
    g = h;
  }
  out.content = g;
  return out;
}

namespace {

std::vector<Integer> prime_factors(Integer n) {
  std::vector<Integer> out;
  n = abs(n);
  for (Integer p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::optional<Integer> proper_power_divisor(const CokernelElement& x,
                                            const CokernelInvariants& group) {
  Integer content = 0;
  for (const auto& f : x.free) content = detail::gcd<Integer>(content, f);

  if (content == 0) {
    // Torsion element: multiplication by any k coprime to the torsion
    // exponent is a bijection of the finite part.
    for (Integer k = 2;; ++k) {
      bool coprime = true;
      for (const auto& d : group.torsion)
        if (detail::gcd<Integer>(k, d) != 1) coprime = false;
      if (coprime) return k;
    }
  }
  for (const Integer& p : prime_factors(content)) {
    // x in pA iff every torsion coordinate lies in p(Z/d).
    bool divisible = true;
    for (std::size_t j = 0; j < group.torsion.size(); ++j) {
      const Integer& d = group.torsion[j];
      if (d % p == 0 && x.torsion[j] % p != 0) divisible = false;
    }
    if (divisible) return p;
  }
  return std::nullopt;
}

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::Shape, "determinant of a non-square matrix");
  const Eigen::Index n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index swap = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      a.row(k).swap(a.row(swap));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::string to_string(const Integer& x) { return x.get_str(); }

}  // namespace parafree
