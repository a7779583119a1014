#include "parafree/ut_group.hpp"

#include "parafree/error.hpp"

namespace parafree {

namespace {

int upper_count(int n) { return n * (n - 1) / 2; }

void check_target(int n, int p) {
  if (n < kMinUtDimension || n > kMaxUtDimension)
    throw Error(ErrorCode::InvalidBounds, "UT dimension must lie in [3, 5], got " + std::to_string(n));
  if (!is_prime(p)) throw Error(ErrorCode::InvalidBounds, std::to_string(p) + " is not prime");
}

}  // namespace

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t ut_group_order(int n, int p) {
  std::uint64_t order = 1;
  for (int i = 0; i < upper_count(n); ++i) order *= static_cast<std::uint64_t>(p);
  return order;
}

UtElement UtElement::identity(int n, int p) {
  check_target(n, p);
  return {n, p, Storage::Identity(n, n)};
}

UtElement UtElement::from_index(int n, int p, std::uint64_t index) {
  UtElement out = identity(n, p);
  const auto base = static_cast<std::uint64_t>(p);
  // Last entry is least significant.
  for (int i = n - 2; i >= 0; --i)
    for (int j = n - 1; j > i; --j) {
      out.m_(i, j) = static_cast<std::int32_t>(index % base);
      index /= base;
    }
  return out;
}

UtElement UtElement::from_entries(int n, int p, std::span<const std::int32_t> upper) {
  UtElement out = identity(n, p);
  if (static_cast<int>(upper.size()) != upper_count(n))
    throw Error(ErrorCode::Shape, "UT(" + std::to_string(n) + ") needs " +
                                      std::to_string(upper_count(n)) + " entries");
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::int32_t x = upper[k++];
      if (x < 0 || x >= p) throw Error(ErrorCode::Shape, "entry outside [0, p)");
      out.m_(i, j) = x;
    }
  return out;
}

std::vector<std::int32_t> UtElement::upper_entries() const {
  std::vector<std::int32_t> out;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) out.push_back(m_(i, j));
  return out;
}

std::uint64_t UtElement::index() const {
  std::uint64_t index = 0;
  for (std::int32_t x : upper_entries())
    index = index * static_cast<std::uint64_t>(p_) + static_cast<std::uint64_t>(x);
  return index;
}

bool UtElement::is_identity() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (m_(i, j) != 0) return false;
  return true;
}

UtElement UtElement::inverse() const {
  // (I + N)^-1 = I - N + N^2 - ... with N nilpotent of index <= n.
  const Storage id = Storage::Identity(n_, n_);
  const Storage nil = m_ - id;
  Storage power = id;
  Storage sum = id;
  for (int k = 1; k < n_; ++k) {
    power = (power * nil).unaryExpr([p = p_](std::int32_t x) { return x % p; });
    if (k % 2 == 1)
      sum -= power;
    else
      sum += power;
  }
  const int p = p_;
  return {n_, p_, sum.unaryExpr([p](std::int32_t x) { return ((x % p) + p) % p; })};
}

UtElement operator*(const UtElement& a, const UtElement& b) {
  if (a.n_ != b.n_ || a.p_ != b.p_)
    throw Error(ErrorCode::IncompatibleTargets, "UT(" + std::to_string(a.n_) + ", " +
                                                    std::to_string(a.p_) + ") vs UT(" +
                                                    std::to_string(b.n_) + ", " +
                                                    std::to_string(b.p_) + ")");
  const int p = a.p_;
  return {a.n_, a.p_, (a.m_ * b.m_).unaryExpr([p](std::int32_t x) { return x % p; })};
}

bool operator==(const UtElement& a, const UtElement& b) {
  return a.n_ == b.n_ && a.p_ == b.p_ && a.m_ == b.m_;
}

UtElement commutator(const UtElement& a, const UtElement& b) {
  return a * b * a.inverse() * b.inverse();
}

UtElement eval_word(std::span<const UtElement> images, const Word& w) {
  if (images.empty()) throw Error(ErrorCode::UnknownGenerator, "no generator images supplied");
  const int n = images.front().dimension();
  const int p = images.front().modulus();
  for (const auto& img : images)
    if (img.dimension() != n || img.modulus() != p)
      throw Error(ErrorCode::IncompatibleTargets, "generator images live in different UT groups");
  UtElement acc = UtElement::identity(n, p);
  for (Letter l : w.letters()) {
    const std::size_t g = generator_of(l);
    if (g >= images.size())
      throw Error(ErrorCode::UnknownGenerator, "no image for generator " + std::to_string(g + 1));
    acc = acc * (l > 0 ? images[g] : images[g].inverse());
  }
  return acc;
}

}  // namespace parafree
