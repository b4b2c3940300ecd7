#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace qbc {

/// Permutation of {0,...,n-1} in one-line notation.
/// The JSON wire form is the 1-indexed one-line array, e.g. [2,1,4,3,6,5].
class Perm {
 public:
  Perm() = default;

  /// Throws std::invalid_argument unless `mapping` is a bijection on {0..n-1}.
  explicit Perm(std::vector<int> mapping);

  static Perm identity(int n);

  /// The transposition (i j) on {0..n-1}, i != j.
  static Perm transposition(int n, int i, int j);

  int size() const { return static_cast<int>(map_.size()); }
  int operator()(int i) const { return map_[i]; }
  const std::vector<int>& mapping() const { return map_; }

  Perm inverse() const;
  bool is_identity() const;

  /// 1 for even permutations, 0 for odd ones; the sign gate applies the
  /// phase (-1)^parity().
  int parity() const;

  /// Lehmer-code rank; identity has rank 0, ranks are dense in [0, n!-1].
  std::uint64_t rank() const;
  static Perm unrank(int n, std::uint64_t k);

  bool operator==(const Perm&) const = default;
  auto operator<=>(const Perm&) const = default;

 private:
  std::vector<int> map_;
};

/// (a*b)(i) = a(b(i)). With this convention compose(compose(s,p),p) == s
/// whenever p is an involution. Sizes must match.
Perm compose(const Perm& a, const Perm& b);

std::uint64_t factorial(int n);

/// Security parameter: n even with n/2 odd (n = 2, 6, 10, ...).
struct SecurityParam {
  int n;
  explicit SecurityParam(int n_);
};

bool valid_security_param(int n);

/// Returns true iff p*p = id and p has no fixed point.
bool is_fixed_point_free_involution(const Perm& p);

/// The secret-key set: all fixed-point-free involutions of {0..n-1},
/// ordered by rank so "the k-th key" is stable across runs.
class KeySet {
 public:
  static KeySet enumerate(int n);

  const std::vector<Perm>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  const Perm& operator[](std::size_t i) const;
  bool contains(const Perm& p) const;

 private:
  std::vector<Perm> elems_;
};

std::ostream& operator<<(std::ostream& os, const Perm& p);

}  // namespace qbc
