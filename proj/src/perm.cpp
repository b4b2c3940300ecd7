#include "qbc/perm.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace qbc {

Perm::Perm(std::vector<int> mapping) : map_(std::move(mapping)) {
  const int n = static_cast<int>(map_.size());
  std::vector<char> seen(n, 0);
  for (int v : map_) {
    if (v < 0 || v >= n || seen[v]) {
      throw std::invalid_argument("Perm: mapping is not a bijection on {0..n-1}");
    }
    seen[v] = 1;
  }
}

Perm Perm::identity(int n) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) m[i] = i;
  return Perm(std::move(m));
}

Perm Perm::transposition(int n, int i, int j) {
  if (i == j) throw std::invalid_argument("Perm::transposition: i == j");
  Perm p = identity(n);
  std::swap(p.map_[i], p.map_[j]);
  return p;
}

Perm Perm::inverse() const {
  std::vector<int> m(map_.size());
  for (int i = 0; i < size(); ++i) m[map_[i]] = i;
  return Perm(std::move(m));
}

bool Perm::is_identity() const {
  for (int i = 0; i < size(); ++i) {
    if (map_[i] != i) return false;
  }
  return true;
}

int Perm::parity() const {
  std::vector<char> seen(map_.size(), 0);
  bool even = true;
  for (int i = 0; i < size(); ++i) {
    if (seen[i]) continue;
    int j = i, len = 0;
    while (!seen[j]) {
      seen[j] = 1;
      j = map_[j];
      ++len;
    }
    if (len % 2 == 0) even = !even;
  }
  return even ? 1 : 0;
}

std::uint64_t Perm::rank() const {
  const int n = size();
  std::uint64_t r = 0;
  std::vector<int> items(n);
  for (int i = 0; i < n; ++i) items[i] = i;
  for (int i = 0; i < n; ++i) {
    auto it = std::find(items.begin(), items.end(), map_[i]);
    r = r * static_cast<std::uint64_t>(n - i) +
        static_cast<std::uint64_t>(it - items.begin());
    items.erase(it);
  }
  return r;
}

Perm Perm::unrank(int n, std::uint64_t k) {
  if (k >= factorial(n)) {
    throw std::invalid_argument("Perm::unrank: rank out of range");
  }
  // Peel mixed-radix digits (most significant first).
  std::vector<std::uint64_t> digits(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    const std::uint64_t base = static_cast<std::uint64_t>(n - i);
    digits[i] = k % base;
    k /= base;
  }
  std::vector<int> items(n);
  for (int i = 0; i < n; ++i) items[i] = i;
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) {
    m[i] = items[digits[i]];
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(digits[i]));
  }
  return Perm(std::move(m));
}

Perm compose(const Perm& a, const Perm& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("compose: size mismatch");
  }
  std::vector<int> m(a.size());
  for (int i = 0; i < a.size(); ++i) m[i] = a(b(i));
  return Perm(std::move(m));
}

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("factorial: out of range");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

SecurityParam::SecurityParam(int n_) : n(n_) {
  if (!valid_security_param(n_)) {
    throw std::invalid_argument(
        "SecurityParam: n must be even with n/2 odd (2, 6, 10, ...)");
  }
}

bool valid_security_param(int n) {
  return n >= 2 && n % 2 == 0 && (n / 2) % 2 == 1;
}

bool is_fixed_point_free_involution(const Perm& p) {
  for (int i = 0; i < p.size(); ++i) {
    if (p(i) == i || p(p(i)) != i) return false;
  }
  return p.size() > 0;
}

namespace {

void pair_up(std::vector<int>& partner, std::vector<char>& used, int n,
             std::vector<Perm>& out) {
  int first = -1;
  for (int i = 0; i < n; ++i) {
    if (!used[i]) {
      first = i;
      break;
    }
  }
  if (first < 0) {
    out.emplace_back(std::vector<int>(partner));
    return;
  }
  used[first] = 1;
  for (int j = first + 1; j < n; ++j) {
    if (used[j]) continue;
    used[j] = 1;
    partner[first] = j;
    partner[j] = first;
    pair_up(partner, used, n, out);
    used[j] = 0;
  }
  used[first] = 0;
}

}  // namespace

KeySet KeySet::enumerate(int n) {
  SecurityParam check(n);
  (void)check;
  KeySet ks;
  std::vector<int> partner(n, -1);
  std::vector<char> used(n, 0);
  pair_up(partner, used, n, ks.elems_);
  std::sort(ks.elems_.begin(), ks.elems_.end(),
            [](const Perm& a, const Perm& b) { return a.rank() < b.rank(); });
  return ks;
}

const Perm& KeySet::operator[](std::size_t i) const {
  if (i >= elems_.size()) throw std::out_of_range("KeySet: index out of range");
  return elems_[i];
}

bool KeySet::contains(const Perm& p) const {
  return std::binary_search(
      elems_.begin(), elems_.end(), p,
      [](const Perm& a, const Perm& b) { return a.rank() < b.rank(); });
}

std::ostream& operator<<(std::ostream& os, const Perm& p) {
  os << '[';
  for (int i = 0; i < p.size(); ++i) {
    if (i) os << ',';
    os << p(i) + 1;
  }
  return os << ']';
}

}  // namespace qbc
