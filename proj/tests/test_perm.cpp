#include <doctest.h>

#include <random>
#include <stdexcept>

#include "qbc/perm.hpp"

using namespace qbc;

namespace {
Perm p12(int n) { return Perm::transposition(n, 0, 1); }
}

TEST_CASE("compose basics") {
  const Perm id2 = Perm::identity(2);
  CHECK(compose(p12(2), p12(2)) == id2);

  const Perm sigma = Perm::unrank(6, 123);
  CHECK(compose(Perm::identity(6), sigma) == sigma);
  CHECK(compose(sigma, Perm::identity(6)) == sigma);

  CHECK_THROWS_AS(compose(Perm::identity(2), Perm::identity(6)),
                  std::invalid_argument);
}

TEST_CASE("involution keys cancel on the right, exhaustively at n=6") {
  const KeySet keys = KeySet::enumerate(6);
  for (std::uint64_t r = 0; r < factorial(6); ++r) {
    const Perm sigma = Perm::unrank(6, r);
    for (const Perm& key : keys.elements()) {
      CHECK(compose(compose(sigma, key), key) == sigma);
      CHECK_FALSE(compose(sigma, key) == sigma);
    }
  }
}

TEST_CASE("inverse") {
  CHECK(Perm::identity(4).inverse() == Perm::identity(4));
  const Perm three_cycle({1, 2, 0});  // 1->2->3->1 in 1-indexed terms
  CHECK(three_cycle.inverse() == Perm({2, 0, 1}));
  for (std::uint64_t r = 0; r < factorial(6); ++r) {
    const Perm sigma = Perm::unrank(6, r);
    CHECK(compose(sigma, sigma.inverse()).is_identity());
  }
}

TEST_CASE("parity convention: 1 = even, 0 = odd") {
  CHECK(Perm::identity(5).parity() == 1);
  CHECK(p12(2).parity() == 0);
  CHECK(Perm({1, 2, 0}).parity() == 1);  // 3-cycle is even
  const KeySet keys = KeySet::enumerate(6);
  for (const Perm& key : keys.elements()) {
    CHECK(key.parity() == 0);  // three disjoint transpositions
  }
}

TEST_CASE("rank/unrank is the Lehmer bijection") {
  CHECK(Perm::identity(7).rank() == 0);
  CHECK(Perm::unrank(2, 1) == p12(2));
  for (std::uint64_t k = 0; k < factorial(6); ++k) {
    CHECK(Perm::unrank(6, k).rank() == k);
  }
  CHECK_THROWS_AS(Perm::unrank(3, 6), std::invalid_argument);
  CHECK_THROWS_AS(Perm(std::vector<int>{0, 0, 1}), std::invalid_argument);
}

TEST_CASE("group laws on sampled triples") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> d(0, factorial(6) - 1);
  for (int i = 0; i < 200; ++i) {
    const Perm a = Perm::unrank(6, d(rng));
    const Perm b = Perm::unrank(6, d(rng));
    const Perm c = Perm::unrank(6, d(rng));
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
  }
}

TEST_CASE("security parameter") {
  CHECK(valid_security_param(2));
  CHECK(valid_security_param(6));
  CHECK(valid_security_param(10));
  CHECK_FALSE(valid_security_param(4));
  CHECK_FALSE(valid_security_param(8));
  CHECK_FALSE(valid_security_param(3));
  CHECK_THROWS_AS(SecurityParam(4), std::invalid_argument);
}

TEST_CASE("key set enumeration") {
  const KeySet k2 = KeySet::enumerate(2);
  REQUIRE(k2.size() == 1);
  CHECK(k2[0] == p12(2));

  const KeySet k6 = KeySet::enumerate(6);
  CHECK(k6.size() == 15);  // 5!! = 5*3*1
  std::uint64_t prev = 0;
  for (std::size_t i = 0; i < k6.size(); ++i) {
    CHECK(is_fixed_point_free_involution(k6[i]));
    CHECK(k6[i].parity() == 0);
    if (i > 0) CHECK(k6[i].rank() > prev);
    prev = k6[i].rank();
  }
  CHECK(k6.contains(k6[7]));
  CHECK_FALSE(k6.contains(Perm::identity(6)));
  CHECK_THROWS_AS(KeySet::enumerate(4), std::invalid_argument);

  // Brute-force cross-check of the count.
  std::size_t count = 0;
  for (std::uint64_t r = 0; r < factorial(6); ++r) {
    if (is_fixed_point_free_involution(Perm::unrank(6, r))) ++count;
  }
  CHECK(count == 15);
}
