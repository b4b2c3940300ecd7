#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "qbc/gates.hpp"
#include "qbc/lemmas.hpp"
#include "qbc/states.hpp"

using namespace qbc;

TEST_CASE("pair_state basics") {
  const Perm key2 = Perm::transposition(2, 0, 1);
  PureState p = pair_state(Perm::identity(2), 0, key2);
  CHECK(p.amp(BasisTuple{0}).real() == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(p.amp(BasisTuple{1}).real() == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(p.is_normalized());

  CHECK_THROWS_AS(pair_state(Perm::identity(6), 0, Perm::identity(6)),
                  std::invalid_argument);
  // (12) alone has fixed points at n=6 and is not a valid key.
  CHECK_THROWS_AS(pair_state(Perm::identity(6), 0, Perm::transposition(6, 0, 1)),
                  std::invalid_argument);
}

TEST_CASE("pair_state sign relation and sector orthogonality") {
  const KeySet keys = KeySet::enumerate(6);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::uint64_t> d(0, factorial(6) - 1);
  for (int i = 0; i < 50; ++i) {
    const Perm sigma = Perm::unrank(6, d(rng));
    const Perm& key = keys[i % keys.size()];
    for (int s = 0; s < 2; ++s) {
      PureState shifted = pair_state(compose(sigma, key), s, key);
      PureState base = pair_state(sigma, s, key);
      if (s == 1) {
        for (auto& [k, v] : base.amps()) v = -v;
      }
      CHECK(max_entry_dev(shifted, base) < kTol);
    }
    CHECK(std::abs(inner_product(pair_state(sigma, 0, key),
                                 pair_state(sigma, 1, key))) < kTol);
  }
}

TEST_CASE("pair overlaps match the case table, including the cross-key "
          "coincidence") {
  const KeySet keys = KeySet::enumerate(6);
  const Perm pi = keys[0], kappa = keys[1];
  const Perm tau = Perm::unrank(6, 217);

  // sigma = tau with distinct keys: 1/2.
  CHECK(inner_product(pair_state(tau, 1, pi), pair_state(tau, 0, kappa)).real() ==
        doctest::Approx(0.5));
  // The coincidence sigma = tau*kappa*pi also gives 1/2 in the (0,0) case.
  const Perm sigma = compose(compose(tau, kappa), pi);
  CHECK(inner_product(pair_state(sigma, 0, pi), pair_state(tau, 0, kappa))
            .real() == doctest::Approx(0.5));
  CHECK(pair_overlap_case(sigma, 0, pi, tau, 0, kappa) ==
        doctest::Approx(0.5));

  const LemmaCheck table = check_pair_overlap_table(6, 5000, 99);
  CHECK(table.pass);
  CHECK(table.max_dev < kTol);
}

TEST_CASE("purification structure") {
  const KeySet keys = KeySet::enumerate(6);
  const Perm pi = keys[2], kappa = keys[9];

  PureState phi1 = pair_purification(1, pi);
  PureState phi0k = pair_purification(0, kappa);
  CHECK(inner_product(phi1, phi0k).real() == doctest::Approx(0.5));
  CHECK(phi1.is_normalized());

  // Symmetric under exchanging the two registers.
  PureState swapped = apply_gate(phi1, GateSpec::ctrl_swap(), {"r1", "r2"});
  CHECK(max_entry_dev(swapped, phi1) < kTol);
}

TEST_CASE("commitment mixtures") {
  const KeySet keys = KeySet::enumerate(6);
  const Perm key = keys[4];
  const DensityOp r0 = commitment_state(0, key);
  const DensityOp r1 = commitment_state(1, key);
  CHECK(r0.trace_real() == doctest::Approx(1.0));
  CHECK(r0.hermiticity_error() < kTol);
  CHECK(r0.min_eigenvalue() > -kTol);
  CHECK((r0.matrix() * r1.matrix()).cwiseAbs().maxCoeff() < kTol);
  const double two_over = 2.0 / static_cast<double>(factorial(6));
  CHECK((r0.matrix() + r1.matrix() -
         two_over * Eigen::MatrixXcd::Identity(r0.dim(), r0.dim()))
            .cwiseAbs()
            .maxCoeff() < kTol);
}

TEST_CASE("canonical side") {
  const KeySet keys = KeySet::enumerate(6);
  for (const Perm& key : keys.elements()) {
    CHECK(canonical_side(Perm::identity(6), key) == 1);
  }
  const Perm key = keys[7];
  std::size_t on_side = 0;
  for (std::uint64_t r = 0; r < factorial(6); ++r) {
    const Perm sigma = Perm::unrank(6, r);
    CHECK(canonical_side(sigma, key) != canonical_side(compose(sigma, key), key));
    if (canonical_side(sigma, key) == 1) ++on_side;
  }
  CHECK(on_side == 360);
}

TEST_CASE("pair-basis decomposition") {
  const KeySet keys = KeySet::enumerate(6);
  const Perm key = keys[3];
  const Perm sigma = Perm::unrank(6, 123);

  SUBCASE("pair states have a single coefficient") {
    for (int s = 0; s < 2; ++s) {
      BasisDecomposition d = decompose(pair_state(sigma, s, key), key);
      REQUIRE(d.coeff.size() == 1);
      const auto& [label, c] = *d.coeff.begin();
      CHECK(label.second == s);
      CHECK(std::abs(std::abs(c) - 1.0) < kTol);
      CHECK(max_entry_dev(recompose(d), pair_state(sigma, s, key)) < kTol);
    }
  }

  SUBCASE("basis states split evenly across the two sectors") {
    PureState e = PureState::basis_state(
        RegisterLayout::make({perm_reg("r", 6)}), {sigma.rank()});
    BasisDecomposition d = decompose(e, key);
    REQUIRE(d.coeff.size() == 2);
    for (const auto& [label, c] : d.coeff) {
      CHECK(std::abs(std::abs(c) - 1 / std::sqrt(2.0)) < kTol);
    }
    CHECK(d.norm_sq() == doctest::Approx(1.0));
    CHECK(max_entry_dev(recompose(d), e) < kTol);
  }

  SUBCASE("Parseval on random states") {
    std::mt19937_64 rng(4);
    auto lay = RegisterLayout::make({perm_reg("r", 6)});
    std::uniform_int_distribution<std::uint64_t> dk(0, factorial(6) - 1);
    std::normal_distribution<double> da;
    PureState psi(lay);
    for (int i = 0; i < 64; ++i) psi.add(dk(rng), cplx(da(rng), da(rng)));
    psi = psi.normalized();
    CHECK(decompose(psi, key).norm_sq() == doctest::Approx(1.0));
  }
}

TEST_CASE("key-average rewriting fails by the predicted margin at n=6") {
  // The identity would need pi*K ⊆ K ∪ {id}; at n=6 no product of two
  // distinct keys is itself a key, so each half of the average leaks 14
  // stray basis vectors and the deviation is exactly 1/sqrt(14).
  const KeySet keys = KeySet::enumerate(6);
  std::size_t closed = 0;
  for (const Perm& a : keys.elements()) {
    if (keys.contains(compose(keys[0], a))) ++closed;
  }
  CHECK(closed == 0);

  const LemmaCheck c = check_key_average_rewriting(6, 20, 5);
  CHECK_FALSE(c.pass);
  CHECK(c.max_dev == doctest::Approx(1.0 / std::sqrt(14.0)).epsilon(1e-9));

  const LemmaCheck c2 = check_key_average_rewriting(2, 10, 5);
  CHECK_FALSE(c2.applicable);
}

TEST_CASE("lemma suite shapes") {
  const auto checks = run_lemma_suite(2, 100, 1);
  for (const auto& c : checks) {
    if (c.applicable) CHECK(c.pass);
  }
}
