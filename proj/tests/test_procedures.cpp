#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "qbc/gates.hpp"
#include "qbc/procedures.hpp"
#include "qbc/states.hpp"

using namespace qbc;

namespace {

LayoutPtr encode_layout(int n) {
  return RegisterLayout::make({qubit("anc"), perm_reg("label", n),
                               perm_reg("key", n), perm_reg("work", n)});
}

const EncodeRegs kRegs{"anc", "label", "key", "work"};

}  // namespace

TEST_CASE("pair encoding at n=2") {
  auto lay = encode_layout(2);
  const Perm key = Perm::transposition(2, 0, 1);
  PureState in = PureState::basis_state(lay, {0, 0, key.rank(), 0});
  PureState out = encode_pair(in, kRegs);
  // |0>|id>|key> (|id>+|key>)/sqrt(2)
  CHECK(out.amp(BasisTuple{0, 0, 1, 0}).real() ==
        doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(out.amp(BasisTuple{0, 0, 1, 1}).real() ==
        doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(out.norm_sq() == doctest::Approx(1.0));
}

TEST_CASE("pair encoding produces the pair state for every label and key") {
  const int n = 6;
  auto lay = encode_layout(n);
  const KeySet keys = KeySet::enumerate(n);
  for (const Perm& key : keys.elements()) {
    for (std::uint64_t r = 0; r < factorial(n); r += 7) {  // every 7th label
      const Perm sigma = Perm::unrank(n, r);
      PureState in =
          PureState::basis_state(lay, {0, sigma.rank(), key.rank(), 0});
      PureState out = encode_pair(in, kRegs);
      PureState expect(lay);
      const double a = 1 / std::sqrt(2.0);
      expect.add(lay->pack({0, sigma.rank(), key.rank(), sigma.rank()}), a);
      expect.add(
          lay->pack({0, sigma.rank(), key.rank(), compose(sigma, key).rank()}),
          a);
      REQUIRE(max_entry_dev(out, expect) < kTol);
    }
  }
}

TEST_CASE("pair encoding inverts exactly") {
  const int n = 6;
  auto lay = encode_layout(n);
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::uint64_t> dp(0, factorial(n) - 1);
  std::uniform_int_distribution<std::uint64_t> db(0, 1);
  for (int i = 0; i < 100; ++i) {
    PureState in = PureState::basis_state(
        lay, {db(rng), dp(rng), dp(rng), dp(rng)});
    PureState round = encode_pair_inverse(encode_pair(in, kRegs), kRegs);
    CHECK(max_entry_dev(round, in) < kTol);
  }
}

TEST_CASE("purification encoding") {
  const int n = 6;
  auto lay = encode_layout(n);
  const KeySet keys = KeySet::enumerate(n);
  const Perm key = keys[6];
  PureState in = PureState::basis_state(lay, {0, 0, key.rank(), 0});
  PureState out = encode_purification(in, kRegs);
  CHECK(out.is_normalized());

  SUBCASE("work marginal is the commitment mixture") {
    const DensityOp rho = partial_trace(out, "work");
    const DensityOp expect = commitment_state(0, key);
    CHECK((rho.matrix() - expect.matrix()).cwiseAbs().maxCoeff() < kTol);
  }

  SUBCASE("matches the purification constructor") {
    PureState expect(lay);
    for (const auto& [k, v] : pair_purification(0, key, "label", "work").amps()) {
      // label/work are the low two registers of the encode layout with anc=0,
      // key fixed; rebuild the packed index.
      const std::uint64_t label = k / factorial(n);
      const std::uint64_t work = k % factorial(n);
      expect.add(lay->pack({0, label, key.rank(), work}), v);
    }
    CHECK(max_entry_dev(out, expect) < kTol);
  }

  SUBCASE("inverse restores the honest input with certainty") {
    PureState back = encode_purification_inverse(out, kRegs);
    CHECK(max_entry_dev(back, in) < kTol);
    auto dist = measure_analysis(back, {"anc", "label", "work"});
    REQUIRE(dist.outcomes.size() == 1);
    CHECK(dist.outcomes[0].label == BasisTuple{0, 0, 0});
    CHECK(dist.outcomes[0].probability == doctest::Approx(1.0));
  }

  SUBCASE("n=2 closed form") {
    auto lay2 = encode_layout(2);
    PureState out2 = encode_purification(
        PureState::basis_state(lay2, {0, 0, 1, 0}), kRegs);
    // (1/2) sum_sigma |sigma>(|sigma> + |sigma*key>)
    PureState expect(lay2);
    expect.add(lay2->pack({0, 0, 1, 0}), 0.5);
    expect.add(lay2->pack({0, 0, 1, 1}), 0.5);
    expect.add(lay2->pack({0, 1, 1, 1}), 0.5);
    expect.add(lay2->pack({0, 1, 1, 0}), 0.5);
    CHECK(max_entry_dev(out2, expect) < kTol);
  }
}

TEST_CASE("sign-sector flip") {
  const KeySet keys = KeySet::enumerate(6);
  const Perm key = keys[11];
  const Perm sigma = Perm::unrank(6, 300);

  SUBCASE("single register, up to global phase") {
    for (int s = 0; s < 2; ++s) {
      PureState flipped = flip_sign_sector(pair_state(sigma, s, key), {"r"});
      CHECK(equal_up_to_global_phase(flipped, pair_state(sigma, 1 - s, key)));
      PureState twice = flip_sign_sector(flipped, {"r"});
      CHECK(equal_up_to_global_phase(twice, pair_state(sigma, s, key)));
    }
  }

  SUBCASE("purification flips exactly, every key") {
    for (const Perm& k : keys.elements()) {
      PureState flipped =
          flip_sign_sector(pair_purification(0, k), {"r1", "r2"});
      CHECK(max_entry_dev(flipped, pair_purification(1, k)) < kTol);
    }
  }
}

TEST_CASE("partition by key") {
  const int n = 6;
  const KeySet keys = KeySet::enumerate(n);
  const Perm pi = keys[0];
  auto lay = RegisterLayout::make({qubit("anc"), perm_reg("key", n),
                                   perm_reg("label", n), perm_reg("chi", n)});

  auto prepare = [&](int s, const Perm& measured_key) {
    // Purified commitment of sector s under pi, with measured_key loaded.
    PureState st(lay);
    for (const auto& [k, v] : pair_purification(s, pi, "label", "chi").amps()) {
      const std::uint64_t label = k / factorial(n);
      const std::uint64_t chi = k % factorial(n);
      st.add(lay->pack({0, measured_key.rank(), label, chi}), v);
    }
    return st;
  };

  SUBCASE("matching key reads the sector deterministically") {
    for (int s = 0; s < 2; ++s) {
      auto dist = partition_by_key(prepare(s, pi), "anc", "key", "chi");
      REQUIRE(dist.outcomes.size() == 1);
      CHECK(dist.outcomes[0].label == BasisTuple{static_cast<std::uint64_t>(s)});
      CHECK(dist.outcomes[0].probability == doctest::Approx(1.0));
    }
  }

  SUBCASE("pure pair state with matching key") {
    auto lay1 = RegisterLayout::make(
        {qubit("anc"), perm_reg("key", n), perm_reg("chi", n)});
    PureState st(lay1);
    for (const auto& [k, v] : pair_state(Perm::unrank(n, 50), 1, pi, "chi").amps()) {
      st.add(lay1->pack({0, pi.rank(), k}), v);
    }
    auto dist = partition_by_key(st, "anc", "key", "chi");
    REQUIRE(dist.outcomes.size() == 1);
    CHECK(dist.outcomes[0].label == BasisTuple{1});
    CHECK(dist.outcomes[0].probability == doctest::Approx(1.0));
  }

  SUBCASE("mismatched key splits exactly in half") {
    for (const Perm& kappa : {keys[1], keys[7], keys[14]}) {
      for (int s = 0; s < 2; ++s) {
        auto dist = partition_by_key(prepare(s, kappa), "anc", "key", "chi");
        REQUIRE(dist.outcomes.size() == 2);
        CHECK(dist.outcomes[0].probability == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(dist.outcomes[1].probability == doctest::Approx(0.5).epsilon(1e-12));
      }
    }
  }

  SUBCASE("matched key leaves the target marginal unchanged when the outcome "
          "is discarded") {
    PureState st = prepare(0, pi);
    const DensityOp before = partial_trace(st, "chi");
    PureState evolved = partition_unitary(st, "anc", "key", "chi");
    Eigen::MatrixXcd mixed =
        Eigen::MatrixXcd::Zero(before.dim(), before.dim());
    for (const Outcome& o : measure_analysis(evolved, {"anc"}).outcomes) {
      mixed += o.probability * partial_trace(o.post, "chi").matrix();
    }
    CHECK((mixed - before.matrix()).cwiseAbs().maxCoeff() < kTol);
  }

  SUBCASE("key register outside the key set is rejected") {
    PureState st(lay);
    st.add(lay->pack({0, Perm::identity(n).rank(), 0, 0}), 1.0);
    CHECK_THROWS_AS(partition_by_key(st, "anc", "key", "chi"),
                    std::invalid_argument);
  }

  SUBCASE("mismatched-key branch norms follow the sector weights") {
    // With weights (0.36, 0.64) across the two sectors, each ancilla outcome
    // still carries exactly half of each sector's weight.
    PureState st(lay);
    const Perm kappa = keys[5];
    for (const auto& [k, v] : pair_purification(0, pi, "label", "chi").amps()) {
      st.add(lay->pack({0, kappa.rank(), k / factorial(n), k % factorial(n)}),
             0.6 * v);
    }
    for (const auto& [k, v] : pair_purification(1, pi, "label", "chi").amps()) {
      st.add(lay->pack({0, kappa.rank(), k / factorial(n), k % factorial(n)}),
             0.8 * v);
    }
    CHECK(st.is_normalized());
    auto dist = partition_by_key(st, "anc", "key", "chi");
    REQUIRE(dist.outcomes.size() == 2);
    CHECK(dist.outcomes[0].probability == doctest::Approx(0.5));
    CHECK(dist.outcomes[1].probability == doctest::Approx(0.5));
  }
}

TEST_CASE("partition circuit equals the swap-conjugated composite") {
  const int n = 6;
  const KeySet keys = KeySet::enumerate(n);
  auto lay = RegisterLayout::make(
      {qubit("anc"), perm_reg("key", n), perm_reg("chi", n)});
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::uint64_t> dp(0, factorial(n) - 1);

  for (int i = 0; i < 20; ++i) {
    PureState psi(lay);
    for (int j = 0; j < 10; ++j) {
      psi.add(lay->pack({rng() & 1, keys[j % keys.size()].rank(), dp(rng)}),
              cplx(std::cos(0.1 * j + i), std::sin(0.2 * j)));
    }
    psi = psi.normalized();

    // Direct: key-controlled right multiplication on the third register.
    PureState direct =
        apply_gate(psi, GateSpec::ctrl_right_mult(), {"anc", "key", "chi"});
    // Composite: swap registers 2 and 3, multiply into the second slot
    // (reading the key from the third), swap back.
    PureState composite = apply_gate(psi, GateSpec::ctrl_swap(), {"key", "chi"});
    composite = apply_gate(composite, GateSpec::ctrl_right_mult(),
                           {"anc", "chi", "key"});
    composite = apply_gate(composite, GateSpec::ctrl_swap(), {"key", "chi"});
    CHECK(max_entry_dev(direct, composite) < kTol);
  }
}

TEST_CASE("matched-key partition fixes arbitrary sector states") {
  const int n = 6;
  const KeySet keys = KeySet::enumerate(n);
  const Perm pi = keys[9];
  auto lay = RegisterLayout::make(
      {qubit("anc"), perm_reg("key", n), perm_reg("chi", n)});
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::uint64_t> dp(0, factorial(n) - 1);
  std::normal_distribution<double> da;

  for (int s = 0; s < 2; ++s) {
    // Random combination of sector-s pair states.
    PureState chi(RegisterLayout::make({perm_reg("chi", n)}));
    for (int j = 0; j < 16; ++j) {
      const Perm sigma = Perm::unrank(n, dp(rng));
      const cplx coeff(da(rng), da(rng));
      for (const auto& [k, v] : pair_state(sigma, s, pi, "chi").amps()) {
        chi.add(k, v * coeff);
      }
    }
    chi = chi.normalized();
    PureState psi(lay);
    for (const auto& [k, v] : chi.amps()) {
      psi.add(lay->pack({0, pi.rank(), k}), v);
    }
    PureState evolved = partition_unitary(psi, "anc", "key", "chi");
    // Output is |s>|pi> (x) the same sector state.
    PureState expect(lay);
    for (const auto& [k, v] : chi.amps()) {
      expect.add(lay->pack({static_cast<std::uint64_t>(s), pi.rank(), k}), v);
    }
    CHECK(max_entry_dev(evolved, expect) < kTol);
  }
}

TEST_CASE("mismatched-key branch norms are half the sector weights") {
  const int n = 6;
  const KeySet keys = KeySet::enumerate(n);
  const Perm pi = keys[0], kappa = keys[4];
  auto lay = RegisterLayout::make({qubit("anc"), perm_reg("key", n),
                                   perm_reg("label", n), perm_reg("chi", n)});
  // Sub-normalized sector-0 purification with weight 0.36.
  PureState psi(lay);
  for (const auto& [k, v] : pair_purification(0, pi, "label", "chi").amps()) {
    psi.add(lay->pack({0, kappa.rank(), k / factorial(n), k % factorial(n)}),
            0.6 * v);
  }
  PureState evolved = partition_unitary(psi, "anc", "key", "chi");
  const double branch0 = project_values(evolved, {{"anc", 0}}).norm_sq();
  const double branch1 = project_values(evolved, {{"anc", 1}}).norm_sq();
  CHECK(branch0 == doctest::Approx(0.18));  // half of 0.36
  CHECK(branch1 == doctest::Approx(0.18));
}
