#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qbc/gates.hpp"
#include "qbc/hilbert.hpp"
#include "qbc/states.hpp"

using namespace qbc;

namespace {

LayoutPtr small_layout() {
  return RegisterLayout::make({qubit("q"), perm_reg("r", 2)});
}

}  // namespace

TEST_CASE("layout packing round-trips") {
  auto lay = RegisterLayout::make(
      {qubit("a"), perm_reg("p", 6), qubit("b"), perm_reg("q", 6)});
  const BasisTuple t{1, 515, 0, 719};
  const std::uint64_t key = lay->pack(t);
  CHECK(lay->unpack(key) == t);
  CHECK(lay->value_at(key, 1) == 515);
  CHECK(lay->value_at(lay->with_value(key, 3, 0), 3) == 0);
  CHECK_THROWS_AS(lay->index_of("missing"), std::invalid_argument);
  CHECK_THROWS_AS(RegisterLayout::make({qubit("a"), qubit("a")}),
                  std::invalid_argument);
}

TEST_CASE("inner product") {
  auto lay = small_layout();
  PureState psi(lay);
  psi.add(lay->pack({0, 0}), 0.6);
  psi.add(lay->pack({1, 1}), cplx(0.0, 0.8));
  CHECK(inner_product(psi, psi).real() == doctest::Approx(1.0));
  CHECK(psi.is_normalized());

  PureState e0 = PureState::basis_state(lay, {0, 0});
  PureState e1 = PureState::basis_state(lay, {0, 1});
  CHECK(std::abs(inner_product(e0, e1)) == 0.0);

  // Conjugate-linear in the first argument.
  CHECK(inner_product(psi, e0) == std::conj(inner_product(e0, psi)));

  PureState other(RegisterLayout::make({qubit("x")}));
  CHECK_THROWS_AS(inner_product(psi, other), std::invalid_argument);
}

TEST_CASE("tensor") {
  PureState a(RegisterLayout::make({qubit("a")}));
  a.add(0, 1.0 / std::sqrt(2.0));
  a.add(1, 1.0 / std::sqrt(2.0));
  PureState b = PureState::basis_state(RegisterLayout::make({perm_reg("p", 2)}),
                                       {0});
  PureState ab = tensor(a, b);
  CHECK(ab.norm_sq() == doctest::Approx(1.0));
  CHECK(ab.layout().count() == 2);
  CHECK(std::abs(ab.amp(BasisTuple{0, 0})) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK_THROWS_AS(tensor(a, a), std::invalid_argument);

  PureState sub(RegisterLayout::make({qubit("c")}));
  sub.add(0, 0.5);  // sub-normalized
  CHECK(tensor(sub, b).norm_sq() == doctest::Approx(0.25));
}

TEST_CASE("measurement analysis enumerates outcomes") {
  auto lay = small_layout();
  PureState psi(lay);
  psi.add(lay->pack({0, 0}), 1.0 / std::sqrt(2.0));
  psi.add(lay->pack({1, 1}), 1.0 / std::sqrt(2.0));

  SUBCASE("deterministic register") {
    PureState zero = PureState::basis_state(lay, {0, 0});
    auto dist = measure_analysis(zero, {"q"});
    REQUIRE(dist.outcomes.size() == 1);
    CHECK(dist.outcomes[0].label == BasisTuple{0});
    CHECK(dist.outcomes[0].probability == doctest::Approx(1.0));
  }

  SUBCASE("equal superposition") {
    auto dist = measure_analysis(psi, {"q"});
    REQUIRE(dist.outcomes.size() == 2);
    CHECK(dist.outcomes[0].probability == doctest::Approx(0.5));
    CHECK(dist.outcomes[1].probability == doctest::Approx(0.5));
    CHECK(dist.total == doctest::Approx(1.0));
    CHECK(dist.outcomes[0].post.is_normalized());
    // Post-state of outcome 0 is |0>|id>.
    CHECK(std::abs(dist.outcomes[0].post.amp(BasisTuple{0, 0})) ==
          doctest::Approx(1.0));
  }

  SUBCASE("completeness equals squared norm for sub-normalized input") {
    PureState sub = psi;
    for (auto& [k, v] : sub.amps()) v *= 0.5;
    auto dist = measure_analysis(sub, {"q", "r"});
    CHECK(dist.total == doctest::Approx(0.25));
  }
}

TEST_CASE("sampling is seeded and concentrates") {
  auto lay = small_layout();
  PureState psi(lay);
  psi.add(lay->pack({0, 0}), 1.0 / std::sqrt(2.0));
  psi.add(lay->pack({1, 1}), 1.0 / std::sqrt(2.0));

  PureState zero = PureState::basis_state(lay, {0, 1});
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    CHECK(measure_sample(zero, {"q", "r"}, seed).label == BasisTuple{0, 1});
  }

  const Outcome first = measure_sample(psi, {"q"}, 42);
  for (int i = 0; i < 5; ++i) {
    CHECK(measure_sample(psi, {"q"}, 42).label == first.label);
  }

  std::mt19937_64 rng(20240901);
  int ones = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    if (measure_sample(psi, {"q"}, rng).label[0] == 1) ++ones;
  }
  const double freq = static_cast<double>(ones) / trials;
  CHECK(freq == doctest::Approx(0.5).epsilon(0.04));  // +-0.02 absolute
  CHECK(std::abs(freq - 0.5) < 0.02);
}

TEST_CASE("partial trace") {
  SUBCASE("product state gives a rank-1 projector") {
    auto lay = RegisterLayout::make({qubit("q"), perm_reg("r", 2)});
    PureState psi(lay);
    psi.add(lay->pack({0, 0}), 1.0 / std::sqrt(2.0));
    psi.add(lay->pack({0, 1}), 1.0 / std::sqrt(2.0));
    DensityOp rho = partial_trace(psi, "r");
    CHECK(rho.trace_real() == doctest::Approx(1.0));
    CHECK(rho.hermiticity_error() < kTol);
    CHECK(rho.min_eigenvalue() > -kTol);
    // Rank 1: rho^2 = rho.
    CHECK((rho.matrix() * rho.matrix() - rho.matrix()).cwiseAbs().maxCoeff() <
          kTol);
  }

  SUBCASE("purification reduces to the commitment mixture, either register") {
    for (int n : {2, 6}) {
      const KeySet keys = KeySet::enumerate(n);
      const Perm key = keys[keys.size() / 2];
      for (int s = 0; s < 2; ++s) {
        PureState purif = pair_purification(s, key);
        const DensityOp expect = commitment_state(s, key);
        CHECK((partial_trace(purif, "r2").matrix() - expect.matrix())
                  .cwiseAbs()
                  .maxCoeff() < kTol);
        CHECK((partial_trace(purif, "r1").matrix() - expect.matrix())
                  .cwiseAbs()
                  .maxCoeff() < kTol);
      }
    }
  }
}

TEST_CASE("pruning guard") {
  auto lay = RegisterLayout::make({qubit("q")});
  PureState psi(lay);
  psi.add(0, 1.0);
  psi.add(1, 1e-13);
  {
    PruneGuard guard(0.0);
    PureState kept = psi;
    kept.prune();
    CHECK(kept.term_count() == 2);
  }
  PureState pruned = psi;
  pruned.prune();
  CHECK(pruned.term_count() == 1);
}

TEST_CASE("project_values keeps the event weight") {
  auto lay = small_layout();
  PureState psi(lay);
  psi.add(lay->pack({0, 0}), 0.6);
  psi.add(lay->pack({1, 1}), 0.8);
  PureState proj = project_values(psi, {{"q", 1}});
  CHECK(proj.norm_sq() == doctest::Approx(0.64));
  CHECK(proj.term_count() == 1);
}
