#include <doctest.h>

#include <stdexcept>

#include "qbc/json_io.hpp"

using namespace qbc;

TEST_CASE("permutation wire format is 1-indexed one-line") {
  const Perm p({1, 0, 3, 2, 5, 4});
  const json j = perm_to_json(p);
  CHECK(j.dump() == "[2,1,4,3,6,5]");
  CHECK(perm_from_json(j) == p);
  CHECK_THROWS_AS(perm_from_json(json::array()), std::invalid_argument);
  CHECK_THROWS_AS(perm_from_json(json::parse("[1,1]")), std::invalid_argument);
}

TEST_CASE("state dumps are sorted by basis rank") {
  auto lay = RegisterLayout::make({qubit("q"), perm_reg("p", 2)});
  PureState st(lay);
  st.add(lay->pack({1, 1}), 0.5);
  st.add(lay->pack({0, 0}), 0.5);
  st.add(lay->pack({0, 1}), cplx(0.5, -0.5));
  const json j = state_to_json(st);
  CHECK(j.at("amplitudes").size() == 3);
  CHECK(j.at("amplitudes")[0][0] == json::parse("[0,0]"));
  CHECK(j.at("amplitudes")[1][0] == json::parse("[0,1]"));
  CHECK(j.at("amplitudes")[1][2] == -0.5);
  CHECK(j.at("layout")[1].at("kind") == "perm");
}

TEST_CASE("strategy files round-trip") {
  const CheatStrategy s = key_swap_strategy(6, 0, 1);
  const json j = strategy_to_json(s);
  const CheatStrategy back = strategy_from_json(j);
  CHECK(back.name == s.name);
  CHECK(back.n == 6);
  CHECK(unveil_probability(back, 0) == doctest::Approx(0.25));
  CHECK(unveil_probability(back, 1) == doctest::Approx(1.0));
}

TEST_CASE("strategy schema errors") {
  CHECK_THROWS_AS(strategy_from_json(json::parse(R"({"n": 6})")),
                  std::exception);
  CHECK_THROWS_AS(strategy_from_json(json::parse(
                      R"({"n": 4, "u1": []})")),
                  std::invalid_argument);
  // Non-unitary subspace block.
  CHECK_THROWS_AS(
      strategy_from_json(json::parse(R"({
        "n": 6,
        "u1": [{"type": "subspace", "regs": ["open2"],
                "basis": [[0],[1]],
                "matrix": [[[1,0],[0,0]],[[0,0],[2,0]]]}]
      })")),
      std::invalid_argument);
  // Unknown gate kind.
  CHECK_THROWS_AS(
      strategy_from_json(json::parse(R"({
        "n": 6,
        "u1": [{"type": "gate", "kind": "warp", "targets": ["bit"]}]
      })")),
      std::invalid_argument);
}

TEST_CASE("reports are byte-stable for a fixed seed") {
  const std::string a = build_lemma_report(6, 300, 1234).dump(2);
  const std::string b = build_lemma_report(6, 300, 1234).dump(2);
  CHECK(a == b);
  const std::string c = build_lemma_report(6, 300, 777).dump(2);
  CHECK(a != c);

  const std::string s1 =
      build_simulate_report(6, 1, 2, "sample", 9, false).dump(2);
  const std::string s2 =
      build_simulate_report(6, 1, 2, "sample", 9, false).dump(2);
  CHECK(s1 == s2);
}

TEST_CASE("transcript serialization carries the ledger") {
  const json j =
      transcript_to_json(alice_open(alice_commit(6, 0, sample_key(6, 3))));
  CHECK(j.at("opening_phase_qubits") == 21);
  CHECK(j.at("phase") == "opened");
  CHECK(j.at("ownership").at("commit") == "bob");
  CHECK(j.at("ledger").size() == 4);
}
