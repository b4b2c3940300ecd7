#include "qbc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qbc/gates.hpp"
#include "qbc/procedures.hpp"
#include "qbc/states.hpp"

namespace qbc {

namespace {

int qubits_of(std::uint64_t dim) {
  int q = 0;
  std::uint64_t v = 1;
  while (v < dim) {
    v *= 2;
    ++q;
  }
  return q;
}

const EncodeRegs kPurifyRegs{"A_private", "open1", "open2", "commit"};
const EncodeRegs kVerifyRegs{"B_private", "open1", "open2", "commit"};

/// Ownership-checked gate application.
PureState owned_apply(const CommitTranscript& t, Party actor,
                      const GateSpec& gate, const std::vector<std::string>& regs,
                      PureState state) {
  for (const auto& r : regs) {
    auto it = t.ownership.find(r);
    if (it == t.ownership.end() || it->second != actor) {
      throw std::logic_error("protocol: gate applied to a register not owned "
                             "by the acting party: " + r);
    }
  }
  return apply_gate(state, gate, regs);
}

/// Swaps two basis values of one register (classical state preparation).
PureState swap_basis_values(const PureState& st, const std::string& reg,
                            std::uint64_t a, std::uint64_t b) {
  const RegisterLayout& lay = st.layout();
  const std::size_t i = lay.index_of(reg);
  PureState out(st.layout_ptr());
  for (const auto& [k, v] : st.amps()) {
    const std::uint64_t val = lay.value_at(k, i);
    std::uint64_t k2 = k;
    if (val == a) k2 = lay.with_value(k, i, b);
    else if (val == b) k2 = lay.with_value(k, i, a);
    out.add(k2, v);
  }
  return out;
}

struct VerifyAccumulator {
  double accept[2] = {0.0, 0.0};
  double reject = 0.0;
};

VerifyResult finish(const VerifyAccumulator& acc) {
  VerifyResult res;
  res.distribution = {{"accept0", acc.accept[0]},
                      {"accept1", acc.accept[1]},
                      {"reject", acc.reject}};
  // Most probable verdict; accept wins ties so honest runs read naturally.
  if (acc.accept[0] >= acc.accept[1] && acc.accept[0] >= acc.reject) {
    res.verdict = Verdict::Accept;
    res.bit = 0;
    res.probability = acc.accept[0];
  } else if (acc.accept[1] >= acc.reject) {
    res.verdict = Verdict::Accept;
    res.bit = 1;
    res.probability = acc.accept[1];
  } else {
    res.verdict = Verdict::RejectDeceive;
    res.probability = acc.reject;
  }
  return res;
}

}  // namespace

double VerifyResult::accept_probability(int a) const {
  for (const auto& [k, p] : distribution) {
    if (k == (a ? "accept1" : "accept0")) return p;
  }
  return 0.0;
}

int CommitTranscript::commit_phase_qubits() const {
  int q = 0;
  for (const auto& r : ledger) {
    if (r.step == "commit") q += r.qubits;
  }
  return q;
}

int CommitTranscript::opening_phase_qubits() const {
  int q = 0;
  for (const auto& r : ledger) {
    if (r.step == "open") q += r.qubits;
  }
  return q;
}

int CommitTranscript::total_transferred_qubits() const {
  int q = 0;
  for (const auto& r : ledger) q += r.qubits;
  return q;
}

LayoutPtr protocol_layout(int n) {
  return RegisterLayout::make({qubit("A_private"), qubit("bit"),
                               perm_reg("open1", n), perm_reg("open2", n),
                               perm_reg("commit", n), qubit("B_private")});
}

CommitTranscript alice_commit(int n, int bit, const Perm& key) {
  SecurityParam sp(n);
  (void)sp;
  require_key(key);
  if (key.size() != n) throw std::invalid_argument("alice_commit: key size");
  if (bit != 0 && bit != 1) throw std::invalid_argument("alice_commit: bit");

  CommitTranscript t;
  t.n = n;
  t.committed_bit = bit;
  t.committed_key = key;
  t.ownership = {{"A_private", Party::Alice}, {"bit", Party::Alice},
                 {"open1", Party::Alice},     {"open2", Party::Alice},
                 {"commit", Party::Alice},    {"B_private", Party::Bob}};
  PureState st = PureState::basis_state(protocol_layout(n),
                                        BasisTuple{0, 0, 0, 0, 0, 0});

  if (bit == 1) {
    st = owned_apply(t, Party::Alice, GateSpec::not_gate(), {"bit"}, st);
  }
  st = swap_basis_values(st, "open2", 0, key.rank());
  st = encode_purification(std::move(st), kPurifyRegs);
  if (bit == 1) {
    st = owned_apply(t, Party::Alice, GateSpec::u_sgn(), {"open1"}, st);
    st = owned_apply(t, Party::Alice, GateSpec::u_sgn(), {"commit"}, st);
  }

  t.joint = std::move(st);
  t.phase = Phase::Committed;
  t.ownership["commit"] = Party::Bob;
  t.ledger.push_back(TransferRecord{"commit", Party::Alice, Party::Bob,
                                    qubits_of(factorial(n)), "commit"});
  return t;
}

CommitTranscript alice_open(const CommitTranscript& t) {
  if (t.phase != Phase::Committed) {
    throw std::logic_error("alice_open: transcript is not in the committed phase");
  }
  CommitTranscript out = t;
  out.phase = Phase::Opened;
  const int pq = qubits_of(factorial(t.n));
  for (const char* reg : {"bit", "open1", "open2"}) {
    out.ownership[reg] = Party::Bob;
    out.ledger.push_back(TransferRecord{reg, Party::Alice, Party::Bob,
                                        std::string(reg) == "bit" ? 1 : pq,
                                        "open"});
  }
  return out;
}

namespace {

void require_bob_owns_opened_system(const CommitTranscript& t) {
  for (const char* reg : {"bit", "open1", "open2", "commit", "B_private"}) {
    auto it = t.ownership.find(reg);
    if (it == t.ownership.end() || it->second != Party::Bob) {
      throw std::logic_error(
          std::string("bob_verify: register not owned by Bob: ") + reg);
    }
  }
}

}  // namespace

VerifyResult bob_verify(const CommitTranscript& t) {
  if (t.phase != Phase::Opened) {
    throw std::logic_error("bob_verify: transcript is not in the opened phase");
  }
  require_bob_owns_opened_system(t);
  const SymmetricGroup& g = SymmetricGroup::of_degree(t.n);
  VerifyAccumulator acc;

  // (R2): computational-basis measurement of bit (x) open2 only; open1 stays
  // unmeasured to preserve its entanglement with the commit register.
  for (const Outcome& o2 : measure_analysis(t.joint, {"bit", "open2"}).outcomes) {
    const int a = static_cast<int>(o2.label[0]);
    const Perm key = g.perm(o2.label[1]);
    if (!is_fixed_point_free_involution(key)) {
      acc.reject += o2.probability;
      continue;
    }
    // (R3): partition on (B_private, open2, commit).
    PureState st = partition_unitary(o2.post, "B_private", "open2", "commit");
    for (const Outcome& o3 : measure_analysis(st, {"B_private"}).outcomes) {
      const double p23 = o2.probability * o3.probability;
      // (R4)
      if (static_cast<int>(o3.label[0]) != a) {
        acc.reject += p23;
        continue;
      }
      PureState st4 = o3.post;
      if (o3.label[0] == 1) {
        st4 = apply_gate(st4, GateSpec::not_gate(), {"B_private"});
      }
      // (R5)
      if (a == 1) {
        st4 = flip_sign_sector(std::move(st4), {"open1", "commit"});
      }
      st4 = encode_purification_inverse(std::move(st4), kVerifyRegs);
      for (const Outcome& o5 :
           measure_analysis(st4, {"B_private", "open1", "commit"}).outcomes) {
        const bool initial_content =
            o5.label[0] == 0 && o5.label[1] == 0 && o5.label[2] == 0;
        if (initial_content) {
          acc.accept[a] += p23 * o5.probability;
        } else {
          acc.reject += p23 * o5.probability;
        }
      }
    }
  }
  return finish(acc);
}

VerifyResult bob_verify_sampled(const CommitTranscript& t, std::uint64_t seed) {
  if (t.phase != Phase::Opened) {
    throw std::logic_error("bob_verify: transcript is not in the opened phase");
  }
  require_bob_owns_opened_system(t);
  std::mt19937_64 rng(seed);
  const SymmetricGroup& g = SymmetricGroup::of_degree(t.n);

  auto rejected = [] {
    VerifyResult r;
    r.verdict = Verdict::RejectDeceive;
    r.probability = 1.0;
    r.distribution = {{"reject", 1.0}};
    return r;
  };

  Outcome o2 = measure_sample(t.joint, {"bit", "open2"}, rng);
  const int a = static_cast<int>(o2.label[0]);
  const Perm key = g.perm(o2.label[1]);
  if (!is_fixed_point_free_involution(key)) return rejected();

  PureState st = partition_unitary(o2.post, "B_private", "open2", "commit");
  Outcome o3 = measure_sample(st, {"B_private"}, rng);
  if (static_cast<int>(o3.label[0]) != a) return rejected();
  PureState st4 = o3.post;
  if (o3.label[0] == 1) {
    st4 = apply_gate(st4, GateSpec::not_gate(), {"B_private"});
  }
  if (a == 1) st4 = flip_sign_sector(std::move(st4), {"open1", "commit"});
  st4 = encode_purification_inverse(std::move(st4), kVerifyRegs);
  Outcome o5 = measure_sample(st4, {"B_private", "open1", "commit"}, rng);
  if (o5.label[0] != 0 || o5.label[1] != 0 || o5.label[2] != 0) return rejected();

  VerifyResult r;
  r.verdict = Verdict::Accept;
  r.bit = a;
  r.probability = 1.0;
  r.distribution = {{a ? "accept1" : "accept0", 1.0}};
  return r;
}

VerifyResult run_honest(int n, int bit, const Perm& key) {
  return bob_verify(alice_open(alice_commit(n, bit, key)));
}

VerifyResult run_honest_sampled(int n, int bit, const Perm& key,
                                std::uint64_t seed) {
  return bob_verify_sampled(alice_open(alice_commit(n, bit, key)), seed);
}

Perm sample_key(int n, std::uint64_t seed) {
  const KeySet keys = KeySet::enumerate(n);
  std::mt19937_64 rng(seed);
  return keys[std::uniform_int_distribution<std::size_t>(0, keys.size() - 1)(rng)];
}

}  // namespace qbc
