#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbc/hilbert.hpp"
#include "qbc/perm.hpp"

namespace qbc {

enum class Party { Alice, Bob };
enum class Phase { Committed, Opened, Verified };

struct TransferRecord {
  std::string reg;
  Party from;
  Party to;
  int qubits;        // ceil(log2(dim))
  std::string step;  // "commit" or "open"
};

/// Joint system of a protocol run plus register ownership and the
/// communication ledger. Steps return new transcripts; values are never
/// mutated in place.
struct CommitTranscript {
  int n = 0;
  PureState joint;
  std::map<std::string, Party> ownership;
  Phase phase = Phase::Committed;
  std::vector<TransferRecord> ledger;

  // Honest inputs, recorded for reporting; the verifier never reads them.
  int committed_bit = -1;
  Perm committed_key;

  int commit_phase_qubits() const;
  int opening_phase_qubits() const;  // 1 + 2*ceil(log2(n!)) for honest runs
  int total_transferred_qubits() const;
};

/// A_private, bit, open1 (purification label), open2 (key), commit,
/// B_private — in this order.
LayoutPtr protocol_layout(int n);

enum class Verdict { Accept, RejectDeceive };

struct VerifyResult {
  Verdict verdict = Verdict::RejectDeceive;
  std::optional<int> bit;      // set when verdict == Accept
  double probability = 0.0;    // probability of `verdict`
  // Full analysis distribution: "accept0", "accept1", "reject".
  std::vector<std::pair<std::string, double>> distribution;
  double accept_probability(int a) const;
};

/// (C1)-(C4): prepares the committed joint state (bit in `bit`, key in
/// `open2`, the purification across open1 (x) commit, sign sector flipped for
/// bit = 1) and hands the commit register to Bob. Throws on an invalid n or a
/// key outside the key set.
CommitTranscript alice_commit(int n, int bit, const Perm& key);

/// (R1): ownership of bit/open1/open2 moves to Bob; the state is unchanged.
/// Throws unless phase == Committed.
CommitTranscript alice_open(const CommitTranscript& t);

/// (R2)-(R5) in analysis mode: exact verdict distribution. The open1 register
/// is never measured before the final projection, so the purification
/// entanglement survives the checks.
VerifyResult bob_verify(const CommitTranscript& t);

/// Same steps but each measurement is sampled with the seeded generator.
VerifyResult bob_verify_sampled(const CommitTranscript& t, std::uint64_t seed);

/// alice_commit -> alice_open -> bob_verify.
VerifyResult run_honest(int n, int bit, const Perm& key);
VerifyResult run_honest_sampled(int n, int bit, const Perm& key,
                                std::uint64_t seed);

/// Uniform draw from the key set, deterministic in the seed.
Perm sample_key(int n, std::uint64_t seed);

}  // namespace qbc
