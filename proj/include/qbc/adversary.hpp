#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbc/gates.hpp"
#include "qbc/hilbert.hpp"
#include "qbc/perm.hpp"

namespace qbc {

/// One step of a unitary program: a register-targeted gate, a gate fired only
/// on the |1> branch of a control qubit, or a dense unitary block on a small
/// explicitly-listed subspace (identity on its complement).
struct ProgramStep {
  enum class Type { Gate, ControlledGate, Subspace };
  Type type = Type::Gate;

  GateSpec gate;                      // Gate / ControlledGate
  std::vector<std::string> targets;   // Gate / ControlledGate
  std::string control;                // ControlledGate

  std::vector<std::string> regs;      // Subspace
  std::vector<BasisTuple> basis_list; // Subspace: spanning basis tuples
  Eigen::MatrixXcd block;             // Subspace: unitary on the span

  static ProgramStep gate_step(GateSpec g, std::vector<std::string> t);
  static ProgramStep controlled(std::string control_qubit, GateSpec g,
                                std::vector<std::string> t);
  static ProgramStep subspace(std::vector<std::string> regs,
                              std::vector<BasisTuple> basis_list,
                              Eigen::MatrixXcd block);
};

struct UnitaryProgram {
  std::vector<ProgramStep> steps;

  PureState apply(PureState state) const;
  UnitaryProgram adjoint() const;
  UnitaryProgram then(const UnitaryProgram& next) const;
  /// Unitarity of every block, distinct basis tuples, arity sanity.
  void validate() const;
  bool empty() const { return steps.empty(); }
  /// Every register a step touches.
  std::vector<std::string> touched() const;
};

/// Attack triple: u1 prepares the committing-phase state over Alice's system,
/// u2_a is applied before opening to unveil a. Opening programs may touch
/// only A_private, bit, open1, open2.
struct CheatStrategy {
  std::string name;
  int n = 0;
  UnitaryProgram u1, u2_0, u2_1;
  void validate() const;
};

/// A_private, bit, open1, open2, commit plus a scratch qubit for the
/// distillation circuitry.
LayoutPtr cheat_layout(int n);
/// cheat_layout plus the problem instance: a manipulable register and the
/// hidden half of its purification.
LayoutPtr recovery_layout(int n);

/// u1 applied to the all-zeros basis state on cheat_layout.
PureState initial_cheat_state(const CheatStrategy& s);

CheatStrategy honest_strategy(int n, int bit, std::size_t key_index = 0);
CheatStrategy equal_superposition_strategy(int n, std::size_t key_index = 0);
CheatStrategy key_swap_strategy(int n, std::size_t from_index = 0,
                                std::size_t to_index = 1);
CheatStrategy uniform_key_strategy(int n);
/// "honest-0", "honest-1", "equal-superposition", "key-swap" (optionally
/// "key-swap:i:j"), "uniform-key".
CheatStrategy builtin_strategy(const std::string& name, int n);
std::vector<std::string> builtin_strategy_names();

/// Folds u2_1 into the preparation: (u1', u2_0', identity). Unveil
/// probabilities are preserved; asserted numerically within kTol.
CheatStrategy normalize_strategy(const CheatStrategy& s);

/// Measurement operators of the opening test, realized as projectors.
struct ProjectorSpec {
  enum class Kind {
    BitIs,          // |a><a| on bit
    KeyIs,          // |key><key| on open2
    LabelIs,        // |label><label| on open1
    CommitPairIs,   // |pair_state(label,s,key)><...| on commit
    PurifiedPairIs, // |purification(s,key)><...| on open1 (x) commit
    AcceptUnveil,   // sum over keys of BitIs(s) (x) KeyIs (x) PurifiedPairIs
    KeySector,      // (I + (-1)^s R_key)/2 on commit
  };
  Kind kind;
  int s = 0;
  Perm key;
  Perm label;

  static ProjectorSpec bit_is(int a);
  static ProjectorSpec key_is(Perm key);
  static ProjectorSpec label_is(Perm label);
  static ProjectorSpec commit_pair_is(Perm label, int s, Perm key);
  static ProjectorSpec purified_pair_is(int s, Perm key);
  static ProjectorSpec accept_unveil(int a);
  static ProjectorSpec key_sector(Perm key, int s);
};

/// Applies the projector; the result is sub-normalized, its squared norm is
/// the event probability.
PureState apply_projector(const ProjectorSpec& p, const PureState& state);

/// Probability that the opening test accepts bit a against this strategy:
/// || AcceptUnveil(a) (u2_a (x) I_commit) u1 |0> ||^2.
double unveil_probability(const CheatStrategy& s, int a);

struct DistillResult {
  double probability;       // success probability of the measurement route
  PureState state;          // normalized post-state
  double projector_probability;  // || AcceptUnveil(1) eta ||^2
  double projector_fidelity;     // overlap^2 with the projector route
  bool routes_agree;             // both within kTol
};

/// The unveil-1 distillation: condition on bit = 1, split off the s = 1
/// sector, check label consistency by decode/re-encode, and return the
/// surviving state. Agrees with the AcceptUnveil(1) projector on every
/// strategy whose unveil-1 component is a combination of ideal key branches
/// (all builtin strategies); both routes are computed and compared.
/// Throws if the success probability is below 1e-12.
DistillResult distill(const CheatStrategy& s);

struct KeySectorProjection {
  PureState state;
  double norm_sq;
  double key_weight;           // weight of the projected key inside the input
  double claimed_norm_sq;      // (1-w)(|K|+1)^2 / (2(|K|-1)^2)
  double corrected_norm_sq;    // (1-w)/2
  double claimed_form_dev;     // entrywise dev from the closed form with the
                               // (|K|+1)/(sqrt(2 n!)(|K|-1)) coefficient
  double corrected_form_dev;   // same form with coefficient 1/sqrt(2 n!)
};

/// Projects a distilled state onto the s = 0 pair sector of `key` on the
/// commit register and evaluates the closed-form predictions for the result.
KeySectorProjection project_onto_key_sector(const PureState& distilled,
                                            const Perm& key);

struct RecoveryResult {
  Perm hidden;
  double success = 0.0;            // probability of outputting the hidden key
  double distill_probability = 0.0;
  double reject_probability = 0.0;
  // key rank -> probability of outputting that key
  std::vector<std::pair<std::uint64_t, double>> outputs;
};

/// Runs the key-recovery procedure against an unopened commitment with the
/// given hidden key: prepare and distill the attack state, uncompute the
/// commit slot, swap in the instance, re-encode under the attack's own key,
/// apply u2_0 and read (bit, open2).
RecoveryResult recover_hidden_key(const CheatStrategy& s, const Perm& hidden);

struct BindingReport {
  std::string strategy;
  int n = 0;
  double t0 = 0.0, t1 = 0.0;
  double excess = 0.0;            // t0 + t1 - 1
  double norm_sq = 0.0;           // ||M0 (u2_0 (x) I) M1 u1|0>||^2
  double claim2_bound = 0.0;      // excess^2/4, lower bound claimed for norm_sq
  bool claim2_pass = false;       // vacuous (true) when excess <= 0
  bool claim2_vacuous = false;
  double claim1_bound = 0.0;      // 2 (1 - 2/(|K|+1))^2 norm_sq
  bool claim1_pass = false;       // best per-key success reaches the bound
  bool claim1_vacuous = false;
  double hpsp_success = 0.0;      // mean recovery success over all keys
  double best_success = 0.0;
  std::vector<double> per_key_success;
  double composed_bound = 0.0;    // excess^2/8
  bool composed_pass = false;
  bool composed_vacuous = false;
  double distill_probability = 0.0;
  // Closed-form checks of the key-sector projection, max over keys:
  double sector_claimed_norm_dev = 0.0;
  double sector_corrected_norm_dev = 0.0;
  double sector_claimed_form_dev = 0.0;
  double sector_corrected_form_dev = 0.0;
  bool all_passed() const;
};

BindingReport binding_report(const CheatStrategy& s, int n);

/// Oracle answering "which key hides in this commitment purification":
/// receives the purification and the names of the manipulable/hidden
/// registers, returns a candidate key.
using KeyOracle = std::function<Perm(const PureState& purification,
                                     const std::string& manipulable,
                                     const std::string& hidden_reg)>;

/// Sweeps every key with the partition statistic |P[outcome 0] - 1/2| on the
/// manipulable register; the matching key is deterministic, mismatched keys
/// sit at exactly 1/2. Succeeds with certainty on commitment instances.
KeyOracle exhaustive_partition_oracle();
/// Always answers with a key different from the instance's (success 0).
KeyOracle always_wrong_oracle();

struct DistinguishResult {
  double success = 0.0;    // P[guess = s], averaged over s
  double advantage = 0.0;  // |P[guess 1 | s=0] - P[guess 1 | s=1]|
};

/// Distinguishes the two commitment ensembles given two copies: the oracle
/// reads the key from the first copy, the partition circuit on the second
/// copy then reveals the sector. success = 1/2 + gamma/2 for an oracle with
/// success rate gamma.
DistinguishResult distinguish_with_oracle(const KeyOracle& oracle, int n,
                                          const Perm& hidden);

struct DecoderSpec {
  double success0 = 0.5;  // P[output 0 | commitment of 0]
  double success1 = 0.5;
};

/// Decoder built from the partition circuit with a known key (exact analysis).
DecoderSpec partition_decoder(int n, const Perm& key);

/// |P[B outputs 1 | bit 0] - P[B outputs 1 | bit 1]| = |1 - s0 - s1| for the
/// algorithm that simply forwards the decoder's answer.
double decoder_advantage(const DecoderSpec& d);

}  // namespace qbc
