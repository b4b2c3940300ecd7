#pragma once

#include <string>
#include <vector>

#include "qbc/hilbert.hpp"
#include "qbc/perm.hpp"

namespace qbc {

/// Register roles for the pair-encoding subroutine: an ancilla qubit, the
/// label register holding sigma, the key register, and the work register that
/// receives the encoded pair state.
struct EncodeRegs {
  std::string ancilla;
  std::string label;
  std::string key;
  std::string work;
};

/// |0>|sigma>|key>|id>  ->  |0>|sigma>|key> pair_state(sigma,0,key).
/// Gate sequence: H on the ancilla, key-controlled right multiplication,
/// CNOT_id, X on the ancilla, then left multiplication from the label
/// register. Unitary on the whole space; the stated action holds on the
/// honest subspace (key content a fixed-point-free involution).
PureState encode_pair(PureState state, const EncodeRegs& regs);
/// Exact adjoint of encode_pair.
PureState encode_pair_inverse(PureState state, const EncodeRegs& regs);

/// |0>|key>|id>|id>  ->  |0>|key> (x) purification across (label, work).
/// Same as encode_pair but the label register is driven to the uniform
/// superposition first (Unif gate with its fixed orthonormal completion).
PureState encode_purification(PureState state, const EncodeRegs& regs);
/// Exact adjoint; on the honest path measuring (ancilla, label, work)
/// afterwards yields (0, id, id) with probability 1.
PureState encode_purification_inverse(PureState state, const EncodeRegs& regs);

/// Applies the sign gate to each named permutation register. On a pair state
/// this flips the sign sector s -> 1-s up to a global phase; applied to both
/// halves of a purification the phases cancel exactly.
PureState flip_sign_sector(PureState state,
                           const std::vector<std::string>& regs);

/// The H - controlled-right-mult - H partition circuit, no measurement.
PureState partition_unitary(PureState state, const std::string& ancilla,
                            const std::string& key_reg,
                            const std::string& target);

/// Runs the partition circuit and measures the ancilla. The key register must
/// be supported on key-set basis states (throws otherwise). With a matching
/// key each outcome s collapses the target onto its s sector; with a
/// mismatched key on a commitment mixture both outcomes have probability 1/2.
OutcomeDistribution partition_by_key(const PureState& state,
                                     const std::string& ancilla,
                                     const std::string& key_reg,
                                     const std::string& target);

}  // namespace qbc
