#include "qbc/procedures.hpp"

#include <stdexcept>

#include "qbc/gates.hpp"
#include "qbc/states.hpp"

namespace qbc {

PureState encode_pair(PureState state, const EncodeRegs& regs) {
  state = apply_gate(state, GateSpec::hadamard(), {regs.ancilla});
  state = apply_gate(state, GateSpec::ctrl_right_mult(),
                     {regs.ancilla, regs.key, regs.work});
  state = apply_gate(state, GateSpec::cnot_id(), {regs.ancilla, regs.work});
  state = apply_gate(state, GateSpec::not_gate(), {regs.ancilla});
  state = apply_gate(state, GateSpec::left_mult_from(), {regs.label, regs.work});
  return state;
}

PureState encode_pair_inverse(PureState state, const EncodeRegs& regs) {
  state = apply_gate(state, GateSpec::left_mult_from().adjoint(),
                     {regs.label, regs.work});
  state = apply_gate(state, GateSpec::not_gate(), {regs.ancilla});
  state = apply_gate(state, GateSpec::cnot_id(), {regs.ancilla, regs.work});
  state = apply_gate(state, GateSpec::ctrl_right_mult().adjoint(),
                     {regs.ancilla, regs.key, regs.work});
  state = apply_gate(state, GateSpec::hadamard(), {regs.ancilla});
  return state;
}

PureState encode_purification(PureState state, const EncodeRegs& regs) {
  state = apply_gate(state, GateSpec::hadamard(), {regs.ancilla});
  state = apply_gate(state, GateSpec::ctrl_right_mult(),
                     {regs.ancilla, regs.key, regs.work});
  state = apply_gate(state, GateSpec::cnot_id(), {regs.ancilla, regs.work});
  state = apply_gate(state, GateSpec::not_gate(), {regs.ancilla});
  state = apply_gate(state, GateSpec::unif(), {regs.label});
  state = apply_gate(state, GateSpec::left_mult_from(), {regs.label, regs.work});
  return state;
}

PureState encode_purification_inverse(PureState state, const EncodeRegs& regs) {
  state = apply_gate(state, GateSpec::left_mult_from().adjoint(),
                     {regs.label, regs.work});
  state = apply_gate(state, GateSpec::unif_inverse(), {regs.label});
  state = apply_gate(state, GateSpec::not_gate(), {regs.ancilla});
  state = apply_gate(state, GateSpec::cnot_id(), {regs.ancilla, regs.work});
  state = apply_gate(state, GateSpec::ctrl_right_mult().adjoint(),
                     {regs.ancilla, regs.key, regs.work});
  state = apply_gate(state, GateSpec::hadamard(), {regs.ancilla});
  return state;
}

PureState flip_sign_sector(PureState state,
                           const std::vector<std::string>& regs) {
  for (const auto& r : regs) {
    state = apply_gate(state, GateSpec::u_sgn(), {r});
  }
  return state;
}

PureState partition_unitary(PureState state, const std::string& ancilla,
                            const std::string& key_reg,
                            const std::string& target) {
  state = apply_gate(state, GateSpec::hadamard(), {ancilla});
  state = apply_gate(state, GateSpec::ctrl_right_mult(),
                     {ancilla, key_reg, target});
  state = apply_gate(state, GateSpec::hadamard(), {ancilla});
  return state;
}

OutcomeDistribution partition_by_key(const PureState& state,
                                     const std::string& ancilla,
                                     const std::string& key_reg,
                                     const std::string& target) {
  const RegisterLayout& lay = state.layout();
  const std::size_t ki = lay.index_of(key_reg);
  const SymmetricGroup& g = SymmetricGroup::of_dim(lay.reg(ki).dim);
  for (const auto& [k, v] : state.amps()) {
    if (!is_fixed_point_free_involution(g.perm(lay.value_at(k, ki)))) {
      throw std::invalid_argument(
          "partition_by_key: key register content outside the key set");
    }
  }
  PureState evolved = partition_unitary(state, ancilla, key_reg, target);
  return measure_analysis(evolved, {ancilla});
}

}  // namespace qbc
