#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbc/hilbert.hpp"
#include "qbc/perm.hpp"

namespace qbc {

/// Rank-indexed view of S_n with cached parity and (for desk-scale n)
/// a cached multiplication table.
class SymmetricGroup {
 public:
  static const SymmetricGroup& of_degree(int n);
  static const SymmetricGroup& of_dim(std::uint64_t dim);  // dim = n!

  int degree() const { return n_; }
  std::uint64_t order() const { return static_cast<std::uint64_t>(perms_.size()); }
  const Perm& perm(std::uint64_t rank) const { return perms_[rank]; }
  int parity(std::uint64_t rank) const { return parity_[rank]; }
  std::uint64_t mult(std::uint64_t a, std::uint64_t b) const;  // rank of p_a * p_b
  std::uint64_t inv(std::uint64_t a) const { return inv_[a]; }

  /// rank -> rank(p * key); cached per key, used by sector projectors.
  const std::vector<std::uint32_t>& right_mult_table(const Perm& key) const;

 private:
  explicit SymmetricGroup(int n);
  int n_;
  std::vector<Perm> perms_;
  std::vector<std::uint8_t> parity_;
  std::vector<std::uint32_t> inv_;
  std::vector<std::uint32_t> mult_table_;  // empty when the order is too large
  mutable std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> rmt_;
};

/// Register-targeted unitary. Targets are supplied at application time.
struct GateSpec {
  enum class Kind {
    Hadamard,           // 1 qubit
    CtrlRightMult,      // control qubit, key perm reg, target perm reg
    CtrlRightMultFixed, // control qubit, target perm reg; key held classically
    CnotId,             // qubit, perm reg: flip qubit iff reg holds id
    USgn,               // perm reg: phase (-1)^parity
    CtrlSwap,           // two equal-dimension registers, contents exchanged
    LeftMultFrom,       // source perm reg, target perm reg: |s>|t> -> |s>|s*t>
    Unif,               // perm reg: |id> -> uniform superposition
    UnifInverse,
    Dense,              // arbitrary unitary block over the targets
  };

  Kind kind;
  bool inverted = false;   // adjoint of the multiplication kinds
  Perm fixed;              // CtrlRightMultFixed key
  Eigen::MatrixXcd matrix;  // Dense payload, validated unitary

  int arity() const;
  GateSpec adjoint() const;
  std::string kind_name() const;

  static GateSpec hadamard();
  static GateSpec ctrl_right_mult();
  static GateSpec ctrl_right_mult_fixed(Perm key);
  static GateSpec cnot_id();
  static GateSpec u_sgn();
  static GateSpec ctrl_swap();
  static GateSpec left_mult_from();
  static GateSpec unif();
  static GateSpec unif_inverse();
  /// Throws unless m is unitary within kTol.
  static GateSpec dense(Eigen::MatrixXcd m);
  static GateSpec not_gate();  // dense 2x2 X, used for ancilla cleanup
};

GateSpec from_kind_name(const std::string& name);

/// Applies `gate` to the named registers. Norm is preserved within kTol.
PureState apply_gate(const PureState& state, const GateSpec& gate,
                     const std::vector<std::string>& targets);

}  // namespace qbc
