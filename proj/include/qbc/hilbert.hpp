#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "qbc/perm.hpp"

namespace qbc {

using cplx = std::complex<double>;

/// Verification tolerance used throughout the artifact.
inline constexpr double kTol = 1e-9;
/// Default amplitude pruning threshold.
inline constexpr double kDefaultPruneTol = 1e-12;

/// Thread-local pruning threshold (the sparsity-soundness check runs one
/// scenario with pruning disabled).
double prune_threshold();
class PruneGuard {
 public:
  explicit PruneGuard(double threshold);
  ~PruneGuard();
  PruneGuard(const PruneGuard&) = delete;
  PruneGuard& operator=(const PruneGuard&) = delete;

 private:
  double saved_;
};

enum class RegKind { Qubit, PermGroup };

struct Register {
  std::string name;
  std::uint64_t dim;  // 2 for a qubit, n! for a permutation register
  RegKind kind = RegKind::Qubit;
};

Register qubit(std::string name);
Register perm_reg(std::string name, int n);

/// Ordered list of named registers. Basis tuples pack into a uint64 key in
/// register order (first register most significant).
class RegisterLayout {
 public:
  explicit RegisterLayout(std::vector<Register> regs);

  static std::shared_ptr<const RegisterLayout> make(std::vector<Register> regs);

  std::size_t count() const { return regs_.size(); }
  const Register& reg(std::size_t i) const { return regs_[i]; }
  const std::vector<Register>& registers() const { return regs_; }

  /// Index of a register by name; throws std::invalid_argument if absent.
  std::size_t index_of(const std::string& name) const;
  bool has(const std::string& name) const;

  std::uint64_t pack(const std::vector<std::uint64_t>& values) const;
  std::vector<std::uint64_t> unpack(std::uint64_t key) const;
  std::uint64_t value_at(std::uint64_t key, std::size_t reg_index) const;
  std::uint64_t with_value(std::uint64_t key, std::size_t reg_index,
                           std::uint64_t value) const;
  std::uint64_t stride(std::size_t reg_index) const { return strides_[reg_index]; }

  bool operator==(const RegisterLayout& other) const;

 private:
  std::vector<Register> regs_;
  std::vector<std::uint64_t> strides_;
};

using LayoutPtr = std::shared_ptr<const RegisterLayout>;
using BasisTuple = std::vector<std::uint64_t>;
using AmpMap = std::unordered_map<std::uint64_t, cplx>;

/// Sparse complex amplitude map over a typed multi-register basis.
/// Sub-normalized states are first-class: the squared norm is the weight of
/// the event that produced them (e.g. a projection).
class PureState {
 public:
  /// Empty zero state over a placeholder register; assign before use.
  PureState();
  explicit PureState(LayoutPtr layout);

  static PureState basis_state(LayoutPtr layout, const BasisTuple& values);

  const RegisterLayout& layout() const { return *layout_; }
  const LayoutPtr& layout_ptr() const { return layout_; }

  const AmpMap& amps() const& { return amps_; }
  AmpMap& amps() & { return amps_; }
  // Keeps range-for over a temporary's amplitudes well-defined.
  AmpMap amps() && { return std::move(amps_); }

  cplx amp(std::uint64_t key) const;
  cplx amp(const BasisTuple& values) const;
  void add(std::uint64_t key, cplx value);
  void set(std::uint64_t key, cplx value);

  double norm_sq() const;
  double weight() const { return norm_sq(); }
  bool is_normalized(double tol = kTol) const;
  PureState normalized() const;

  std::size_t term_count() const { return amps_.size(); }
  void prune(double threshold);
  void prune() { prune(prune_threshold()); }

 private:
  LayoutPtr layout_;
  AmpMap amps_;
};

/// Conjugate-linear in the first argument. Layouts must match.
cplx inner_product(const PureState& a, const PureState& b);

/// Disjoint register names required.
PureState tensor(const PureState& a, const PureState& b);

/// |<a|b>| = ||a||*||b|| within tol.
bool equal_up_to_global_phase(const PureState& a, const PureState& b,
                              double tol = kTol);
/// |<a|b>|^2 (callers pass normalized states).
double fidelity(const PureState& a, const PureState& b);
/// max_k |a_k - b_k| entrywise.
double max_entry_dev(const PureState& a, const PureState& b);

/// Projects onto fixed basis content of the named registers. The result is
/// not renormalized; its squared norm is the event probability.
PureState project_values(
    const PureState& state,
    const std::vector<std::pair<std::string, std::uint64_t>>& fixed);

struct Outcome {
  BasisTuple label;
  double probability;
  PureState post;  // renormalized
};

struct OutcomeDistribution {
  std::vector<Outcome> outcomes;  // sorted by label
  double total = 0.0;             // equals the measured state's squared norm
};

/// Enumerates every outcome of a computational-basis measurement of the named
/// registers, with renormalized post-states.
OutcomeDistribution measure_analysis(const PureState& state,
                                     const std::vector<std::string>& regs);

/// Draws one outcome from the analysis distribution. Deterministic in `rng`.
Outcome measure_sample(const PureState& state,
                       const std::vector<std::string>& regs,
                       std::mt19937_64& rng);
Outcome measure_sample(const PureState& state,
                       const std::vector<std::string>& regs,
                       std::uint64_t seed);

/// Dense Hermitian operator over a single permutation register.
class DensityOp {
 public:
  explicit DensityOp(Eigen::MatrixXcd m);

  const Eigen::MatrixXcd& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

  double trace_real() const;
  double hermiticity_error() const;  // max |M - M^dagger|
  double min_eigenvalue() const;     // of the Hermitian part

 private:
  Eigen::MatrixXcd m_;
};

/// tr_others(|psi><psi|) for one kept register; trace equals the input's
/// squared norm.
DensityOp partial_trace(const PureState& state, const std::string& keep);

}  // namespace qbc
