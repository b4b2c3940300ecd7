#include "qbc/gates.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace qbc {

namespace {
// Full multiplication tables up to 7! keep gate application table-driven;
// larger degrees fall back to composing permutations directly.
constexpr std::uint64_t kMultTableLimit = 5040;
}  // namespace

SymmetricGroup::SymmetricGroup(int n) : n_(n) {
  const std::uint64_t order = factorial(n);
  perms_.reserve(order);
  parity_.reserve(order);
  inv_.reserve(order);
  for (std::uint64_t r = 0; r < order; ++r) {
    perms_.push_back(Perm::unrank(n, r));
    parity_.push_back(static_cast<std::uint8_t>(perms_.back().parity()));
  }
  for (std::uint64_t r = 0; r < order; ++r) {
    inv_.push_back(static_cast<std::uint32_t>(perms_[r].inverse().rank()));
  }
  if (order <= kMultTableLimit) {
    mult_table_.resize(order * order);
    for (std::uint64_t a = 0; a < order; ++a) {
      for (std::uint64_t b = 0; b < order; ++b) {
        mult_table_[a * order + b] =
            static_cast<std::uint32_t>(compose(perms_[a], perms_[b]).rank());
      }
    }
  }
}

const SymmetricGroup& SymmetricGroup::of_degree(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<SymmetricGroup>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::unique_ptr<SymmetricGroup>(new SymmetricGroup(n)))
             .first;
  }
  return *it->second;
}

const SymmetricGroup& SymmetricGroup::of_dim(std::uint64_t dim) {
  for (int n = 1; n <= 20; ++n) {
    if (factorial(n) == dim) return of_degree(n);
  }
  throw std::invalid_argument("SymmetricGroup: dimension is not a factorial");
}

std::uint64_t SymmetricGroup::mult(std::uint64_t a, std::uint64_t b) const {
  if (!mult_table_.empty()) return mult_table_[a * order() + b];
  return compose(perms_[a], perms_[b]).rank();
}

const std::vector<std::uint32_t>& SymmetricGroup::right_mult_table(
    const Perm& key) const {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  const std::uint64_t kr = key.rank();
  auto it = rmt_.find(kr);
  if (it == rmt_.end()) {
    std::vector<std::uint32_t> table(order());
    for (std::uint64_t r = 0; r < order(); ++r) {
      table[r] = static_cast<std::uint32_t>(mult(r, kr));
    }
    it = rmt_.emplace(kr, std::move(table)).first;
  }
  return it->second;
}

int GateSpec::arity() const {
  switch (kind) {
    case Kind::Hadamard:
    case Kind::USgn:
    case Kind::Unif:
    case Kind::UnifInverse:
      return 1;
    case Kind::CtrlRightMultFixed:
    case Kind::CnotId:
    case Kind::CtrlSwap:
    case Kind::LeftMultFrom:
      return 2;
    case Kind::CtrlRightMult:
      return 3;
    case Kind::Dense:
      return -1;  // determined by the matrix dimension
  }
  return -1;
}

GateSpec GateSpec::adjoint() const {
  GateSpec g = *this;
  switch (kind) {
    case Kind::Hadamard:
    case Kind::CnotId:
    case Kind::USgn:
    case Kind::CtrlSwap:
      break;  // self-adjoint
    case Kind::CtrlRightMult:
    case Kind::CtrlRightMultFixed:
    case Kind::LeftMultFrom:
      g.inverted = !inverted;
      break;
    case Kind::Unif:
      g.kind = Kind::UnifInverse;
      break;
    case Kind::UnifInverse:
      g.kind = Kind::Unif;
      break;
    case Kind::Dense:
      g.matrix = matrix.adjoint();
      break;
  }
  return g;
}

std::string GateSpec::kind_name() const {
  switch (kind) {
    case Kind::Hadamard: return "hadamard";
    case Kind::CtrlRightMult: return "ctrl_right_mult";
    case Kind::CtrlRightMultFixed: return "ctrl_right_mult_fixed";
    case Kind::CnotId: return "cnot_id";
    case Kind::USgn: return "u_sgn";
    case Kind::CtrlSwap: return "ctrl_swap";
    case Kind::LeftMultFrom: return "left_mult_from";
    case Kind::Unif: return "unif";
    case Kind::UnifInverse: return "unif_inverse";
    case Kind::Dense: return "dense";
  }
  return "?";
}

namespace {
GateSpec make_gate(GateSpec::Kind kind) {
  GateSpec g;
  g.kind = kind;
  return g;
}
}  // namespace

GateSpec GateSpec::hadamard() { return make_gate(Kind::Hadamard); }
GateSpec GateSpec::ctrl_right_mult() { return make_gate(Kind::CtrlRightMult); }
GateSpec GateSpec::ctrl_right_mult_fixed(Perm key) {
  GateSpec g = make_gate(Kind::CtrlRightMultFixed);
  g.fixed = std::move(key);
  return g;
}
GateSpec GateSpec::cnot_id() { return make_gate(Kind::CnotId); }
GateSpec GateSpec::u_sgn() { return make_gate(Kind::USgn); }
GateSpec GateSpec::ctrl_swap() { return make_gate(Kind::CtrlSwap); }
GateSpec GateSpec::left_mult_from() { return make_gate(Kind::LeftMultFrom); }
GateSpec GateSpec::unif() { return make_gate(Kind::Unif); }
GateSpec GateSpec::unif_inverse() { return make_gate(Kind::UnifInverse); }

GateSpec GateSpec::dense(Eigen::MatrixXcd m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("GateSpec::dense: matrix not square");
  }
  const double err = (m.adjoint() * m -
                      Eigen::MatrixXcd::Identity(m.rows(), m.cols()))
                         .cwiseAbs()
                         .maxCoeff();
  if (err > kTol) {
    throw std::invalid_argument("GateSpec::dense: matrix is not unitary");
  }
  GateSpec g = make_gate(Kind::Dense);
  g.matrix = std::move(m);
  return g;
}

GateSpec GateSpec::not_gate() {
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  return dense(std::move(x));
}

GateSpec from_kind_name(const std::string& name) {
  if (name == "hadamard") return GateSpec::hadamard();
  if (name == "ctrl_right_mult") return GateSpec::ctrl_right_mult();
  if (name == "cnot_id") return GateSpec::cnot_id();
  if (name == "u_sgn") return GateSpec::u_sgn();
  if (name == "ctrl_swap") return GateSpec::ctrl_swap();
  if (name == "left_mult_from") return GateSpec::left_mult_from();
  if (name == "unif") return GateSpec::unif();
  if (name == "unif_inverse") return GateSpec::unif_inverse();
  if (name == "not") return GateSpec::not_gate();
  throw std::invalid_argument("unknown gate kind: " + name);
}

namespace {

std::vector<std::size_t> resolve(const RegisterLayout& lay,
                                 const std::vector<std::string>& targets) {
  std::vector<std::size_t> idx;
  idx.reserve(targets.size());
  for (const auto& t : targets) idx.push_back(lay.index_of(t));
  return idx;
}

void require_qubit(const RegisterLayout& lay, std::size_t i, const char* what) {
  if (lay.reg(i).kind != RegKind::Qubit) {
    throw std::invalid_argument(std::string(what) + ": target is not a qubit");
  }
}

const SymmetricGroup& perm_group_of(const RegisterLayout& lay, std::size_t i,
                                    const char* what) {
  if (lay.reg(i).kind != RegKind::PermGroup) {
    throw std::invalid_argument(std::string(what) +
                                ": target is not a permutation register");
  }
  return SymmetricGroup::of_dim(lay.reg(i).dim);
}

PureState apply_hadamard(const PureState& st, std::size_t qi) {
  const RegisterLayout& lay = st.layout();
  require_qubit(lay, qi, "hadamard");
  const std::uint64_t stride = lay.stride(qi);
  const double r = 1.0 / std::sqrt(2.0);
  PureState out(st.layout_ptr());
  out.amps().reserve(st.term_count() * 2);
  for (const auto& [k, v] : st.amps()) {
    const std::uint64_t b = lay.value_at(k, qi);
    const std::uint64_t k0 = k - b * stride;
    out.add(k0, v * r);
    out.add(k0 + stride, (b ? -v : v) * r);
  }
  out.prune();
  return out;
}

PureState apply_phase(const PureState& st, std::size_t ri) {
  const RegisterLayout& lay = st.layout();
  const SymmetricGroup& g = perm_group_of(lay, ri, "u_sgn");
  PureState out(st.layout_ptr());
  out.amps().reserve(st.term_count());
  for (const auto& [k, v] : st.amps()) {
    const int par = g.parity(lay.value_at(k, ri));
    out.set(k, par ? -v : v);
  }
  return out;
}

template <typename KeyFn>
PureState apply_basis_map(const PureState& st, KeyFn&& fn) {
  PureState out(st.layout_ptr());
  out.amps().reserve(st.term_count());
  for (const auto& [k, v] : st.amps()) out.add(fn(k), v);
  out.prune();
  return out;
}

PureState apply_dense(const PureState& st, const Eigen::MatrixXcd& m,
                      const std::vector<std::size_t>& idx) {
  const RegisterLayout& lay = st.layout();
  std::uint64_t block = 1;
  for (std::size_t i : idx) block *= lay.reg(i).dim;
  if (static_cast<std::uint64_t>(m.rows()) != block) {
    throw std::invalid_argument("dense gate: dimension mismatch with targets");
  }
  // Fibers over the untouched registers; local index is mixed-radix over the
  // targets in the order given.
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, cplx>>>
      fibers;
  for (const auto& [k, v] : st.amps()) {
    std::uint64_t rest = k, local = 0;
    for (std::size_t i : idx) {
      const std::uint64_t val = lay.value_at(k, i);
      rest -= val * lay.stride(i);
      local = local * lay.reg(i).dim + val;
    }
    fibers[rest].emplace_back(local, v);
  }
  PureState out(st.layout_ptr());
  for (const auto& [rest, entries] : fibers) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(block));
    for (const auto& [local, v] : entries) {
      x(static_cast<Eigen::Index>(local)) += v;
    }
    Eigen::VectorXcd y = m * x;
    for (std::uint64_t local = 0; local < block; ++local) {
      const cplx v = y(static_cast<Eigen::Index>(local));
      if (std::abs(v) == 0.0) continue;
      std::uint64_t k = rest, rem = local;
      for (std::size_t j = idx.size(); j-- > 0;) {
        const std::uint64_t dim = lay.reg(idx[j]).dim;
        k += (rem % dim) * lay.stride(idx[j]);
        rem /= dim;
      }
      out.add(k, v);
    }
  }
  out.prune();
  return out;
}

// Deterministic orthonormal completion of the uniform-superposition column:
// column 0 is the uniform vector; column k (k >= 1) is
// (e_k - v_k/m_k)/sqrt(1-1/m_k) with v_k = e_0 + sum_{i>=k} e_i, m_k = N-k+1
// (Gram-Schmidt of {uniform, e_1, e_2, ...} in closed form).
void unif_fiber(std::vector<cplx>& x, bool inverse) {
  const std::uint64_t N = x.size();
  const double rootN = std::sqrt(static_cast<double>(N));
  std::vector<cplx> y(N, cplx(0, 0));
  if (!inverse) {
    cplx prefix(0, 0);  // sum_{1 <= k < i} x_k/(m_k c_k)
    for (std::uint64_t i = 1; i < N; ++i) {
      const double m = static_cast<double>(N - i + 1);
      const double c = std::sqrt(1.0 - 1.0 / m);
      y[i] = x[0] / rootN + x[i] * c - prefix;
      prefix += x[i] / (m * c);
    }
    y[0] = x[0] / rootN - prefix;
  } else {
    cplx total(0, 0);
    for (const auto& v : x) total += v;
    y[0] = total / rootN;
    cplx suffix(0, 0);  // sum_{i > k} x_i
    for (std::uint64_t k = N; k-- > 1;) {
      const double m = static_cast<double>(N - k + 1);
      const double c = std::sqrt(1.0 - 1.0 / m);
      y[k] = x[k] * c - (x[0] + suffix) / (m * c);
      suffix += x[k];
    }
  }
  x = std::move(y);
}

PureState apply_unif(const PureState& st, std::size_t ri, bool inverse) {
  const RegisterLayout& lay = st.layout();
  perm_group_of(lay, ri, "unif");
  const std::uint64_t N = lay.reg(ri).dim;
  const std::uint64_t stride = lay.stride(ri);
  std::unordered_map<std::uint64_t, std::vector<cplx>> fibers;
  for (const auto& [k, v] : st.amps()) {
    const std::uint64_t val = lay.value_at(k, ri);
    auto [it, inserted] = fibers.try_emplace(k - val * stride);
    if (inserted) it->second.assign(N, cplx(0, 0));
    it->second[val] += v;
  }
  PureState out(st.layout_ptr());
  const double tol = prune_threshold();
  for (auto& [rest, x] : fibers) {
    unif_fiber(x, inverse);
    for (std::uint64_t j = 0; j < N; ++j) {
      if (std::abs(x[j]) <= tol) continue;
      out.add(rest + j * stride, x[j]);
    }
  }
  return out;
}

}  // namespace

PureState apply_gate(const PureState& state, const GateSpec& gate,
                     const std::vector<std::string>& targets) {
  const RegisterLayout& lay = state.layout();
  const std::vector<std::size_t> idx = resolve(lay, targets);
  if (gate.kind != GateSpec::Kind::Dense &&
      static_cast<int>(idx.size()) != gate.arity()) {
    throw std::invalid_argument("apply_gate: wrong number of targets for " +
                                gate.kind_name());
  }

  switch (gate.kind) {
    case GateSpec::Kind::Hadamard:
      return apply_hadamard(state, idx[0]);

    case GateSpec::Kind::USgn:
      return apply_phase(state, idx[0]);

    case GateSpec::Kind::CtrlRightMult: {
      const std::size_t ci = idx[0], ki = idx[1], ti = idx[2];
      require_qubit(lay, ci, "ctrl_right_mult");
      if (lay.reg(ki).dim != lay.reg(ti).dim) {
        throw std::invalid_argument("ctrl_right_mult: key/target dim mismatch");
      }
      const SymmetricGroup& g = perm_group_of(lay, ti, "ctrl_right_mult");
      const bool inv = gate.inverted;
      return apply_basis_map(state, [&](std::uint64_t k) {
        if (lay.value_at(k, ci) != 1) return k;
        std::uint64_t key = lay.value_at(k, ki);
        if (inv) key = g.inv(key);
        return lay.with_value(k, ti, g.mult(lay.value_at(k, ti), key));
      });
    }

    case GateSpec::Kind::CtrlRightMultFixed: {
      const std::size_t ci = idx[0], ti = idx[1];
      require_qubit(lay, ci, "ctrl_right_mult_fixed");
      const SymmetricGroup& g = perm_group_of(lay, ti, "ctrl_right_mult_fixed");
      if (gate.fixed.size() != g.degree()) {
        throw std::invalid_argument("ctrl_right_mult_fixed: key degree mismatch");
      }
      const Perm key = gate.inverted ? gate.fixed.inverse() : gate.fixed;
      const auto& table = g.right_mult_table(key);
      return apply_basis_map(state, [&](std::uint64_t k) {
        if (lay.value_at(k, ci) != 1) return k;
        return lay.with_value(k, ti, table[lay.value_at(k, ti)]);
      });
    }

    case GateSpec::Kind::CnotId: {
      const std::size_t qi = idx[0], ri = idx[1];
      require_qubit(lay, qi, "cnot_id");
      perm_group_of(lay, ri, "cnot_id");
      const std::uint64_t stride = lay.stride(qi);
      return apply_basis_map(state, [&](std::uint64_t k) {
        if (lay.value_at(k, ri) != 0) return k;  // rank 0 is the identity
        return lay.value_at(k, qi) ? k - stride : k + stride;
      });
    }

    case GateSpec::Kind::CtrlSwap: {
      const std::size_t ai = idx[0], bi = idx[1];
      if (lay.reg(ai).dim != lay.reg(bi).dim) {
        throw std::invalid_argument("ctrl_swap: dimension mismatch");
      }
      return apply_basis_map(state, [&](std::uint64_t k) {
        const std::uint64_t va = lay.value_at(k, ai), vb = lay.value_at(k, bi);
        return lay.with_value(lay.with_value(k, ai, vb), bi, va);
      });
    }

    case GateSpec::Kind::LeftMultFrom: {
      const std::size_t si = idx[0], ti = idx[1];
      if (lay.reg(si).dim != lay.reg(ti).dim) {
        throw std::invalid_argument("left_mult_from: dimension mismatch");
      }
      const SymmetricGroup& g = perm_group_of(lay, ti, "left_mult_from");
      const bool inv = gate.inverted;
      return apply_basis_map(state, [&](std::uint64_t k) {
        std::uint64_t src = lay.value_at(k, si);
        if (inv) src = g.inv(src);
        return lay.with_value(k, ti, g.mult(src, lay.value_at(k, ti)));
      });
    }

    case GateSpec::Kind::Unif:
      return apply_unif(state, idx[0], false);

    case GateSpec::Kind::UnifInverse:
      return apply_unif(state, idx[0], true);

    case GateSpec::Kind::Dense:
      if (idx.empty()) throw std::invalid_argument("dense gate: no targets");
      return apply_dense(state, gate.matrix, idx);
  }
  throw std::logic_error("apply_gate: unhandled kind");
}

}  // namespace qbc
