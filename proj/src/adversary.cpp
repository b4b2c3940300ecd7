#include "qbc/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "qbc/procedures.hpp"
#include "qbc/states.hpp"

namespace qbc {

namespace {

const EncodeRegs kCheatPurify{"A_private", "open1", "open2", "commit"};
const EncodeRegs kScratchEncode{"work", "open1", "open2", "commit"};

const std::vector<std::string> kOpeningRegs = {"A_private", "bit", "open1",
                                               "open2"};

}  // namespace

ProgramStep ProgramStep::gate_step(GateSpec g, std::vector<std::string> t) {
  ProgramStep s;
  s.type = Type::Gate;
  s.gate = std::move(g);
  s.targets = std::move(t);
  return s;
}

ProgramStep ProgramStep::controlled(std::string control_qubit, GateSpec g,
                                    std::vector<std::string> t) {
  ProgramStep s;
  s.type = Type::ControlledGate;
  s.control = std::move(control_qubit);
  s.gate = std::move(g);
  s.targets = std::move(t);
  return s;
}

ProgramStep ProgramStep::subspace(std::vector<std::string> regs,
                                  std::vector<BasisTuple> basis_list,
                                  Eigen::MatrixXcd block) {
  ProgramStep s;
  s.type = Type::Subspace;
  s.regs = std::move(regs);
  s.basis_list = std::move(basis_list);
  s.block = std::move(block);
  return s;
}

namespace {

PureState apply_subspace(const PureState& st, const ProgramStep& step) {
  const RegisterLayout& lay = st.layout();
  std::vector<std::size_t> idx;
  idx.reserve(step.regs.size());
  for (const auto& r : step.regs) idx.push_back(lay.index_of(r));

  // Packed target tuple -> row index in the block.
  std::unordered_map<std::uint64_t, std::size_t> row_of;
  std::vector<std::uint64_t> offsets(step.basis_list.size());
  for (std::size_t j = 0; j < step.basis_list.size(); ++j) {
    const BasisTuple& tup = step.basis_list[j];
    if (tup.size() != idx.size()) {
      throw std::invalid_argument("subspace step: tuple arity mismatch");
    }
    std::uint64_t off = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      off += tup[i] * lay.stride(idx[i]);
    }
    offsets[j] = off;
    if (!row_of.emplace(off, j).second) {
      throw std::invalid_argument("subspace step: duplicate basis tuple");
    }
  }

  PureState out(st.layout_ptr());
  std::unordered_map<std::uint64_t, Eigen::VectorXcd> fibers;
  for (const auto& [k, v] : st.amps()) {
    std::uint64_t local = 0;
    for (std::size_t i : idx) local += lay.value_at(k, i) * lay.stride(i);
    auto it = row_of.find(local);
    if (it == row_of.end()) {
      out.add(k, v);  // outside the subspace: identity
      continue;
    }
    auto [fit, inserted] = fibers.try_emplace(k - local);
    if (inserted) {
      fit->second = Eigen::VectorXcd::Zero(
          static_cast<Eigen::Index>(step.basis_list.size()));
    }
    fit->second(static_cast<Eigen::Index>(it->second)) += v;
  }
  for (const auto& [rest, x] : fibers) {
    Eigen::VectorXcd y = step.block * x;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      const cplx v = y(static_cast<Eigen::Index>(j));
      if (std::abs(v) > prune_threshold()) out.add(rest + offsets[j], v);
    }
  }
  out.prune();
  return out;
}

PureState apply_controlled(const PureState& st, const ProgramStep& step) {
  const RegisterLayout& lay = st.layout();
  const std::size_t ci = lay.index_of(step.control);
  if (lay.reg(ci).dim != 2) {
    throw std::invalid_argument("controlled step: control is not a qubit");
  }
  for (const auto& t : step.targets) {
    if (t == step.control) {
      throw std::invalid_argument("controlled step: control among targets");
    }
  }
  PureState fire(st.layout_ptr()), hold(st.layout_ptr());
  for (const auto& [k, v] : st.amps()) {
    (lay.value_at(k, ci) == 1 ? fire : hold).set(k, v);
  }
  fire = apply_gate(fire, step.gate, step.targets);
  for (const auto& [k, v] : fire.amps()) hold.add(k, v);
  hold.prune();
  return hold;
}

}  // namespace

PureState UnitaryProgram::apply(PureState state) const {
  for (const auto& step : steps) {
    switch (step.type) {
      case ProgramStep::Type::Gate:
        state = apply_gate(state, step.gate, step.targets);
        break;
      case ProgramStep::Type::ControlledGate:
        state = apply_controlled(state, step);
        break;
      case ProgramStep::Type::Subspace:
        state = apply_subspace(state, step);
        break;
    }
  }
  return state;
}

UnitaryProgram UnitaryProgram::adjoint() const {
  UnitaryProgram out;
  out.steps.reserve(steps.size());
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    ProgramStep s = *it;
    switch (s.type) {
      case ProgramStep::Type::Gate:
      case ProgramStep::Type::ControlledGate:
        s.gate = s.gate.adjoint();
        break;
      case ProgramStep::Type::Subspace:
        s.block = s.block.adjoint().eval();
        break;
    }
    out.steps.push_back(std::move(s));
  }
  return out;
}

UnitaryProgram UnitaryProgram::then(const UnitaryProgram& next) const {
  UnitaryProgram out = *this;
  out.steps.insert(out.steps.end(), next.steps.begin(), next.steps.end());
  return out;
}

void UnitaryProgram::validate() const {
  for (const auto& s : steps) {
    if (s.type == ProgramStep::Type::Subspace) {
      if (s.block.rows() != s.block.cols() ||
          static_cast<std::size_t>(s.block.rows()) != s.basis_list.size()) {
        throw std::invalid_argument("program: block/basis size mismatch");
      }
      const double err =
          (s.block.adjoint() * s.block -
           Eigen::MatrixXcd::Identity(s.block.rows(), s.block.cols()))
              .cwiseAbs()
              .maxCoeff();
      if (err > kTol) {
        throw std::invalid_argument("program: subspace block is not unitary");
      }
      std::set<BasisTuple> distinct(s.basis_list.begin(), s.basis_list.end());
      if (distinct.size() != s.basis_list.size()) {
        throw std::invalid_argument("program: duplicate subspace basis tuple");
      }
    } else if (s.type == ProgramStep::Type::ControlledGate) {
      if (s.control.empty()) {
        throw std::invalid_argument("program: controlled step without control");
      }
    }
  }
}

std::vector<std::string> UnitaryProgram::touched() const {
  std::set<std::string> names;
  for (const auto& s : steps) {
    names.insert(s.targets.begin(), s.targets.end());
    names.insert(s.regs.begin(), s.regs.end());
    if (!s.control.empty()) names.insert(s.control);
  }
  return {names.begin(), names.end()};
}

void CheatStrategy::validate() const {
  u1.validate();
  u2_0.validate();
  u2_1.validate();
  static const std::vector<std::string> committing_regs = {
      "A_private", "bit", "open1", "open2", "commit"};
  for (const auto& reg : u1.touched()) {
    if (std::find(committing_regs.begin(), committing_regs.end(), reg) ==
        committing_regs.end()) {
      throw std::invalid_argument(
          "strategy: committing program touches register " + reg +
          " outside Alice's system");
    }
  }
  for (const UnitaryProgram* p : {&u2_0, &u2_1}) {
    for (const auto& reg : p->touched()) {
      if (std::find(kOpeningRegs.begin(), kOpeningRegs.end(), reg) ==
          kOpeningRegs.end()) {
        throw std::invalid_argument(
            "strategy: opening program touches register " + reg +
            " outside A_private/bit/open1/open2");
      }
    }
  }
}

LayoutPtr cheat_layout(int n) {
  return RegisterLayout::make({qubit("A_private"), qubit("bit"),
                               perm_reg("open1", n), perm_reg("open2", n),
                               perm_reg("commit", n), qubit("work")});
}

LayoutPtr recovery_layout(int n) {
  return RegisterLayout::make({qubit("A_private"), qubit("bit"),
                               perm_reg("open1", n), perm_reg("open2", n),
                               perm_reg("commit", n), qubit("work"),
                               perm_reg("instance", n), perm_reg("hidden", n)});
}

PureState initial_cheat_state(const CheatStrategy& s) {
  PureState st = PureState::basis_state(cheat_layout(s.n),
                                        BasisTuple{0, 0, 0, 0, 0, 0});
  return s.u1.apply(std::move(st));
}

namespace {

ProgramStep set_key_step(const Perm& key) {
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  return ProgramStep::subspace({"open2"}, {BasisTuple{0}, BasisTuple{key.rank()}},
                               std::move(x));
}

UnitaryProgram purify_program() {
  UnitaryProgram p;
  p.steps.push_back(ProgramStep::gate_step(GateSpec::hadamard(), {"A_private"}));
  p.steps.push_back(ProgramStep::gate_step(GateSpec::ctrl_right_mult(),
                                           {"A_private", "open2", "commit"}));
  p.steps.push_back(
      ProgramStep::gate_step(GateSpec::cnot_id(), {"A_private", "commit"}));
  p.steps.push_back(ProgramStep::gate_step(GateSpec::not_gate(), {"A_private"}));
  p.steps.push_back(ProgramStep::gate_step(GateSpec::unif(), {"open1"}));
  p.steps.push_back(
      ProgramStep::gate_step(GateSpec::left_mult_from(), {"open1", "commit"}));
  return p;
}

}  // namespace

CheatStrategy honest_strategy(int n, int bit, std::size_t key_index) {
  const KeySet keys = KeySet::enumerate(n);
  CheatStrategy s;
  s.name = bit ? "honest-1" : "honest-0";
  s.n = n;
  if (bit) {
    s.u1.steps.push_back(ProgramStep::gate_step(GateSpec::not_gate(), {"bit"}));
  }
  s.u1.steps.push_back(set_key_step(keys[key_index]));
  s.u1 = s.u1.then(purify_program());
  if (bit) {
    s.u1.steps.push_back(ProgramStep::gate_step(GateSpec::u_sgn(), {"open1"}));
    s.u1.steps.push_back(ProgramStep::gate_step(GateSpec::u_sgn(), {"commit"}));
  }
  return s;
}

CheatStrategy equal_superposition_strategy(int n, std::size_t key_index) {
  const KeySet keys = KeySet::enumerate(n);
  CheatStrategy s;
  s.name = "equal-superposition";
  s.n = n;
  s.u1.steps.push_back(ProgramStep::gate_step(GateSpec::hadamard(), {"bit"}));
  s.u1.steps.push_back(set_key_step(keys[key_index]));
  s.u1 = s.u1.then(purify_program());
  s.u1.steps.push_back(
      ProgramStep::controlled("bit", GateSpec::u_sgn(), {"open1"}));
  s.u1.steps.push_back(
      ProgramStep::controlled("bit", GateSpec::u_sgn(), {"commit"}));
  return s;
}

CheatStrategy key_swap_strategy(int n, std::size_t from_index,
                                std::size_t to_index) {
  const KeySet keys = KeySet::enumerate(n);
  if (from_index == to_index) {
    throw std::invalid_argument("key_swap_strategy: identical key indices");
  }
  CheatStrategy s = honest_strategy(n, 1, from_index);
  s.name = "key-swap";
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  s.u2_0.steps.push_back(ProgramStep::subspace(
      {"bit", "open2"},
      {BasisTuple{1, keys[from_index].rank()}, BasisTuple{0, keys[to_index].rank()}},
      std::move(x)));
  return s;
}

CheatStrategy uniform_key_strategy(int n) {
  const KeySet keys = KeySet::enumerate(n);
  const std::size_t m = keys.size() + 1;
  // Householder reflection sending |id> to the uniform combination of the
  // keys (real symmetric, hence unitary).
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t i = 1; i < m; ++i) {
    u(static_cast<Eigen::Index>(i)) =
        1.0 / std::sqrt(static_cast<double>(keys.size()));
  }
  Eigen::VectorXd v = -u;
  v(0) += 1.0;
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(m, m) -
                      (2.0 / v.squaredNorm()) * (v * v.transpose());
  std::vector<BasisTuple> basis;
  basis.push_back(BasisTuple{0});
  for (const Perm& k : keys.elements()) basis.push_back(BasisTuple{k.rank()});

  CheatStrategy s;
  s.name = "uniform-key";
  s.n = n;
  s.u1.steps.push_back(ProgramStep::gate_step(GateSpec::not_gate(), {"bit"}));
  s.u1.steps.push_back(
      ProgramStep::subspace({"open2"}, std::move(basis), h.cast<cplx>()));
  s.u1 = s.u1.then(purify_program());
  s.u1.steps.push_back(ProgramStep::gate_step(GateSpec::u_sgn(), {"open1"}));
  s.u1.steps.push_back(ProgramStep::gate_step(GateSpec::u_sgn(), {"commit"}));
  return s;
}

CheatStrategy builtin_strategy(const std::string& name, int n) {
  if (name == "honest-0") return honest_strategy(n, 0);
  if (name == "honest-1") return honest_strategy(n, 1);
  if (name == "equal-superposition") return equal_superposition_strategy(n);
  if (name == "uniform-key") return uniform_key_strategy(n);
  if (name.rfind("key-swap", 0) == 0) {
    std::size_t i = 0, j = 1;
    if (name.size() > 8) {
      if (std::sscanf(name.c_str(), "key-swap:%zu:%zu", &i, &j) != 2) {
        throw std::invalid_argument("builtin_strategy: bad key-swap spec");
      }
    }
    return key_swap_strategy(n, i, j);
  }
  throw std::invalid_argument("builtin_strategy: unknown name " + name);
}

std::vector<std::string> builtin_strategy_names() {
  return {"honest-0", "honest-1", "equal-superposition", "key-swap",
          "uniform-key"};
}

CheatStrategy normalize_strategy(const CheatStrategy& s) {
  s.validate();
  if (s.u2_1.empty()) return s;
  const double t0_before = unveil_probability(s, 0);
  const double t1_before = unveil_probability(s, 1);
  CheatStrategy out;
  out.name = s.name;
  out.n = s.n;
  out.u1 = s.u1.then(s.u2_1);
  out.u2_0 = s.u2_1.adjoint().then(s.u2_0);
  const double t0_after = unveil_probability(out, 0);
  const double t1_after = unveil_probability(out, 1);
  if (std::abs(t0_before - t0_after) > kTol ||
      std::abs(t1_before - t1_after) > kTol) {
    throw std::logic_error("normalize_strategy: unveil probabilities changed");
  }
  return out;
}

ProjectorSpec ProjectorSpec::bit_is(int a) {
  ProjectorSpec p;
  p.kind = Kind::BitIs;
  p.s = a;
  return p;
}
ProjectorSpec ProjectorSpec::key_is(Perm key) {
  ProjectorSpec p;
  p.kind = Kind::KeyIs;
  p.key = std::move(key);
  return p;
}
ProjectorSpec ProjectorSpec::label_is(Perm label) {
  ProjectorSpec p;
  p.kind = Kind::LabelIs;
  p.label = std::move(label);
  return p;
}
ProjectorSpec ProjectorSpec::commit_pair_is(Perm label, int s, Perm key) {
  ProjectorSpec p;
  p.kind = Kind::CommitPairIs;
  p.label = std::move(label);
  p.s = s;
  p.key = std::move(key);
  return p;
}
ProjectorSpec ProjectorSpec::purified_pair_is(int s, Perm key) {
  ProjectorSpec p;
  p.kind = Kind::PurifiedPairIs;
  p.s = s;
  p.key = std::move(key);
  return p;
}
ProjectorSpec ProjectorSpec::accept_unveil(int a) {
  ProjectorSpec p;
  p.kind = Kind::AcceptUnveil;
  p.s = a;
  return p;
}
ProjectorSpec ProjectorSpec::key_sector(Perm key, int s) {
  ProjectorSpec p;
  p.kind = Kind::KeySector;
  p.key = std::move(key);
  p.s = s;
  return p;
}

namespace {

// Rank-1 projection of the (open1, commit) block onto the purification of
// (s, key), fiber by fiber over the remaining registers. `restrict_bit_key`
// additionally demands bit = s and open2 = key (the AcceptUnveil terms).
PureState project_purified_pair(const PureState& st, int s, bool sum_over_keys,
                                const Perm& single_key) {
  const RegisterLayout& lay = st.layout();
  const std::size_t i1 = lay.index_of("open1");
  const std::size_t ic = lay.index_of("commit");
  const SymmetricGroup& g = SymmetricGroup::of_dim(lay.reg(ic).dim);
  const std::uint64_t N = g.order();
  const double amp = 1.0 / std::sqrt(2.0 * static_cast<double>(N));

  std::size_t ib = 0, ik = 0;
  if (sum_over_keys) {
    ib = lay.index_of("bit");
    ik = lay.index_of("open2");
  }

  // Group by everything except open1/commit.
  std::unordered_map<std::uint64_t, AmpMap> fibers;
  for (const auto& [k, v] : st.amps()) {
    if (sum_over_keys) {
      if (lay.value_at(k, ib) != static_cast<std::uint64_t>(s)) continue;
      if (!is_fixed_point_free_involution(g.perm(lay.value_at(k, ik)))) continue;
    }
    const std::uint64_t rest = k - lay.value_at(k, i1) * lay.stride(i1) -
                               lay.value_at(k, ic) * lay.stride(ic);
    fibers[rest].emplace(k, v);
  }

  PureState out(st.layout_ptr());
  for (const auto& [rest, fiber] : fibers) {
    const Perm key =
        sum_over_keys ? g.perm(lay.value_at(rest + 0, ik)) : single_key;
    const auto& rmt = g.right_mult_table(key);
    // c = <purification(s,key) | fiber>
    cplx c(0, 0);
    for (const auto& [k, v] : fiber) {
      const std::uint64_t label = lay.value_at(k, i1);
      const std::uint64_t pair = lay.value_at(k, ic);
      if (pair == label) {
        c += amp * v;
      } else if (pair == rmt[label]) {
        c += (s ? -amp : amp) * v;
      }
    }
    if (std::abs(c) <= prune_threshold()) continue;
    for (std::uint64_t r = 0; r < N; ++r) {
      const std::uint64_t base =
          rest + r * lay.stride(i1);
      out.add(base + r * lay.stride(ic), c * amp);
      out.add(base + rmt[r] * lay.stride(ic), (s ? -c : c) * amp);
    }
  }
  out.prune();
  return out;
}

}  // namespace

PureState apply_projector(const ProjectorSpec& p, const PureState& state) {
  const RegisterLayout& lay = state.layout();
  switch (p.kind) {
    case ProjectorSpec::Kind::BitIs:
      return project_values(state, {{"bit", static_cast<std::uint64_t>(p.s)}});
    case ProjectorSpec::Kind::KeyIs:
      return project_values(state, {{"open2", p.key.rank()}});
    case ProjectorSpec::Kind::LabelIs:
      return project_values(state, {{"open1", p.label.rank()}});
    case ProjectorSpec::Kind::CommitPairIs: {
      const std::size_t ic = lay.index_of("commit");
      const SymmetricGroup& g = SymmetricGroup::of_dim(lay.reg(ic).dim);
      const auto& rmt = g.right_mult_table(p.key);
      const std::uint64_t a = p.label.rank(), b = rmt[a];
      const double r = 1.0 / std::sqrt(2.0);
      const double sb = p.s ? -r : r;
      // <pair| fiber> |pair> on the commit register.
      std::unordered_map<std::uint64_t, cplx> overlap;
      for (const auto& [k, v] : state.amps()) {
        const std::uint64_t val = lay.value_at(k, ic);
        const std::uint64_t rest = k - val * lay.stride(ic);
        if (val == a) overlap[rest] += r * v;
        else if (val == b) overlap[rest] += sb * v;
      }
      PureState out(state.layout_ptr());
      for (const auto& [rest, c] : overlap) {
        if (std::abs(c) <= prune_threshold()) continue;
        out.add(rest + a * lay.stride(ic), c * r);
        out.add(rest + b * lay.stride(ic), c * sb);
      }
      return out;
    }
    case ProjectorSpec::Kind::PurifiedPairIs:
      return project_purified_pair(state, p.s, false, p.key);
    case ProjectorSpec::Kind::AcceptUnveil:
      return project_purified_pair(state, p.s, true, Perm());
    case ProjectorSpec::Kind::KeySector: {
      const std::size_t ic = lay.index_of("commit");
      const SymmetricGroup& g = SymmetricGroup::of_dim(lay.reg(ic).dim);
      const auto& rmt = g.right_mult_table(p.key);
      PureState out(state.layout_ptr());
      const double half = 0.5;
      for (const auto& [k, v] : state.amps()) {
        out.add(k, v * half);
        const std::uint64_t val = lay.value_at(k, ic);
        out.add(lay.with_value(k, ic, rmt[val]), (p.s ? -v : v) * half);
      }
      out.prune();
      return out;
    }
  }
  throw std::logic_error("apply_projector: unhandled kind");
}

double unveil_probability(const CheatStrategy& s, int a) {
  s.validate();
  PureState eta = initial_cheat_state(s);
  eta = (a ? s.u2_1 : s.u2_0).apply(std::move(eta));
  return apply_projector(ProjectorSpec::accept_unveil(a), eta).norm_sq();
}

namespace {

/// Measurement-route distillation on an arbitrary layout containing the
/// cheat registers. Returns the sub-normalized surviving state; its squared
/// norm is the success probability.
PureState distill_measurements(PureState st) {
  // Condition on the committed bit being 1.
  st = project_values(st, {{"bit", 1}});
  if (st.norm_sq() < 1e-12) return st;
  // Partition off the s = 1 sector of the commit register.
  st = partition_unitary(std::move(st), "work", "open2", "commit");
  st = project_values(st, {{"work", 1}});
  st = apply_gate(st, GateSpec::not_gate(), {"work"});
  // Decode the pair and keep only the branches whose label matches open1.
  st = flip_sign_sector(std::move(st), {"open1", "commit"});
  st = encode_pair_inverse(std::move(st), kScratchEncode);
  st = project_values(st, {{"work", 0}, {"commit", 0}});
  // Re-encode.
  st = encode_pair(std::move(st), kScratchEncode);
  st = flip_sign_sector(std::move(st), {"open1", "commit"});
  return st;
}

}  // namespace

DistillResult distill(const CheatStrategy& strategy) {
  const CheatStrategy s = normalize_strategy(strategy);
  PureState eta = initial_cheat_state(s);

  PureState survived = distill_measurements(eta);
  const double prob = survived.norm_sq();
  if (prob < 1e-12) {
    throw std::runtime_error("distill: unveil-1 success probability is zero");
  }

  PureState projected = apply_projector(ProjectorSpec::accept_unveil(1), eta);
  const double proj_prob = projected.norm_sq();

  DistillResult res{prob, survived.normalized(), proj_prob, 0.0, false};
  res.projector_fidelity =
      fidelity(res.state, projected.normalized());
  res.routes_agree = std::abs(prob - proj_prob) <= kTol &&
                     std::abs(res.projector_fidelity - 1.0) <= kTol;
  return res;
}

KeySectorProjection project_onto_key_sector(const PureState& distilled,
                                            const Perm& key) {
  require_key(key);
  const RegisterLayout& lay = distilled.layout();
  const SymmetricGroup& g = SymmetricGroup::of_degree(key.size());
  const std::uint64_t N = g.order();
  const KeySet keys = KeySet::enumerate(key.size());
  const double K = static_cast<double>(keys.size());

  KeySectorProjection out{
      apply_projector(ProjectorSpec::key_sector(key, 0), distilled),
      0, 0, 0, 0, 0, 0};
  out.norm_sq = out.state.norm_sq();
  out.key_weight =
      project_values(distilled, {{"open2", key.rank()}}).norm_sq();

  out.claimed_norm_sq =
      (1.0 - out.key_weight) * (K + 1.0) * (K + 1.0) / (2.0 * (K - 1.0) * (K - 1.0));
  out.corrected_norm_sq = (1.0 - out.key_weight) / 2.0;

  // Closed-form reference: per surviving branch (A value, key pi),
  //   coeff * sum_sigma |pair(sigma,1,pi)>_open1 (x) |pair(sigma,0,key)>_commit.
  // Branch weights read off the (open1 = id, commit = id) entries, whose
  // purification amplitude is 1/sqrt(2N).
  const std::size_t ib = lay.index_of("bit");
  const std::size_t i1 = lay.index_of("open1");
  const std::size_t ik = lay.index_of("open2");
  const std::size_t ic = lay.index_of("commit");
  const double purif_amp = 1.0 / std::sqrt(2.0 * static_cast<double>(N));

  std::unordered_map<std::uint64_t, cplx> branch;  // rest-key -> xi coefficient
  for (const auto& [k, v] : distilled.amps()) {
    if (lay.value_at(k, i1) != 0 || lay.value_at(k, ic) != 0) continue;
    if (lay.value_at(k, ib) != 1) continue;
    branch[k] = v / purif_amp;
  }

  auto build_reference = [&](double coeff) {
    PureState ref(distilled.layout_ptr());
    const auto& rmt_pi_cache = g;
    const auto& rmt_key = g.right_mult_table(key);
    for (const auto& [rest, xi] : branch) {
      const Perm pi = g.perm(lay.value_at(rest, ik));
      const auto& rmt_pi = rmt_pi_cache.right_mult_table(pi);
      for (std::uint64_t r = 0; r < N; ++r) {
        const cplx c = xi * coeff * 0.5;  // pair amplitudes multiply to 1/2
        const std::uint64_t base = rest;
        // (|r> - |r pi>)(|r> + |r key>) expanded over (open1, commit).
        const std::uint64_t o1a = r, o1b = rmt_pi[r];
        const std::uint64_t cma = r, cmb = rmt_key[r];
        ref.add(lay.with_value(lay.with_value(base, i1, o1a), ic, cma), c);
        ref.add(lay.with_value(lay.with_value(base, i1, o1a), ic, cmb), c);
        ref.add(lay.with_value(lay.with_value(base, i1, o1b), ic, cma), -c);
        ref.add(lay.with_value(lay.with_value(base, i1, o1b), ic, cmb), -c);
      }
    }
    ref.prune();
    return ref;
  };

  const double omega_claimed =
      (K + 1.0) / (std::sqrt(2.0 * static_cast<double>(N)) * (K - 1.0));
  const double omega_corrected = 1.0 / std::sqrt(2.0 * static_cast<double>(N));
  out.claimed_form_dev = max_entry_dev(out.state, build_reference(omega_claimed));
  out.corrected_form_dev =
      max_entry_dev(out.state, build_reference(omega_corrected));
  return out;
}

RecoveryResult recover_hidden_key(const CheatStrategy& strategy,
                                  const Perm& hidden) {
  require_key(hidden);
  const CheatStrategy s = normalize_strategy(strategy);
  const int n = s.n;
  const SymmetricGroup& g = SymmetricGroup::of_degree(n);
  const std::uint64_t N = g.order();

  PureState st = PureState::basis_state(recovery_layout(n),
                                        BasisTuple{0, 0, 0, 0, 0, 0, 0, 0});
  st = s.u1.apply(std::move(st));
  st = distill_measurements(std::move(st));

  RecoveryResult res;
  res.hidden = hidden;
  res.distill_probability = st.norm_sq();
  res.reject_probability = 1.0 - res.distill_probability;
  if (res.distill_probability < 1e-12) return res;

  // Uncompute the commit slot and the uniform label register.
  st = flip_sign_sector(std::move(st), {"open1", "commit"});
  st = encode_pair_inverse(std::move(st), kScratchEncode);
  st = apply_gate(st, GateSpec::unif_inverse(), {"open1"});

  // Load the instance purification into (instance, hidden); both registers
  // hold id in every surviving branch at this point.
  {
    const RegisterLayout& lay = st.layout();
    const std::size_t ii = lay.index_of("instance");
    const std::size_t ih = lay.index_of("hidden");
    const auto& rmt = g.right_mult_table(hidden);
    const double amp = 1.0 / std::sqrt(2.0 * static_cast<double>(N));
    PureState loaded(st.layout_ptr());
    for (const auto& [k, v] : st.amps()) {
      if (lay.value_at(k, ii) != 0 || lay.value_at(k, ih) != 0) {
        throw std::logic_error("recover_hidden_key: instance slot not clean");
      }
      for (std::uint64_t t = 0; t < N; ++t) {
        const std::uint64_t kt = lay.with_value(k, ih, t);
        loaded.add(lay.with_value(kt, ii, t), v * amp);
        loaded.add(lay.with_value(kt, ii, rmt[t]), v * amp);
      }
    }
    st = std::move(loaded);
  }

  // Swap the manipulable instance register into the opening system, then
  // re-encode the commit slot under the attack's own key.
  st = apply_gate(st, GateSpec::ctrl_swap(), {"open1", "instance"});
  st = encode_pair(std::move(st), kScratchEncode);
  st = flip_sign_sector(std::move(st), {"open1", "commit"});

  st = s.u2_0.apply(std::move(st));

  for (const Outcome& o : measure_analysis(st, {"bit", "open2"}).outcomes) {
    // Weight by the distillation success that produced this state.
    const double p = o.probability;
    if (o.label[0] != 0) {
      res.reject_probability += p;
      continue;
    }
    res.outputs.emplace_back(o.label[1], p);
    if (o.label[1] == hidden.rank()) res.success += p;
  }
  return res;
}

bool BindingReport::all_passed() const {
  return claim1_pass && claim2_pass && composed_pass;
}

BindingReport binding_report(const CheatStrategy& strategy, int n) {
  const CheatStrategy s = normalize_strategy(strategy);
  const KeySet keys = KeySet::enumerate(n);
  const double K = static_cast<double>(keys.size());

  BindingReport r;
  r.strategy = s.name;
  r.n = n;
  r.t0 = unveil_probability(s, 0);
  r.t1 = unveil_probability(s, 1);
  r.excess = r.t0 + r.t1 - 1.0;

  {
    PureState eta = initial_cheat_state(s);
    PureState m1 = apply_projector(ProjectorSpec::accept_unveil(1), eta);
    m1 = s.u2_0.apply(std::move(m1));
    r.norm_sq = apply_projector(ProjectorSpec::accept_unveil(0), m1).norm_sq();
  }

  r.claim2_bound = r.excess * r.excess / 4.0;
  r.claim2_vacuous = r.excess <= kTol;
  r.claim2_pass = r.claim2_vacuous || r.norm_sq >= r.claim2_bound - kTol;

  const double factor = 2.0 * std::pow(1.0 - 2.0 / (K + 1.0), 2);
  r.claim1_bound = factor * r.norm_sq;
  r.claim1_vacuous = r.excess <= kTol;

  double sum = 0.0;
  r.per_key_success.reserve(keys.size());
  for (const Perm& key : keys.elements()) {
    const RecoveryResult rr = recover_hidden_key(s, key);
    r.per_key_success.push_back(rr.success);
    r.best_success = std::max(r.best_success, rr.success);
    sum += rr.success;
    r.distill_probability = rr.distill_probability;
  }
  r.hpsp_success = sum / K;
  r.claim1_pass = r.claim1_vacuous || r.best_success >= r.claim1_bound - kTol;

  r.composed_bound = r.excess * r.excess / 8.0;
  r.composed_vacuous = r.excess <= kTol;
  r.composed_pass =
      r.composed_vacuous ||
      (r.hpsp_success >= r.excess * r.excess * factor / 4.0 - kTol &&
       r.hpsp_success >= r.composed_bound - kTol);

  // Closed-form checks of the key-sector projection on the distilled state.
  try {
    const DistillResult d = distill(s);
    for (const Perm& key : keys.elements()) {
      const KeySectorProjection p = project_onto_key_sector(d.state, key);
      r.sector_claimed_norm_dev = std::max(
          r.sector_claimed_norm_dev, std::abs(p.norm_sq - p.claimed_norm_sq));
      r.sector_corrected_norm_dev =
          std::max(r.sector_corrected_norm_dev,
                   std::abs(p.norm_sq - p.corrected_norm_sq));
      r.sector_claimed_form_dev =
          std::max(r.sector_claimed_form_dev, p.claimed_form_dev);
      r.sector_corrected_form_dev =
          std::max(r.sector_corrected_form_dev, p.corrected_form_dev);
    }
  } catch (const std::runtime_error&) {
    // Unveil-1 impossible; the sector checks are vacuous.
  }
  return r;
}

KeyOracle exhaustive_partition_oracle() {
  return [](const PureState& purification, const std::string& manipulable,
            const std::string& hidden_reg) -> Perm {
    (void)hidden_reg;
    const RegisterLayout& lay = purification.layout();
    const std::size_t im = lay.index_of(manipulable);
    const SymmetricGroup& g = SymmetricGroup::of_dim(lay.reg(im).dim);
    const KeySet keys = KeySet::enumerate(g.degree());
    double best = -1.0;
    Perm best_key;
    for (const Perm& key : keys.elements()) {
      // P[outcome 0] of the partition circuit = ||(I + R_key)/2 psi||^2 on
      // the manipulable register.
      const auto& rmt = g.right_mult_table(key);
      PureState proj(purification.layout_ptr());
      for (const auto& [k, v] : purification.amps()) {
        proj.add(k, v * 0.5);
        proj.add(lay.with_value(k, im, rmt[lay.value_at(k, im)]), v * 0.5);
      }
      const double score = std::abs(proj.norm_sq() - 0.5);
      if (score > best) {
        best = score;
        best_key = key;
      }
    }
    return best_key;
  };
}

KeyOracle always_wrong_oracle() {
  return [](const PureState& purification, const std::string& manipulable,
            const std::string& hidden_reg) -> Perm {
    const Perm truth =
        exhaustive_partition_oracle()(purification, manipulable, hidden_reg);
    const KeySet keys = KeySet::enumerate(truth.size());
    for (const Perm& key : keys.elements()) {
      if (!(key == truth)) return key;
    }
    throw std::logic_error("always_wrong_oracle: single-key set");
  };
}

DistinguishResult distinguish_with_oracle(const KeyOracle& oracle, int n,
                                          const Perm& hidden) {
  require_key(hidden);
  DistinguishResult out;
  double p_guess1[2] = {0.0, 0.0};
  for (int s = 0; s < 2; ++s) {
    // First copy: the oracle names a candidate key.
    PureState copy1 = pair_purification(s, hidden, "hidden_label", "inst");
    const Perm candidate = oracle(copy1, "inst", "hidden_label");
    // Second copy: partition with the candidate key; the outcome is the guess.
    auto layout = RegisterLayout::make(
        {qubit("anc"), perm_reg("label", n), perm_reg("pair", n)});
    PureState copy2(layout);
    {
      const PureState base = pair_purification(s, hidden, "label", "pair");
      for (const auto& [k, v] : base.amps()) copy2.add(k, v);  // anc = 0
    }
    copy2 = apply_gate(copy2, GateSpec::hadamard(), {"anc"});
    copy2 = apply_gate(copy2, GateSpec::ctrl_right_mult_fixed(candidate),
                       {"anc", "pair"});
    copy2 = apply_gate(copy2, GateSpec::hadamard(), {"anc"});
    for (const Outcome& o : measure_analysis(copy2, {"anc"}).outcomes) {
      if (o.label[0] == 1) p_guess1[s] += o.probability;
      if (static_cast<int>(o.label[0]) == s) out.success += o.probability / 2.0;
    }
  }
  out.advantage = std::abs(p_guess1[0] - p_guess1[1]);
  return out;
}

DecoderSpec partition_decoder(int n, const Perm& key) {
  require_key(key);
  DecoderSpec d;
  for (int a = 0; a < 2; ++a) {
    auto layout = RegisterLayout::make(
        {qubit("anc"), perm_reg("label", n), perm_reg("pair", n)});
    PureState st(layout);
    for (const auto& [k, v] : pair_purification(a, key, "label", "pair").amps()) {
      st.add(k, v);
    }
    st = apply_gate(st, GateSpec::hadamard(), {"anc"});
    st = apply_gate(st, GateSpec::ctrl_right_mult_fixed(key), {"anc", "pair"});
    st = apply_gate(st, GateSpec::hadamard(), {"anc"});
    double p = 0.0;
    for (const Outcome& o : measure_analysis(st, {"anc"}).outcomes) {
      if (static_cast<int>(o.label[0]) == a) p += o.probability;
    }
    (a ? d.success1 : d.success0) = p;
  }
  return d;
}

double decoder_advantage(const DecoderSpec& d) {
  return std::abs(1.0 - d.success0 - d.success1);
}

}  // namespace qbc
