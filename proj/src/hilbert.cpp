#include "qbc/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qbc {

namespace {
thread_local double t_prune_threshold = kDefaultPruneTol;
}

double prune_threshold() { return t_prune_threshold; }

PruneGuard::PruneGuard(double threshold) : saved_(t_prune_threshold) {
  t_prune_threshold = threshold;
}

PruneGuard::~PruneGuard() { t_prune_threshold = saved_; }

Register qubit(std::string name) {
  return Register{std::move(name), 2, RegKind::Qubit};
}

Register perm_reg(std::string name, int n) {
  return Register{std::move(name), factorial(n), RegKind::PermGroup};
}

RegisterLayout::RegisterLayout(std::vector<Register> regs)
    : regs_(std::move(regs)) {
  if (regs_.empty()) throw std::invalid_argument("RegisterLayout: empty");
  for (std::size_t i = 0; i < regs_.size(); ++i) {
    if (regs_[i].dim < 2) {
      throw std::invalid_argument("RegisterLayout: register dim < 2");
    }
    for (std::size_t j = i + 1; j < regs_.size(); ++j) {
      if (regs_[i].name == regs_[j].name) {
        throw std::invalid_argument("RegisterLayout: duplicate register name " +
                                    regs_[i].name);
      }
    }
  }
  strides_.assign(regs_.size(), 1);
  for (std::size_t i = regs_.size(); i-- > 1;) {
    strides_[i - 1] = strides_[i] * regs_[i].dim;
    if (strides_[i - 1] / regs_[i].dim != strides_[i]) {
      throw std::invalid_argument("RegisterLayout: basis index overflow");
    }
  }
}

LayoutPtr RegisterLayout::make(std::vector<Register> regs) {
  return std::make_shared<const RegisterLayout>(std::move(regs));
}

std::size_t RegisterLayout::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < regs_.size(); ++i) {
    if (regs_[i].name == name) return i;
  }
  throw std::invalid_argument("RegisterLayout: no register named " + name);
}

bool RegisterLayout::has(const std::string& name) const {
  for (const auto& r : regs_) {
    if (r.name == name) return true;
  }
  return false;
}

std::uint64_t RegisterLayout::pack(const std::vector<std::uint64_t>& values) const {
  if (values.size() != regs_.size()) {
    throw std::invalid_argument("RegisterLayout::pack: arity mismatch");
  }
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= regs_[i].dim) {
      throw std::invalid_argument("RegisterLayout::pack: value out of range");
    }
    key += values[i] * strides_[i];
  }
  return key;
}

std::vector<std::uint64_t> RegisterLayout::unpack(std::uint64_t key) const {
  std::vector<std::uint64_t> values(regs_.size());
  for (std::size_t i = 0; i < regs_.size(); ++i) {
    values[i] = (key / strides_[i]) % regs_[i].dim;
  }
  return values;
}

std::uint64_t RegisterLayout::value_at(std::uint64_t key,
                                       std::size_t reg_index) const {
  return (key / strides_[reg_index]) % regs_[reg_index].dim;
}

std::uint64_t RegisterLayout::with_value(std::uint64_t key, std::size_t reg_index,
                                         std::uint64_t value) const {
  const std::uint64_t old = value_at(key, reg_index);
  return key + (value - old) * strides_[reg_index];
}

bool RegisterLayout::operator==(const RegisterLayout& other) const {
  if (regs_.size() != other.regs_.size()) return false;
  for (std::size_t i = 0; i < regs_.size(); ++i) {
    if (regs_[i].name != other.regs_[i].name ||
        regs_[i].dim != other.regs_[i].dim ||
        regs_[i].kind != other.regs_[i].kind) {
      return false;
    }
  }
  return true;
}

PureState::PureState() {
  static const LayoutPtr placeholder = RegisterLayout::make({qubit("_")});
  layout_ = placeholder;
}

PureState::PureState(LayoutPtr layout) : layout_(std::move(layout)) {
  if (!layout_) throw std::invalid_argument("PureState: null layout");
}

PureState PureState::basis_state(LayoutPtr layout, const BasisTuple& values) {
  PureState st(std::move(layout));
  st.amps_.emplace(st.layout_->pack(values), cplx(1.0, 0.0));
  return st;
}

cplx PureState::amp(std::uint64_t key) const {
  auto it = amps_.find(key);
  return it == amps_.end() ? cplx(0.0, 0.0) : it->second;
}

cplx PureState::amp(const BasisTuple& values) const {
  return amp(layout_->pack(values));
}

void PureState::add(std::uint64_t key, cplx value) {
  auto [it, inserted] = amps_.try_emplace(key, value);
  if (!inserted) it->second += value;
}

void PureState::set(std::uint64_t key, cplx value) { amps_[key] = value; }

double PureState::norm_sq() const {
  double s = 0.0;
  for (const auto& [k, v] : amps_) s += std::norm(v);
  return s;
}

bool PureState::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

PureState PureState::normalized() const {
  const double n2 = norm_sq();
  if (n2 <= 0.0) throw std::runtime_error("PureState::normalized: zero state");
  PureState out(layout_);
  const double inv = 1.0 / std::sqrt(n2);
  for (const auto& [k, v] : amps_) out.amps_.emplace(k, v * inv);
  return out;
}

void PureState::prune(double threshold) {
  if (threshold <= 0.0) return;
  for (auto it = amps_.begin(); it != amps_.end();) {
    if (std::abs(it->second) < threshold) {
      it = amps_.erase(it);
    } else {
      ++it;
    }
  }
}

cplx inner_product(const PureState& a, const PureState& b) {
  if (!(a.layout() == b.layout())) {
    throw std::invalid_argument("inner_product: layout mismatch");
  }
  const bool a_smaller = a.term_count() <= b.term_count();
  const AmpMap& small = a_smaller ? a.amps() : b.amps();
  const AmpMap& large = a_smaller ? b.amps() : a.amps();
  cplx s(0.0, 0.0);
  for (const auto& [k, v] : small) {
    auto it = large.find(k);
    if (it == large.end()) continue;
    // Always conjugate a's amplitude.
    s += a_smaller ? std::conj(v) * it->second : std::conj(it->second) * v;
  }
  return s;
}

PureState tensor(const PureState& a, const PureState& b) {
  std::vector<Register> regs = a.layout().registers();
  for (const auto& r : b.layout().registers()) {
    if (a.layout().has(r.name)) {
      throw std::invalid_argument("tensor: register name collision: " + r.name);
    }
    regs.push_back(r);
  }
  auto layout = RegisterLayout::make(std::move(regs));
  // b's key shifts into the low strides appended after a's registers.
  const std::uint64_t shift = layout->stride(a.layout().count() - 1) /
                              a.layout().stride(a.layout().count() - 1);
  PureState out(layout);
  for (const auto& [ka, va] : a.amps()) {
    for (const auto& [kb, vb] : b.amps()) {
      out.add(ka * shift + kb, va * vb);
    }
  }
  out.prune();
  return out;
}

bool equal_up_to_global_phase(const PureState& a, const PureState& b, double tol) {
  const double na = std::sqrt(a.norm_sq()), nb = std::sqrt(b.norm_sq());
  return std::abs(std::abs(inner_product(a, b)) - na * nb) <= tol;
}

double fidelity(const PureState& a, const PureState& b) {
  return std::norm(inner_product(a, b));
}

double max_entry_dev(const PureState& a, const PureState& b) {
  if (!(a.layout() == b.layout())) {
    throw std::invalid_argument("max_entry_dev: layout mismatch");
  }
  double m = 0.0;
  for (const auto& [k, v] : a.amps()) m = std::max(m, std::abs(v - b.amp(k)));
  for (const auto& [k, v] : b.amps()) m = std::max(m, std::abs(v - a.amp(k)));
  return m;
}

PureState project_values(
    const PureState& state,
    const std::vector<std::pair<std::string, std::uint64_t>>& fixed) {
  const RegisterLayout& lay = state.layout();
  std::vector<std::pair<std::size_t, std::uint64_t>> idx;
  idx.reserve(fixed.size());
  for (const auto& [name, value] : fixed) {
    idx.emplace_back(lay.index_of(name), value);
  }
  PureState out(state.layout_ptr());
  for (const auto& [k, v] : state.amps()) {
    bool keep = true;
    for (const auto& [i, value] : idx) {
      if (lay.value_at(k, i) != value) {
        keep = false;
        break;
      }
    }
    if (keep) out.set(k, v);
  }
  return out;
}

OutcomeDistribution measure_analysis(const PureState& state,
                                     const std::vector<std::string>& regs) {
  const RegisterLayout& lay = state.layout();
  std::vector<std::size_t> idx;
  idx.reserve(regs.size());
  for (const auto& r : regs) idx.push_back(lay.index_of(r));

  // Group amplitudes by the measured registers' content; std::map keeps the
  // outcome order deterministic.
  std::map<BasisTuple, AmpMap> groups;
  for (const auto& [k, v] : state.amps()) {
    BasisTuple label(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) label[i] = lay.value_at(k, idx[i]);
    groups[label].emplace(k, v);
  }

  OutcomeDistribution dist;
  for (auto& [label, amps] : groups) {
    double p = 0.0;
    for (const auto& [k, v] : amps) p += std::norm(v);
    if (p <= 0.0) continue;
    PureState post(state.layout_ptr());
    const double inv = 1.0 / std::sqrt(p);
    for (const auto& [k, v] : amps) post.set(k, v * inv);
    dist.outcomes.push_back(Outcome{label, p, std::move(post)});
    dist.total += p;
  }
  return dist;
}

Outcome measure_sample(const PureState& state,
                       const std::vector<std::string>& regs,
                       std::mt19937_64& rng) {
  OutcomeDistribution dist = measure_analysis(state, regs);
  if (dist.outcomes.empty()) {
    throw std::runtime_error("measure_sample: zero state");
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng) * dist.total;
  double acc = 0.0;
  for (auto& o : dist.outcomes) {
    acc += o.probability;
    if (r < acc) return std::move(o);
  }
  return std::move(dist.outcomes.back());
}

Outcome measure_sample(const PureState& state,
                       const std::vector<std::string>& regs,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return measure_sample(state, regs, rng);
}

DensityOp::DensityOp(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("DensityOp: matrix not square");
  }
}

double DensityOp::trace_real() const { return m_.trace().real(); }

double DensityOp::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOp::min_eigenvalue() const {
  Eigen::MatrixXcd h = (m_ + m_.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h,
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityOp partial_trace(const PureState& state, const std::string& keep) {
  const RegisterLayout& lay = state.layout();
  const std::size_t ki = lay.index_of(keep);
  const std::uint64_t d = lay.reg(ki).dim;
  const std::uint64_t stride = lay.stride(ki);

  // Group by the content of every other register.
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, cplx>>>
      fibers;
  for (const auto& [k, v] : state.amps()) {
    const std::uint64_t val = lay.value_at(k, ki);
    fibers[k - val * stride].emplace_back(val, v);
  }

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                              static_cast<Eigen::Index>(d));
  for (const auto& [rest, entries] : fibers) {
    for (const auto& [a, va] : entries) {
      for (const auto& [b, vb] : entries) {
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
            va * std::conj(vb);
      }
    }
  }
  return DensityOp(std::move(m));
}

}  // namespace qbc
