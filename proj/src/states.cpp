#include "qbc/states.hpp"

#include <cmath>
#include <stdexcept>

#include "qbc/gates.hpp"

namespace qbc {

void require_key(const Perm& key) {
  if (!is_fixed_point_free_involution(key)) {
    throw std::invalid_argument(
        "key must be a fixed-point-free involution");
  }
}

PureState pair_state(const Perm& sigma, int s, const Perm& key,
                     const std::string& reg) {
  require_key(key);
  if (sigma.size() != key.size()) {
    throw std::invalid_argument("pair_state: size mismatch");
  }
  auto layout = RegisterLayout::make({perm_reg(reg, key.size())});
  PureState st(layout);
  const double r = 1.0 / std::sqrt(2.0);
  st.add(sigma.rank(), r);
  st.add(compose(sigma, key).rank(), s ? -r : r);
  return st;
}

PureState pair_purification(int s, const Perm& key, const std::string& label_reg,
                            const std::string& pair_reg) {
  require_key(key);
  const int n = key.size();
  const SymmetricGroup& g = SymmetricGroup::of_degree(n);
  const std::uint64_t N = g.order();
  auto layout =
      RegisterLayout::make({perm_reg(label_reg, n), perm_reg(pair_reg, n)});
  const auto& rmt = g.right_mult_table(key);
  PureState st(layout);
  st.amps().reserve(2 * N);
  const double amp = 1.0 / std::sqrt(2.0 * static_cast<double>(N));
  for (std::uint64_t r = 0; r < N; ++r) {
    const std::uint64_t base = r * N;
    st.add(base + r, amp);
    st.add(base + rmt[r], s ? -amp : amp);
  }
  return st;
}

DensityOp commitment_state(int s, const Perm& key) {
  require_key(key);
  const SymmetricGroup& g = SymmetricGroup::of_degree(key.size());
  const std::uint64_t N = g.order();
  const auto& rmt = g.right_mult_table(key);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(N),
                                              static_cast<Eigen::Index>(N));
  const double w = 1.0 / static_cast<double>(N);
  for (std::uint64_t r = 0; r < N; ++r) {
    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) += w;
    m(static_cast<Eigen::Index>(rmt[r]), static_cast<Eigen::Index>(r)) +=
        s ? -w : w;
  }
  return DensityOp(std::move(m));
}

int canonical_side(const Perm& sigma, const Perm& key) {
  require_key(key);
  return sigma.rank() < compose(sigma, key).rank() ? 1 : 0;
}

double BasisDecomposition::norm_sq() const {
  double s = 0.0;
  for (const auto& [k, v] : coeff) s += std::norm(v);
  return s;
}

BasisDecomposition decompose(const PureState& state, const Perm& key) {
  require_key(key);
  if (state.layout().count() != 1) {
    throw std::invalid_argument("decompose: expected a single-register state");
  }
  const SymmetricGroup& g = SymmetricGroup::of_dim(state.layout().reg(0).dim);
  if (g.degree() != key.size()) {
    throw std::invalid_argument("decompose: key degree mismatch");
  }
  const auto& rmt = g.right_mult_table(key);

  BasisDecomposition d;
  d.n = g.degree();
  d.key = key;
  const double r = 1.0 / std::sqrt(2.0);
  for (const auto& [k, v] : state.amps()) {
    const std::uint64_t mate = rmt[k];
    const std::uint64_t rep = std::min<std::uint64_t>(k, mate);
    // <pair(rep,s)|k> is 1/sqrt(2) for s=0 and +-1/sqrt(2) for s=1, the sign
    // depending on whether k is the representative.
    const double sign1 = (k == rep) ? 1.0 : -1.0;
    d.coeff[{rep, 0}] += v * r;
    d.coeff[{rep, 1}] += v * r * sign1;
  }
  for (auto it = d.coeff.begin(); it != d.coeff.end();) {
    if (std::abs(it->second) < prune_threshold()) {
      it = d.coeff.erase(it);
    } else {
      ++it;
    }
  }
  return d;
}

PureState recompose(const BasisDecomposition& d, const std::string& reg) {
  const SymmetricGroup& g = SymmetricGroup::of_degree(d.n);
  const auto& rmt = g.right_mult_table(d.key);
  auto layout = RegisterLayout::make({perm_reg(reg, d.n)});
  PureState st(layout);
  const double r = 1.0 / std::sqrt(2.0);
  for (const auto& [label, c] : d.coeff) {
    const auto& [rep, s] = label;
    st.add(rep, c * r);
    st.add(rmt[rep], (s ? -c : c) * r);
  }
  st.prune();
  return st;
}

}  // namespace qbc
