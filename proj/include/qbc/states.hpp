#pragma once

#include <map>
#include <string>
#include <utility>

#include "qbc/hilbert.hpp"
#include "qbc/perm.hpp"

namespace qbc {

/// Throws std::invalid_argument unless `key` is a fixed-point-free involution.
void require_key(const Perm& key);

/// (|sigma> + (-1)^s |sigma*key>)/sqrt(2) over a single permutation register.
PureState pair_state(const Perm& sigma, int s, const Perm& key,
                     const std::string& reg = "r");

/// The purification (1/sqrt(n!)) sum_sigma |sigma> (x) pair_state(sigma,s,key)
/// over two permutation registers.
PureState pair_purification(int s, const Perm& key,
                            const std::string& label_reg = "r1",
                            const std::string& pair_reg = "r2");

/// The commitment mixture (1/n!) sum_sigma |phi><phi|; equals
/// (I + (-1)^s R_key)/n! with R_key the right-multiplication operator.
DensityOp commitment_state(int s, const Perm& key);

/// 1 iff sigma is the canonical representative of the pair {sigma, sigma*key},
/// i.e. rank(sigma) < rank(sigma*key). The identity always has side 1, and the
/// side flips under right multiplication by the key.
int canonical_side(const Perm& sigma, const Perm& key);

/// Coefficients of a single-register state over the orthonormal pair basis
/// {pair_state(sigma, s, key) : sigma canonical, s in {0,1}}.
struct BasisDecomposition {
  int n = 0;
  Perm key;
  // (canonical sigma rank, s) -> coefficient
  std::map<std::pair<std::uint64_t, int>, cplx> coeff;
  double norm_sq() const;
};

BasisDecomposition decompose(const PureState& state, const Perm& key);

/// Rebuilds the state from its decomposition (round-trip check helper).
PureState recompose(const BasisDecomposition& d, const std::string& reg = "r");

}  // namespace qbc
