#pragma once

// Informational measures on Gaussian states. All logarithms are natural.

#include <cstddef>
#include <string>
#include <vector>

#include "levcs/gaussian_state.hpp"

namespace levcs {

struct BipartitionMeasureResult {
  std::size_t mode_j = 0;
  std::size_t mode_k = 0;
  double nu_tilde_min = 1.0;  // smallest symplectic eigenvalue of the partial transpose
  double log_negativity = 0.0;
};

struct EntropyReport {
  std::vector<double> group_entropy;  // S of each group's reduced state
  double total_entropy = 0.0;         // S of the union of all groups
  double mutual_information = 0.0;    // sum(group_entropy) - total_entropy
};

/// Logarithmic negativity between modes j and k from the 4x4 block
/// [[A, C], [C^T, B]] via sigma = det A + det B - 2 det C.
BipartitionMeasureResult log_negativity(const GaussianState& state, std::size_t j, std::size_t k);

/// g(x) = (x+1)/2 ln((x+1)/2) - (x-1)/2 ln((x-1)/2), clamped to x >= 1.
double entropy_function(double nu);

double von_neumann_entropy(const GaussianState& state);

/// Mutual information sum_g S(g) - S(union of groups). Groups must be
/// nonempty and pairwise disjoint.
EntropyReport mutual_information(const GaussianState& state,
                                 const std::vector<std::vector<std::size_t>>& groups);

/// Every mode a singleton group (I_total).
EntropyReport total_mutual_information(const GaussianState& state);

/// Every particle mode a singleton, cavity excluded (I_particles).
EntropyReport particle_mutual_information(const GaussianState& state);

/// min(eig) / max(eig) of the mode's 2x2 covariance.
double squeezing_degree(const GaussianState& state, std::size_t mode);

/// "cav" for mode 0, otherwise the particle number.
std::string mode_label(std::size_t mode);
std::string pair_label(std::size_t j, std::size_t k);

}  // namespace levcs
