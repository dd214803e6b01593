#pragma once

// Independent oracles and randomized property suites shared by the unit tests
// and the acceptance runner.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "levcs/dynamics.hpp"
#include "levcs/gaussian_state.hpp"

namespace levcs::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

/// Product of random single-mode squeezers, phase rotations and two-mode
/// beam splitters; symplectic by construction.
Matrix random_symplectic(std::size_t modes, Rng& rng, double max_squeeze = 1.0);

struct RandomState {
  GaussianState state;
  std::vector<double> nus;  // symplectic spectrum by construction, sorted
  Matrix symplectic;
};

/// S diag(nu_1, nu_1, ...) S^T with nu_k in [1, nu_max] and a random mean.
RandomState random_physical_state(std::size_t modes, Rng& rng, double nu_max = 3.0, double max_squeeze = 1.0);

/// Classical fixed-step 4th-order integration of dV/dt = A V + V A^T + D.
Matrix rk4_covariance(const LinearDynamics& dyn, const Matrix& v0, double t_final, std::size_t steps);

/// Smallest symplectic eigenvalue of the partial transpose of a two-mode
/// covariance, from the complex eigenvalues of Omega V~.
double nu_tilde_min_oracle(const Matrix& cov4);

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::size_t failures = 0;  // boolean invariants that did not hold
  bool passed() const { return failures == 0 && max_error < tolerance; }
};

/// Physicality, partial trace, symplectic-congruence invariance and product
/// structure on random multimode states.
SuiteResult gaussian_core_invariants(std::size_t cases, std::uint64_t seed);

/// Determinant formula for nu~_min vs the eigenvalue oracle on random
/// physical two-mode states.
SuiteResult nu_tilde_suite(std::size_t cases, std::uint64_t seed);

/// Closed-form rates vs the constituent formulas (relative error).
SuiteResult closed_form_suite(std::size_t draws, std::uint64_t seed);

/// |integral of W - 1| by trapezoidal quadrature on random single-mode states.
SuiteResult wigner_normalization_suite(std::size_t cases, std::uint64_t seed);

}  // namespace levcs::testing
