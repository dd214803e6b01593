#pragma once

// Time evolution of first moments and covariance under dV/dt = A V + V A^T + D,
// the steady-state Lyapunov solve, and stability classification.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "levcs/gaussian_state.hpp"
#include "levcs/system_model.hpp"

namespace levcs {

inline constexpr double kStabilityThreshold = -1e-12;
inline constexpr double kEvolutionPhysicalitySlack = 1e-6;
inline constexpr double kZeroMeanTolerance = 1e-12;

struct StabilityReport {
  std::vector<std::complex<double>> eigenvalues;
  double max_real_part = 0.0;
  bool stable = false;  // max_real_part < kStabilityThreshold
};

StabilityReport stability(const LinearDynamics& dyn);

/// Exact one-step map over dt for time-independent A:
///   mu -> E mu,  V -> E V E^T + W,  E = exp(A dt),  W = int_0^dt e^{As} D e^{A^T s} ds.
/// E and W come from the block exponential exp([[-A, D], [0, A^T]] h) at a
/// substep h with |A| h <= 1/2, then repeated doubling up to dt. Both stages
/// run in quad precision.
class Propagator {
 public:
  Propagator(const LinearDynamics& dyn, double dt);

  double dt() const { return dt_; }
  const Matrix& transition() const { return transition_; }
  const Matrix& noise_integral() const { return noise_integral_; }
  std::size_t doublings() const { return doublings_; }

  Vector step_mean(const Vector& mean) const;
  Matrix step_cov(const Matrix& cov) const;
  GaussianState step(const GaussianState& s) const;

 private:
  double dt_;
  std::size_t doublings_ = 0;
  Matrix transition_;
  Matrix noise_integral_;
};

enum class UnphysicalPolicy {
  Abort,     // throw NonPhysicalState
  Truncate,  // stop and flag the run
};

struct EvolveOptions {
  double t_final = 0.0;
  double dt = 1e-9;
  std::size_t store_every = 1;  // the final sample is always stored
  double physicality_slack = kEvolutionPhysicalitySlack;
  UnphysicalPolicy on_unphysical = UnphysicalPolicy::Abort;
};

struct Evolution {
  std::vector<double> times;
  std::vector<GaussianState> states;
  std::size_t requested_samples = 0;  // samples a complete run would store
  bool truncated = false;
  std::string diagnostic;
};

Evolution evolve(const LinearDynamics& dyn, const GaussianState& s0, const EvolveOptions& opts);

/// Number of dt steps covering t_final; rejects t_final that is not a whole
/// multiple of dt (relative mismatch above 1e-6).
std::size_t step_count(double t_final, double dt);

bool mean_is_zero(const Evolution& evo, double tolerance = kZeroMeanTolerance);

struct SteadyStateResult {
  GaussianState state;
  StabilityReport stability;
  double residual = 0.0;          // |A V + V A^T + D|_max of the quad-precision solution
  double residual_stored = 0.0;   // same, for V rounded to double
  double noise_scale = 0.0;       // |D|_max
  double relative_residual() const { return noise_scale > 0.0 ? residual / noise_scale : residual; }
};

/// Solves A V + V A^T + D = 0 by vectorization in quad precision with
/// iterative refinement. Throws NoSteadyState when A is not Hurwitz.
SteadyStateResult steady_state(const LinearDynamics& dyn);

Matrix lyapunov_residual(const LinearDynamics& dyn, const Matrix& cov);

}  // namespace levcs
