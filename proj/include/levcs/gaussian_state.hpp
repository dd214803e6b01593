#pragma once

// Multimode Gaussian states in dimensionless quadratures.
//
// Quadrature ordering is (Q, P, x1, p1, x2, p2, ...) with x = b^dag + b and
// p = i(b^dag - b), so [X_j, X_k] = 2i Omega_jk and the vacuum covariance is
// the identity. Mode 0 is the cavity; modes 1..N are the particles.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace levcs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kPhysicalityTolerance = 1e-9;
inline constexpr double kPairingTolerance = 1e-8;

/// Block-diagonal symplectic form with M blocks [[0, 1], [-1, 0]].
class SymplecticForm {
 public:
  explicit SymplecticForm(std::size_t num_modes);

  std::size_t num_modes() const { return num_modes_; }
  Matrix matrix() const;

 private:
  std::size_t num_modes_;
};

/// Immutable first and second moments of a Gaussian state.
///
/// Construction validates dimensions and symmetry of the covariance; physicality
/// (all symplectic eigenvalues >= 1) is checked separately with
/// `require_physical`, because the allowed slack depends on the caller.
class GaussianState {
 public:
  GaussianState(Vector mean, Matrix cov);

  static GaussianState vacuum(std::size_t num_modes);
  static GaussianState thermal(std::span<const double> occupations);

  std::size_t num_modes() const { return static_cast<std::size_t>(mean_.size() / 2); }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

  /// 2x2 covariance block of a single mode.
  Eigen::Matrix2d mode_cov(std::size_t mode) const;

  friend bool operator==(const GaussianState& a, const GaussianState& b) {
    return a.mean_ == b.mean_ && a.cov_ == b.cov_;
  }

 private:
  Vector mean_;
  Matrix cov_;
};

/// Product state; the modes of `a` come first.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Reduced state on `keep`, in the requested order.
GaussianState partial_trace(const GaussianState& state, std::span<const std::size_t> keep);

/// Sorted symplectic spectrum from the moduli of eig(i Omega V).
std::vector<double> symplectic_eigenvalues(const Matrix& cov);
std::vector<double> symplectic_eigenvalues(const GaussianState& state);

bool is_physical(const GaussianState& state, double slack = kPhysicalityTolerance);

/// Throws NonPhysicalState when the smallest symplectic eigenvalue is below 1 - slack.
void require_physical(const GaussianState& state, double slack = kPhysicalityTolerance);

/// Wigner density of a single-mode state on the lattice xs x ps.
/// Result(i, j) is W(xs[i], ps[j]).
Matrix wigner(const GaussianState& single_mode, std::span<const double> xs,
              std::span<const double> ps);

void to_json(nlohmann::json& j, const GaussianState& state);
GaussianState gaussian_state_from_json(const nlohmann::json& j);

}  // namespace levcs
