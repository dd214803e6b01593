#include "levcs/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "levcs/error.hpp"

namespace levcs {

SymplecticForm::SymplecticForm(std::size_t num_modes) : num_modes_(num_modes) {
  if (num_modes == 0) throw InvalidInput("symplectic form needs at least one mode");
}

Matrix SymplecticForm::matrix() const {
  const auto n = static_cast<Eigen::Index>(2 * num_modes_);
  Matrix omega = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  return omega;
}

GaussianState::GaussianState(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0)
    throw InvalidInput("mean vector length must be a positive even number");
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size())
    throw InvalidInput("covariance must be 2M x 2M with M = mean.size() / 2");
  if (!cov_.allFinite() || !mean_.allFinite())
    throw InvalidInput("state contains non-finite entries");
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance) {
    std::ostringstream msg;
    msg << "covariance is not symmetric (max |V - V^T| = " << asym << ")";
    throw InvalidInput(msg.str());
  }
}

GaussianState GaussianState::vacuum(std::size_t num_modes) {
  if (num_modes == 0) throw InvalidInput("vacuum state needs at least one mode");
  const auto n = static_cast<Eigen::Index>(2 * num_modes);
  return GaussianState(Vector::Zero(n), Matrix::Identity(n, n));
}

GaussianState GaussianState::thermal(std::span<const double> occupations) {
  if (occupations.empty()) throw InvalidInput("thermal state needs at least one mode");
  const auto n = static_cast<Eigen::Index>(2 * occupations.size());
  Matrix cov = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < occupations.size(); ++k) {
    const double occ = occupations[k];
    if (!(occ >= 0.0) || !std::isfinite(occ))
      throw InvalidInput("thermal occupation must be finite and >= 0");
    const auto i = static_cast<Eigen::Index>(2 * k);
    cov(i, i) = cov(i + 1, i + 1) = 2.0 * occ + 1.0;
  }
  return GaussianState(Vector::Zero(n), std::move(cov));
}

Eigen::Matrix2d GaussianState::mode_cov(std::size_t mode) const {
  if (mode >= num_modes()) throw InvalidInput("mode index out of range");
  const auto i = static_cast<Eigen::Index>(2 * mode);
  return cov_.block<2, 2>(i, i);
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const auto na = a.mean().size();
  const auto nb = b.mean().size();
  Vector mean(na + nb);
  mean << a.mean(), b.mean();
  Matrix cov = Matrix::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState partial_trace(const GaussianState& state, std::span<const std::size_t> keep) {
  if (keep.empty()) throw InvalidInput("partial trace needs a nonempty set of modes to keep");
  std::vector<std::size_t> seen(keep.begin(), keep.end());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw InvalidInput("partial trace: duplicate mode index");
  if (seen.back() >= state.num_modes()) throw InvalidInput("partial trace: mode index out of range");

  const auto n = static_cast<Eigen::Index>(2 * keep.size());
  std::vector<Eigen::Index> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (auto m : keep) {
    rows.push_back(static_cast<Eigen::Index>(2 * m));
    rows.push_back(static_cast<Eigen::Index>(2 * m + 1));
  }
  Vector mean(n);
  Matrix cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mean(i) = state.mean()(rows[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < n; ++j)
      cov(i, j) = state.cov()(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
  }
  return GaussianState(std::move(mean), std::move(cov));
}

std::vector<double> symplectic_eigenvalues(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0 || cov.rows() % 2 != 0)
    throw InvalidInput("covariance must be a nonempty 2M x 2M matrix");
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance)
    throw InvalidInput("covariance is not symmetric");

  // eig(i Omega V) = i * eig(Omega V); the real matrix Omega V has eigenvalues +-i nu.
  const auto modes = static_cast<std::size_t>(cov.rows() / 2);
  const Matrix omega_v = SymplecticForm(modes).matrix() * cov;
  Eigen::EigenSolver<Matrix> solver(omega_v, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen-decomposition of Omega V failed");

  std::vector<double> moduli;
  moduli.reserve(2 * modes);
  for (const auto& ev : solver.eigenvalues()) moduli.push_back(std::abs(ev));
  std::sort(moduli.begin(), moduli.end());

  std::vector<double> nu;
  nu.reserve(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    const double lo = moduli[2 * k];
    const double hi = moduli[2 * k + 1];
    if (hi - lo > kPairingTolerance * std::max(1.0, hi)) {
      std::ostringstream msg;
      msg << "symplectic eigenvalue pairing failed: " << lo << " vs " << hi;
      throw NumericalError(msg.str());
    }
    nu.push_back(lo);
  }
  return nu;
}

std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
  return symplectic_eigenvalues(state.cov());
}

bool is_physical(const GaussianState& state, double slack) {
  const auto nu = symplectic_eigenvalues(state);
  return nu.front() >= 1.0 - slack;
}

void require_physical(const GaussianState& state, double slack) {
  const auto nu = symplectic_eigenvalues(state);
  if (nu.front() < 1.0 - slack) {
    std::ostringstream msg;
    msg << "state is not physical: smallest symplectic eigenvalue " << nu.front()
        << " < 1 - " << slack;
    throw NonPhysicalState(msg.str());
  }
}

Matrix wigner(const GaussianState& single_mode, std::span<const double> xs,
              std::span<const double> ps) {
  if (single_mode.num_modes() != 1) throw InvalidInput("wigner: state must have exactly one mode");
  const Eigen::Matrix2d v = single_mode.cov();
  const double det = v.determinant();
  if (!(det >= 1e-30)) throw InvalidInput("wigner: singular covariance");
  const Eigen::Matrix2d inv = v.inverse();
  const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));
  const Eigen::Vector2d mu = single_mode.mean();

  Matrix out(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ps.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ps[j])) throw InvalidInput("wigner: grid must be finite");
      const Eigen::Vector2d d(xs[i] - mu(0), ps[j] - mu(1));
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          norm * std::exp(-0.5 * d.dot(inv * d));
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const GaussianState& state) {
  const auto n = state.mean().size();
  std::vector<double> mean(state.mean().data(), state.mean().data() + n);
  std::vector<std::vector<double>> cov(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      cov[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = state.cov()(r, c);
  j = nlohmann::json{{"modes", state.num_modes()}, {"mean", mean}, {"cov", cov}};
}

GaussianState gaussian_state_from_json(const nlohmann::json& j) {
  try {
    const auto modes = j.at("modes").get<std::size_t>();
    const auto mean_v = j.at("mean").get<std::vector<double>>();
    const auto cov_v = j.at("cov").get<std::vector<std::vector<double>>>();
    const auto n = 2 * modes;
    if (modes == 0 || mean_v.size() != n || cov_v.size() != n)
      throw InvalidInput("state JSON: dimensions do not match 'modes'");
    Vector mean(static_cast<Eigen::Index>(n));
    Matrix cov(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      mean(static_cast<Eigen::Index>(r)) = mean_v[r];
      if (cov_v[r].size() != n) throw InvalidInput("state JSON: ragged covariance row");
      for (std::size_t c = 0; c < n; ++c)
        cov(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cov_v[r][c];
    }
    return GaussianState(std::move(mean), std::move(cov));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("state JSON: ") + e.what());
  }
}

}  // namespace levcs
