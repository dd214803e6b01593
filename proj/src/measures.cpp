#include "levcs/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "levcs/error.hpp"

namespace levcs {

namespace {

constexpr double kDiscriminantSlack = 1e-9;

}  // namespace

BipartitionMeasureResult log_negativity(const GaussianState& state, std::size_t j, std::size_t k) {
  if (j == k) throw InvalidInput("log_negativity: modes must differ");
  if (j >= state.num_modes() || k >= state.num_modes())
    throw InvalidInput("log_negativity: mode index out of range");

  const auto& v = state.cov();
  const auto ij = static_cast<Eigen::Index>(2 * j);
  const auto ik = static_cast<Eigen::Index>(2 * k);
  const Eigen::Matrix2d a = v.block<2, 2>(ij, ij);
  const Eigen::Matrix2d b = v.block<2, 2>(ik, ik);
  const Eigen::Matrix2d c = v.block<2, 2>(ij, ik);
  Eigen::Matrix4d block;
  block << a, c, c.transpose(), b;

  const double sigma = a.determinant() + b.determinant() - 2.0 * c.determinant();
  const double det = block.determinant();
  double disc = sigma * sigma - 4.0 * det;
  if (disc < -kDiscriminantSlack * std::max(1.0, sigma * sigma)) {
    std::ostringstream msg;
    msg << "log_negativity: negative discriminant " << disc << " for modes " << j << "," << k;
    throw NonPhysicalState(msg.str());
  }
  disc = std::max(disc, 0.0);

  // nu_-^2 = sigma/2 - sqrt(disc)/2, evaluated as det / nu_+^2 to avoid cancellation.
  const double nu_plus_sq = 0.5 * (sigma + std::sqrt(disc));
  if (!(nu_plus_sq > 0.0) || !(det > 0.0)) throw NonPhysicalState("log_negativity: degenerate block");
  const double nu_min = std::sqrt(det / nu_plus_sq);

  BipartitionMeasureResult out;
  out.mode_j = j;
  out.mode_k = k;
  out.nu_tilde_min = nu_min;
  out.log_negativity = std::max(0.0, -std::log(nu_min));
  return out;
}

double entropy_function(double nu) {
  if (std::isnan(nu)) throw NumericalError("entropy_function: NaN argument");
  const double half_excess = 0.5 * (std::max(nu, 1.0) - 1.0);
  if (half_excess == 0.0) return 0.0;
  const double plus = (1.0 + half_excess) * std::log1p(half_excess);
  return plus - half_excess * std::log(half_excess);
}

double von_neumann_entropy(const GaussianState& state) {
  double s = 0.0;
  for (double nu : symplectic_eigenvalues(state)) s += entropy_function(nu);
  return s;
}

EntropyReport mutual_information(const GaussianState& state,
                                 const std::vector<std::vector<std::size_t>>& groups) {
  if (groups.empty()) throw InvalidInput("mutual_information: no groups given");
  std::vector<std::size_t> all;
  for (const auto& g : groups) {
    if (g.empty()) throw InvalidInput("mutual_information: empty group");
    all.insert(all.end(), g.begin(), g.end());
  }
  std::vector<std::size_t> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidInput("mutual_information: groups overlap");
  if (sorted.back() >= state.num_modes()) throw InvalidInput("mutual_information: mode out of range");

  EntropyReport report;
  double sum = 0.0;
  for (const auto& g : groups) {
    const double s = von_neumann_entropy(partial_trace(state, g));
    report.group_entropy.push_back(s);
    sum += s;
  }
  report.total_entropy = von_neumann_entropy(partial_trace(state, all));
  report.mutual_information = sum - report.total_entropy;
  return report;
}

EntropyReport total_mutual_information(const GaussianState& state) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t m = 0; m < state.num_modes(); ++m) groups.push_back({m});
  return mutual_information(state, groups);
}

EntropyReport particle_mutual_information(const GaussianState& state) {
  if (state.num_modes() < 2) throw InvalidInput("particle_mutual_information: no particle modes");
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t m = 1; m < state.num_modes(); ++m) groups.push_back({m});
  return mutual_information(state, groups);
}

double squeezing_degree(const GaussianState& state, std::size_t mode) {
  const Eigen::Matrix2d v = state.mode_cov(mode);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(v, Eigen::EigenvaluesOnly);
  const auto ev = solver.eigenvalues();  // ascending
  return ev(0) / ev(1);
}

std::string mode_label(std::size_t mode) { return mode == 0 ? "cav" : std::to_string(mode); }

std::string pair_label(std::size_t j, std::size_t k) { return mode_label(j) + "-" + mode_label(k); }

}  // namespace levcs
