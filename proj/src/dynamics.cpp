#include "levcs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include "levcs/error.hpp"

namespace levcs {

namespace {

// Quad precision: the slowest (dark) mode decays ~1e11 times slower than the
// cavity, so double and 80-bit arithmetic lose the long-time variance.
using Quad = boost::multiprecision::float128;
using MatrixQ = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;
using VectorQ = Eigen::Matrix<Quad, Eigen::Dynamic, 1>;

constexpr double kSubstepNorm = 0.5;
constexpr int kMaxTaylorTerms = 80;

MatrixQ to_quad(const Matrix& m) {
  MatrixQ out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

Matrix to_double(const MatrixQ& m) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = static_cast<double>(m(i, j));
  return out;
}

Quad max_abs(const MatrixQ& m) {
  Quad out = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out = std::max<Quad>(out, abs(m(i, j)));
  return out;
}

// Taylor series; the caller guarantees |x|_1 <= kSubstepNorm, so terms fall
// below quad epsilon well before kMaxTaylorTerms.
MatrixQ expm_small(const MatrixQ& x) {
  const auto n = x.rows();
  MatrixQ result = MatrixQ::Identity(n, n);
  MatrixQ term = MatrixQ::Identity(n, n);
  for (int k = 1; k <= kMaxTaylorTerms; ++k) {
    term = (term * x / Quad(k)).eval();
    result += term;
    if (max_abs(term) <= std::numeric_limits<Quad>::epsilon() * 1e-2 * max_abs(result)) return result;
  }
  throw NumericalError("propagator: Taylor series did not converge");
}

void check_dynamics(const LinearDynamics& dyn) {
  const auto n = dyn.drift.rows();
  if (n == 0 || n % 2 != 0 || dyn.drift.cols() != n || dyn.noise.rows() != n || dyn.noise.cols() != n)
    throw InvalidInput("dynamics: A and D must be 2M x 2M");
  if (!dyn.drift.allFinite() || !dyn.noise.allFinite()) throw InvalidInput("dynamics: non-finite A or D");
}

MatrixQ symmetrized(const MatrixQ& m) { return (m + m.transpose()) / Quad(2); }

Matrix symmetrized(const Matrix& m) { return (m + m.transpose()) / 2.0; }

}  // namespace

StabilityReport stability(const LinearDynamics& dyn) {
  check_dynamics(dyn);
  Eigen::EigenSolver<Matrix> solver(dyn.drift, false);
  if (solver.info() != Eigen::Success) throw NumericalError("stability: eigen-decomposition of A failed");
  StabilityReport report;
  report.max_real_part = -std::numeric_limits<double>::infinity();
  for (const auto& ev : solver.eigenvalues()) {
    report.eigenvalues.push_back(ev);
    report.max_real_part = std::max(report.max_real_part, ev.real());
  }
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  report.stable = report.max_real_part < kStabilityThreshold;
  return report;
}

Propagator::Propagator(const LinearDynamics& dyn, double dt) : dt_(dt) {
  check_dynamics(dyn);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("propagator: dt must be > 0");
  const auto n = dyn.drift.rows();
  const MatrixQ a = to_quad(dyn.drift);
  const MatrixQ d = to_quad(dyn.noise);

  // Van Loan: F = exp([[-A, D], [0, A^T]] h); E = F22^T, W = E F12.
  MatrixQ block = MatrixQ::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = -a;
  block.topRightCorner(n, n) = d;
  block.bottomRightCorner(n, n) = a.transpose();
  const double norm = to_double(block).cwiseAbs().colwise().sum().maxCoeff();
  Quad h = dt;
  while (norm * static_cast<double>(h) > kSubstepNorm) {
    h /= 2;
    ++doublings_;
  }
  const MatrixQ f = expm_small(MatrixQ(block * h));
  MatrixQ e = f.bottomRightCorner(n, n).transpose();
  MatrixQ w = symmetrized(MatrixQ(e * f.topRightCorner(n, n)));

  for (std::size_t k = 0; k < doublings_; ++k) {
    w = symmetrized(MatrixQ(e * w * e.transpose() + w));
    e = (e * e).eval();
  }
  transition_ = to_double(e);
  noise_integral_ = to_double(w);
  if (!transition_.allFinite() || !noise_integral_.allFinite())
    throw NumericalError("propagator: overflow in exp(A dt)");
}

Vector Propagator::step_mean(const Vector& mean) const { return transition_ * mean; }

Matrix Propagator::step_cov(const Matrix& cov) const {
  return symmetrized(Matrix(transition_ * cov * transition_.transpose() + noise_integral_));
}

GaussianState Propagator::step(const GaussianState& s) const {
  if (s.mean().size() != transition_.rows()) throw InvalidInput("propagator: state dimension mismatch");
  return GaussianState(step_mean(s.mean()), step_cov(s.cov()));
}

std::size_t step_count(double t_final, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("dt must be > 0");
  if (!(t_final >= dt) || !std::isfinite(t_final)) throw InvalidInput("t_final must be >= dt");
  const double ratio = t_final / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-6 * ratio) {
    std::ostringstream msg;
    msg << "t_final = " << t_final << " is not a whole multiple of dt = " << dt;
    throw InvalidInput(msg.str());
  }
  return static_cast<std::size_t>(steps);
}

Evolution evolve(const LinearDynamics& dyn, const GaussianState& s0, const EvolveOptions& opts) {
  check_dynamics(dyn);
  if (s0.mean().size() != dyn.drift.rows()) throw InvalidInput("evolve: state dimension does not match A");
  if (opts.store_every == 0) throw InvalidInput("evolve: store_every must be >= 1");
  const std::size_t steps = step_count(opts.t_final, opts.dt);
  require_physical(s0, kPhysicalityTolerance);

  const Propagator prop(dyn, opts.dt);
  Evolution evo;
  evo.requested_samples = 1 + steps / opts.store_every + (steps % opts.store_every != 0 ? 1 : 0);
  evo.times.reserve(evo.requested_samples);
  evo.states.reserve(evo.requested_samples);
  evo.times.push_back(0.0);
  evo.states.push_back(s0);

  Vector mean = s0.mean();
  Matrix cov = s0.cov();
  for (std::size_t k = 1; k <= steps; ++k) {
    mean = prop.step_mean(mean);
    cov = prop.step_cov(cov);
    const double t = static_cast<double>(k) * opts.dt;

    std::string problem;
    if (!cov.allFinite() || !mean.allFinite()) {
      problem = "non-finite covariance";
    } else {
      try {
        const double nu = symplectic_eigenvalues(cov).front();
        if (nu < 1.0 - opts.physicality_slack) {
          std::ostringstream msg;
          msg << "smallest symplectic eigenvalue " << nu << " < 1 - " << opts.physicality_slack;
          problem = msg.str();
        }
      } catch (const NumericalError& e) {
        problem = e.what();
      }
    }
    if (!problem.empty()) {
      std::ostringstream msg;
      msg << "evolve: unphysical state at t = " << t << " s (step " << k << "): " << problem;
      if (opts.on_unphysical == UnphysicalPolicy::Abort) throw NonPhysicalState(msg.str());
      evo.truncated = true;
      evo.diagnostic = msg.str();
      return evo;
    }
    if (k % opts.store_every == 0 || k == steps) {
      evo.times.push_back(t);
      evo.states.emplace_back(mean, cov);
    }
  }
  return evo;
}

bool mean_is_zero(const Evolution& evo, double tolerance) {
  for (const auto& s : evo.states)
    if (s.mean().size() > 0 && s.mean().cwiseAbs().maxCoeff() >= tolerance) return false;
  return true;
}

Matrix lyapunov_residual(const LinearDynamics& dyn, const Matrix& cov) {
  return dyn.drift * cov + cov * dyn.drift.transpose() + dyn.noise;
}

SteadyStateResult steady_state(const LinearDynamics& dyn) {
  auto report = stability(dyn);
  if (!report.stable) {
    std::ostringstream msg;
    msg << "no steady state: max Re(eig A) = " << report.max_real_part << " >= " << kStabilityThreshold;
    throw NoSteadyState(msg.str());
  }

  // (A (x) I + I (x) A) vec V = -vec D, column-major vec.
  const auto n = dyn.drift.rows();
  const MatrixQ a = to_quad(dyn.drift);
  const MatrixQ d = to_quad(dyn.noise);
  const MatrixQ id = MatrixQ::Identity(n, n);
  MatrixQ k = MatrixQ::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // I (x) A contributes A on diagonal blocks; A (x) I contributes a_ij * I on block (i, j).
      if (i == j) k.block(i * n, j * n, n, n) += a;
      if (a(i, j) != 0) k.block(i * n, j * n, n, n) += a(i, j) * id;
    }
  }
  const VectorQ rhs = -Eigen::Map<const VectorQ>(d.data(), n * n);

  Eigen::PartialPivLU<MatrixQ> lu(k);
  Quad pivot_min = abs(lu.matrixLU()(0, 0));
  Quad pivot_max = pivot_min;
  for (Eigen::Index i = 1; i < n * n; ++i) {
    pivot_min = std::min<Quad>(pivot_min, abs(lu.matrixLU()(i, i)));
    pivot_max = std::max<Quad>(pivot_max, abs(lu.matrixLU()(i, i)));
  }
  if (!(pivot_min > Quad(1e-28) * pivot_max)) {
    std::ostringstream msg;
    msg << "steady_state: singular Lyapunov system (pivot ratio "
        << static_cast<double>(pivot_min / pivot_max) << ")";
    throw NumericalError(msg.str());
  }
  VectorQ x = lu.solve(rhs);
  x += lu.solve(VectorQ(rhs - k * x));

  const MatrixQ v = symmetrized(MatrixQ(Eigen::Map<const MatrixQ>(x.data(), n, n)));
  const MatrixQ res_q = a * v + v * a.transpose() + d;

  const Matrix vd = to_double(v);
  GaussianState state(Vector::Zero(n), vd);
  require_physical(state, kPhysicalityTolerance);

  SteadyStateResult out{std::move(state), std::move(report)};
  out.residual = static_cast<double>(max_abs(res_q));
  out.residual_stored = lyapunov_residual(dyn, vd).cwiseAbs().maxCoeff();
  out.noise_scale = dyn.noise.cwiseAbs().maxCoeff();
  return out;
}

}  // namespace levcs
