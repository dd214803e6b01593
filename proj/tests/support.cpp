#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "levcs/measures.hpp"
#include "levcs/system_model.hpp"

namespace levcs::testing {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

namespace {

void apply_left(Matrix& s, const Matrix& op) { s = (op * s).eval(); }

Matrix omega_matrix(std::size_t modes) { return SymplecticForm(modes).matrix(); }

}  // namespace

Matrix random_symplectic(std::size_t modes, Rng& rng, double max_squeeze) {
  const auto n = static_cast<Eigen::Index>(2 * modes);
  Matrix s = Matrix::Identity(n, n);
  for (int layer = 0; layer < 2; ++layer) {
    for (std::size_t k = 0; k < modes; ++k) {
      const auto i = static_cast<Eigen::Index>(2 * k);
      const double theta = uniform(rng, 0.0, constants::two_pi);
      const double r = uniform(rng, -max_squeeze, max_squeeze);
      Matrix op = Matrix::Identity(n, n);
      op.block(i, i, 2, 2) << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
      apply_left(s, op);
      op = Matrix::Identity(n, n);
      op(i, i) = std::exp(r);
      op(i + 1, i + 1) = std::exp(-r);
      apply_left(s, op);
    }
    for (std::size_t j = 0; j + 1 < modes; ++j) {
      for (std::size_t k = j + 1; k < modes; ++k) {
        const auto a = static_cast<Eigen::Index>(2 * j);
        const auto b = static_cast<Eigen::Index>(2 * k);
        const double t = uniform(rng, 0.0, constants::two_pi);
        Matrix op = Matrix::Identity(n, n);
        const Eigen::Matrix2d c = std::cos(t) * Eigen::Matrix2d::Identity();
        const Eigen::Matrix2d sn = std::sin(t) * Eigen::Matrix2d::Identity();
        op.block(a, a, 2, 2) = c;
        op.block(b, b, 2, 2) = c;
        op.block(a, b, 2, 2) = sn;
        op.block(b, a, 2, 2) = -sn;
        apply_left(s, op);
      }
    }
  }
  return s;
}

RandomState random_physical_state(std::size_t modes, Rng& rng, double nu_max, double max_squeeze) {
  const auto n = static_cast<Eigen::Index>(2 * modes);
  std::vector<double> nus(modes);
  Vector diag(n);
  for (std::size_t k = 0; k < modes; ++k) {
    nus[k] = uniform(rng, 0.0, 1.0) < 0.25 ? 1.0 : uniform(rng, 1.0, nu_max);
    diag(static_cast<Eigen::Index>(2 * k)) = nus[k];
    diag(static_cast<Eigen::Index>(2 * k + 1)) = nus[k];
  }
  const Matrix s = random_symplectic(modes, rng, max_squeeze);
  Matrix cov = s * diag.asDiagonal() * s.transpose();
  cov = ((cov + cov.transpose()) / 2.0).eval();
  Vector mean(n);
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < n; ++i) mean(i) = normal(rng);
  std::sort(nus.begin(), nus.end());
  return {GaussianState(mean, cov), nus, s};
}

Matrix rk4_covariance(const LinearDynamics& dyn, const Matrix& v0, double t_final, std::size_t steps) {
  const Matrix& a = dyn.drift;
  const Matrix& d = dyn.noise;
  auto rhs = [&](const Matrix& v) -> Matrix { return a * v + v * a.transpose() + d; };
  const double h = t_final / static_cast<double>(steps);
  Matrix v = v0;
  for (std::size_t i = 0; i < steps; ++i) {
    const Matrix k1 = rhs(v);
    const Matrix k2 = rhs(v + 0.5 * h * k1);
    const Matrix k3 = rhs(v + 0.5 * h * k2);
    const Matrix k4 = rhs(v + h * k3);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

double nu_tilde_min_oracle(const Matrix& cov4) {
  Vector flip = Vector::Ones(4);
  flip(3) = -1.0;
  const Matrix vt = flip.asDiagonal() * cov4 * flip.asDiagonal();
  Eigen::EigenSolver<Matrix> solver(omega_matrix(2) * vt, false);
  double out = std::numeric_limits<double>::infinity();
  for (const auto& ev : solver.eigenvalues()) out = std::min(out, std::abs(ev));
  return out;
}

namespace {

double spectrum_error(const std::vector<double>& got, const std::vector<double>& want) {
  if (got.size() != want.size()) return std::numeric_limits<double>::infinity();
  double err = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) err = std::max(err, std::abs(got[i] - want[i]) / want[i]);
  return err;
}

}  // namespace

SuiteResult gaussian_core_invariants(std::size_t cases, std::uint64_t seed) {
  SuiteResult r{"gaussian-core invariants", cases, 0.0, 1e-8, 0};
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t modes = 1 + c % 5;
    const auto rs = random_physical_state(modes, rng);
    const GaussianState& s = rs.state;

    r.max_error = std::max(r.max_error, spectrum_error(symplectic_eigenvalues(s), rs.nus));
    if (!is_physical(s)) ++r.failures;

    // symplectic congruence leaves the spectrum unchanged
    const Matrix s2 = random_symplectic(modes, rng, 0.5);
    const Matrix moved = s2 * s.cov() * s2.transpose();
    r.max_error = std::max(r.max_error, spectrum_error(symplectic_eigenvalues(Matrix((moved + moved.transpose()) / 2.0)), rs.nus));
    const Matrix omega = omega_matrix(modes);
    r.max_error = std::max(r.max_error, (rs.symplectic * omega * rs.symplectic.transpose() - omega).cwiseAbs().maxCoeff() /
                                            std::max(1.0, rs.symplectic.cwiseAbs().maxCoeff()));

    // partial trace on a random ordered subset equals direct block extraction
    std::vector<std::size_t> order(modes);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t keep_count = 1 + static_cast<std::size_t>(uniform(rng, 0.0, 1.0) * static_cast<double>(modes)) % modes;
    const std::vector<std::size_t> keep(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep_count));
    const GaussianState reduced = partial_trace(s, keep);
    for (std::size_t a = 0; a < keep.size(); ++a) {
      for (std::size_t b = 0; b < keep.size(); ++b) {
        const auto ra = static_cast<Eigen::Index>(2 * a);
        const auto rb = static_cast<Eigen::Index>(2 * b);
        const auto fa = static_cast<Eigen::Index>(2 * keep[a]);
        const auto fb = static_cast<Eigen::Index>(2 * keep[b]);
        r.max_error = std::max(r.max_error, (reduced.cov().block(ra, rb, 2, 2) - s.cov().block(fa, fb, 2, 2))
                                                .cwiseAbs()
                                                .maxCoeff());
      }
      r.max_error = std::max(r.max_error, (reduced.mean().segment(static_cast<Eigen::Index>(2 * a), 2) -
                                           s.mean().segment(static_cast<Eigen::Index>(2 * keep[a]), 2))
                                              .cwiseAbs()
                                              .maxCoeff());
    }
    if (!is_physical(reduced)) ++r.failures;

    // scaling every symplectic eigenvalue below 1 breaks physicality
    const double shrink = 0.99 / rs.nus.back();
    if (is_physical(GaussianState(s.mean(), s.cov() * shrink))) ++r.failures;

    // product state spectrum is the union of spectra
    const auto other = random_physical_state(1, rng);
    std::vector<double> joint = rs.nus;
    joint.push_back(other.nus.front());
    std::sort(joint.begin(), joint.end());
    r.max_error = std::max(r.max_error, spectrum_error(symplectic_eigenvalues(tensor(s, other.state)), joint));
  }
  return r;
}

SuiteResult nu_tilde_suite(std::size_t cases, std::uint64_t seed) {
  SuiteResult r{"nu~_min formula vs eigen oracle", cases, 0.0, 1e-8, 0};
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const auto rs = random_physical_state(2, rng, 2.0, 1.5);
    const auto ln = log_negativity(rs.state, 0, 1);
    const double oracle = nu_tilde_min_oracle(rs.state.cov());
    r.max_error = std::max(r.max_error, std::abs(ln.nu_tilde_min - oracle));
    r.max_error = std::max(r.max_error, std::abs(ln.log_negativity - std::max(0.0, -std::log(oracle))));
  }
  return r;
}

SuiteResult closed_form_suite(std::size_t draws, std::uint64_t seed) {
  SuiteResult r{"closed forms vs constituent formulas", draws, 0.0, 1e-6, 0};
  Rng rng(seed);
  for (std::size_t i = 0; i < draws; ++i) {
    ParticleParams p;
    p.radius = uniform(rng, 40e-9, 160e-9);
    p.density = uniform(rng, 1800.0, 2600.0);
    p.refractive_index = uniform(rng, 1.4, 1.6);
    TweezerParams t;
    t.power = uniform(rng, 0.05, 0.8);
    t.wavelength = uniform(rng, 780e-9, 1550e-9);
    t.waist = uniform(rng, 0.5e-6, 1.0e-6);
    CavityParams cav;
    cav.length = uniform(rng, 5e-3, 20e-3);
    cav.waist = uniform(rng, 20e-6, 60e-6);
    EnvironmentParams env;
    env.pressure = std::pow(10.0, uniform(rng, -8.0, -3.0));
    env.temperature = uniform(rng, 4.0, 300.0);

    const double omega = trap_frequencies(p, t).x;
    const double g = coupling_strength(p, t, cav, omega);
    const ThermalRates th = thermal_rates(p, t, env, omega);

    ClosedFormInputs in;
    in.density = *p.density;
    in.radius = p.radius;
    in.power = t.power;
    in.waist = t.waist;
    in.refractive_index = p.refractive_index;
    in.tweezer_wavelength = t.wavelength;
    in.cavity_wavelength = t.wavelength;
    in.cavity_length = cav.length;
    in.cavity_waist = cav.waist;
    in.pressure = env.pressure;
    in.gas_temperature = env.temperature;
    const ClosedFormRates cf = closed_form_rates(in);

    auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    r.max_error = std::max({r.max_error, rel(cf.omega, omega), rel(cf.coupling, g), rel(cf.gas_decoherence, th.gas_decoherence),
                            rel(cf.recoil, th.recoil), rel(cf.coherence_time, th.coherence_time)});
  }
  return r;
}

SuiteResult wigner_normalization_suite(std::size_t cases, std::uint64_t seed) {
  SuiteResult r{"Wigner normalization", cases, 0.0, 1e-3, 0};
  Rng rng(seed);
  constexpr std::size_t kPoints = 301;
  for (std::size_t c = 0; c < cases; ++c) {
    const auto rs = random_physical_state(1, rng, 3.0, 1.0);
    const auto& s = rs.state;
    const Eigen::Matrix2d cov = s.cov();
    const double sx = 8.0 * std::sqrt(cov(0, 0));
    const double sp = 8.0 * std::sqrt(cov(1, 1));
    std::vector<double> xs(kPoints), ps(kPoints);
    for (std::size_t i = 0; i < kPoints; ++i) {
      const double u = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(kPoints - 1);
      xs[i] = s.mean()(0) + sx * u;
      ps[i] = s.mean()(1) + sp * u;
    }
    const Matrix w = wigner(s, xs, ps);
    const double hx = xs[1] - xs[0];
    const double hp = ps[1] - ps[0];
    double total = 0.0;
    for (std::size_t i = 0; i < kPoints; ++i) {
      const double wi = (i == 0 || i + 1 == kPoints) ? 0.5 : 1.0;
      for (std::size_t j = 0; j < kPoints; ++j) {
        const double wj = (j == 0 || j + 1 == kPoints) ? 0.5 : 1.0;
        total += wi * wj * w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
    r.max_error = std::max(r.max_error, std::abs(total * hx * hp - 1.0));
  }
  return r;
}

}  // namespace levcs::testing
