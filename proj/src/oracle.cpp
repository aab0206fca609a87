#include "compdeco/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "compdeco/diffusion.hpp"
#include "compdeco/errors.hpp"

namespace compdeco {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

double value_or_zero(const std::function<double(double)>& f, double t) { return f ? f(t) : 0.0; }

// Exact propagator exp(-i H dt / hbar) for the 3-point finite-difference
// kinetic operator with Dirichlet edges.
Eigen::MatrixXcd kinetic_propagator(std::size_t n, double dx, double mass, double hbar, double dt) {
  const double c = hbar * hbar / (2.0 * mass * dx * dx);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    h(i, i) = 2.0 * c;
    if (i + 1 < h.rows()) {
      h(i, i + 1) = -c;
      h(i + 1, i) = -c;
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    phases(i) = std::exp(-kI * eig.eigenvalues()(i) * dt / hbar);
  }
  const Eigen::MatrixXcd v = eig.eigenvectors().cast<cplx>();
  return v * phases.asDiagonal() * v.transpose();
}

// Central differences along the first (row) index, zero at the edges.
Eigen::MatrixXcd d_row(const Eigen::MatrixXcd& m, double dx) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 1; i + 1 < m.rows(); ++i) out.row(i) = (m.row(i + 1) - m.row(i - 1)) / (2.0 * dx);
  return out;
}

Eigen::MatrixXcd d_col(const Eigen::MatrixXcd& m, double dx) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  for (Eigen::Index j = 1; j + 1 < m.cols(); ++j) out.col(j) = (m.col(j + 1) - m.col(j - 1)) / (2.0 * dx);
  return out;
}

// -Gamma (x - x')(d_x - d_x') rho + i Gamma f (x - x')(d_x + d_x') rho
Eigen::MatrixXcd derivative_rate(const Eigen::MatrixXcd& rho, const Eigen::MatrixXd& separation,
                                 double dx, double gamma, double f) {
  const Eigen::MatrixXcd dx_rho = d_row(rho, dx);
  const Eigen::MatrixXcd dxp_rho = d_col(rho, dx);
  const Eigen::MatrixXcd mix = -gamma * (dx_rho - dxp_rho) + kI * gamma * f * (dx_rho + dxp_rho);
  return separation.cast<cplx>().cwiseProduct(mix);
}

}  // namespace

CoefficientSet engine_coefficients(const ModelConfig& cfg, const TrajectorySpec& traj,
                                   const QuadratureSettings& quad) {
  CoefficientSet coeffs;
  coeffs.d_diff = [cfg, traj, quad](double t) { return diffusion_coefficient(cfg, traj, t, quad).total; };
  return coeffs;
}

double DensityMatrixGrid::trace() const { return rho.diagonal().real().sum() * spacing(); }

double DensityMatrixGrid::hermiticity_residual() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

std::size_t DensityMatrixGrid::nearest_index(double position) const {
  const auto it = std::min_element(x.begin(), x.end(), [position](double a, double b) {
    return std::abs(a - position) < std::abs(b - position);
  });
  return static_cast<std::size_t>(it - x.begin());
}

DensityMatrixGrid empty_grid(std::size_t points, double half_width) {
  if (points < 3) throw DomainError("density-matrix grid needs at least 3 points");
  if (!(half_width > 0.0)) throw DomainError("density-matrix grid needs a positive extent");
  DensityMatrixGrid g;
  g.x.resize(points);
  const double dx = 2.0 * half_width / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g.x[i] = -half_width + dx * static_cast<double>(i);
  const auto n = static_cast<Eigen::Index>(points);
  g.rho = Eigen::MatrixXcd::Zero(n, n);
  return g;
}

namespace {

DensityMatrixGrid pure_state(std::size_t points, double half_width,
                             const std::function<cplx(double)>& psi) {
  DensityMatrixGrid g = empty_grid(points, half_width);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(points));
  for (std::size_t i = 0; i < points; ++i) v(static_cast<Eigen::Index>(i)) = psi(g.x[i]);
  const double norm = v.squaredNorm() * g.spacing();
  v /= std::sqrt(norm);
  g.rho = v * v.adjoint();
  return g;
}

}  // namespace

DensityMatrixGrid superposition_state(std::size_t points, double half_width, double separation,
                                      double width) {
  const double a = 1.0 / (4.0 * width * width);
  const double half = 0.5 * separation;
  return pure_state(points, half_width, [=](double x) {
    return cplx{std::exp(-a * (x - half) * (x - half)) + std::exp(-a * (x + half) * (x + half)), 0.0};
  });
}

DensityMatrixGrid coherent_state(std::size_t points, double half_width, double center,
                                 double momentum, double width, double hbar) {
  const double a = 1.0 / (4.0 * width * width);
  return pure_state(points, half_width, [=](double x) {
    return std::exp(-a * (x - center) * (x - center) + kI * momentum * x / hbar);
  });
}

Eigen::MatrixXcd diffusion_term_rate(const DensityMatrixGrid& state, double d, double m_a,
                                     double hbar) {
  Eigen::MatrixXcd out(state.rho.rows(), state.rho.cols());
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const double sep = state.x[static_cast<std::size_t>(i)] - state.x[static_cast<std::size_t>(j)];
      out(i, j) = -(m_a / hbar) * d * sep * sep * state.rho(i, j);
    }
  }
  return out;
}

OracleTrajectory evolve_density_matrix(const ModelConfig& cfg, const CoefficientSet& coeffs,
                                       const DensityMatrixGrid& initial, double t_final, double dt,
                                       const OracleSettings& settings) {
  if (!(dt > 0.0)) throw StepSizeError("time step must be positive");
  if (!(t_final >= initial.time)) throw DomainError("t_final precedes the initial time");
  if (initial.hermiticity_residual() > 1e-10) throw DomainError("initial density matrix is not Hermitian");

  const std::size_t n = initial.x.size();
  const auto rows = static_cast<Eigen::Index>(n);
  const double dx = initial.spacing();
  const double span = t_final - initial.time;
  const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
  const double h = steps == 0 ? 0.0 : span / static_cast<double>(steps);
  const double frequency_sign = cfg.composite.a_kind == OscillatorKind::Harmonic ? 1.0 : -1.0;

  Eigen::MatrixXd separation(rows, rows);
  Eigen::MatrixXd separation_sq(rows, rows);
  Eigen::MatrixXd square_difference(rows, rows);  // x^2 - x'^2
  for (Eigen::Index j = 0; j < rows; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double xi = initial.x[static_cast<std::size_t>(i)];
      const double xj = initial.x[static_cast<std::size_t>(j)];
      separation(i, j) = xi - xj;
      separation_sq(i, j) = (xi - xj) * (xi - xj);
      square_difference(i, j) = xi * xi - xj * xj;
    }
  }
  const double max_separation = initial.x.back() - initial.x.front();

  Eigen::VectorXd mask = Eigen::VectorXd::Ones(rows);
  if (settings.absorbing_boundary && steps > 0) {
    const double edge = initial.x.back();
    const double inner = edge * (1.0 - settings.taper_fraction);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double ax = std::abs(initial.x[static_cast<std::size_t>(i)]);
      if (ax <= inner || edge <= inner) continue;
      const double xi = std::sin(0.5 * std::numbers::pi * (ax - inner) / (edge - inner));
      mask(i) = std::exp(-settings.absorb_rate * h * xi * xi);
    }
  }
  const Eigen::MatrixXd mask2 = mask * mask.transpose();

  Eigen::MatrixXcd kinetic;
  if (!settings.freeze_kinetic && steps > 0) kinetic = kinetic_propagator(n, dx, cfg.m_a, cfg.hbar, h);

  OracleTrajectory out;
  out.frames.push_back(initial);
  DensityMatrixGrid state = initial;
  const double trace0 = initial.trace();

  for (std::size_t step = 1; step <= steps; ++step) {
    const double t0 = initial.time + h * static_cast<double>(step - 1);
    const double mid = t0 + 0.5 * h;

    const double k_eff = frequency_sign * cfg.omega * cfg.omega + value_or_zero(coeffs.delta_omega2, mid);
    const double phase_scale = 0.5 * cfg.m_a * k_eff * 0.5 * h / cfg.hbar;
    Eigen::MatrixXcd half_potential;
    if (phase_scale != 0.0) {
      half_potential = (-kI * phase_scale * square_difference.cast<cplx>()).array().exp().matrix();
    }

    // Diffusion and derivative terms over a half step centred on `at`.
    auto dissipate = [&](double at) {
      const double sub = 0.5 * h;
      const double d_at = value_or_zero(coeffs.d_diff, at);
      if (d_at != 0.0) {
        const Eigen::MatrixXd decay = (-(cfg.m_a / cfg.hbar) * d_at * sub * separation_sq).array().exp().matrix();
        state.rho = state.rho.cwiseProduct(decay.cast<cplx>());
      }
      const double gamma_at = value_or_zero(coeffs.gamma_diss, at);
      if (gamma_at == 0.0) return;
      const double f_at = value_or_zero(coeffs.f_anom, at);
      const double courant = h * std::abs(gamma_at) * (1.0 + std::abs(f_at)) * max_separation / dx;
      if (courant > settings.cfl) {
        throw StepSizeError("dt=" + std::to_string(h) + " violates the derivative-term bound (" +
                            std::to_string(courant) + " > " + std::to_string(settings.cfl) + ")");
      }
      const Eigen::MatrixXcd k1 = derivative_rate(state.rho, separation, dx, gamma_at, f_at);
      const Eigen::MatrixXcd half = state.rho + 0.5 * sub * k1;
      state.rho += sub * derivative_rate(half, separation, dx, gamma_at, f_at);
    };

    if (half_potential.size() > 0) state.rho = state.rho.cwiseProduct(half_potential);
    dissipate(t0 + 0.25 * h);
    if (kinetic.size() > 0) state.rho = kinetic * state.rho * kinetic.adjoint();
    dissipate(t0 + 0.75 * h);
    if (half_potential.size() > 0) state.rho = state.rho.cwiseProduct(half_potential);

    if (settings.absorbing_boundary) {
      const double before = state.trace();
      state.rho = state.rho.cwiseProduct(mask2.cast<cplx>());
      out.absorbed += before - state.trace();
    }

    state.time = initial.time + h * static_cast<double>(step);
    const double drift = std::abs(state.trace() + out.absorbed - trace0);
    if (!std::isfinite(drift) || drift > settings.trace_tolerance * std::max(1.0, state.time - initial.time)) {
      throw IntegratorFailure("trace drift " + std::to_string(drift) + " at t=" + std::to_string(state.time));
    }
    if (settings.record_every > 0 && step % settings.record_every == 0 && step != steps) {
      out.frames.push_back(state);
    }
  }
  if (steps > 0) out.frames.push_back(state);
  return out;
}

double fringe_visibility(const DensityMatrixGrid& state, const PacketSpec& packets) {
  const auto a = static_cast<Eigen::Index>(state.nearest_index(packets.center_a));
  const auto b = static_cast<Eigen::Index>(state.nearest_index(packets.center_b));
  const double da = state.rho(a, a).real();
  const double db = state.rho(b, b).real();
  const double peak = state.rho.diagonal().real().maxCoeff();
  if (!(peak > 0.0) || da <= packets.floor * peak || db <= packets.floor * peak) {
    throw UndefinedVisibility("diagonal peaks at the branch centres are below the numerical floor");
  }
  return std::min(1.0, std::abs(state.rho(a, b)) / std::sqrt(da * db));
}

}  // namespace compdeco
