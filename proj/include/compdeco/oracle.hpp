#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <vector>

#include "compdeco/model.hpp"
#include "compdeco/quadrature.hpp"

namespace compdeco {

/// Time-dependent coefficients of the reduced master equation
///   i hbar drho = [kinetic + 1/2 M_A (+-omega^2 + dOmega^2(t)) (x^2 - x'^2)] rho
///                 - i hbar Gamma(t) (x - x') (d_x - d_x') rho
///                 - i M_A D(t) (x - x')^2 rho
///                 - hbar Gamma(t) f(t) (x - x') (d_x + d_x') rho.
/// Unset members are treated as identically zero.
struct CoefficientSet {
  std::function<double(double)> delta_omega2{};
  std::function<double(double)> gamma_diss{};
  std::function<double(double)> d_diff{};
  std::function<double(double)> f_anom{};
};

/// Coefficients with D(t) taken from diffusion_coefficient and the others zero.
CoefficientSet engine_coefficients(const ModelConfig& cfg, const TrajectorySpec& traj,
                                   const QuadratureSettings& quad = {});

/// rho(x_i, x'_j) on a uniform symmetric grid.
struct DensityMatrixGrid {
  std::vector<double> x;
  Eigen::MatrixXcd rho;
  double time{0.0};

  double spacing() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }
  /// sum_i rho_ii dx
  double trace() const;
  /// max |rho - rho^dagger|
  double hermiticity_residual() const;
  std::size_t nearest_index(double position) const;
};

/// `points` nodes spanning [-half_width, half_width], rho = 0.
DensityMatrixGrid empty_grid(std::size_t points, double half_width);

/// Pure state (g(x - L/2) + g(x + L/2)) with Gaussian packets of position
/// width `width`, normalised to unit trace.
DensityMatrixGrid superposition_state(std::size_t points, double half_width, double separation,
                                      double width);

/// Pure Gaussian packet centred at `center` with mean momentum `momentum`.
DensityMatrixGrid coherent_state(std::size_t points, double half_width, double center,
                                 double momentum, double width, double hbar);

struct OracleSettings {
  bool freeze_kinetic{false};     ///< pure-dephasing seam: drop the kinetic term
  bool absorbing_boundary{true};  ///< cosine-taper absorber in the outer band
  double taper_fraction{0.1};     ///< width of the absorbing band on each side
  double absorb_rate{10.0};       ///< absorber strength (1/time) at the grid edge
  double trace_tolerance{1e-8};   ///< allowed scheme trace drift per unit time
  double cfl{0.5};                ///< bound on dt |Gamma| (1 + |f|) max|x - x'| / dx
  std::size_t record_every{0};    ///< 0 keeps only the first and last frames
};

struct OracleTrajectory {
  std::vector<DensityMatrixGrid> frames;
  double absorbed{0.0};  ///< trace removed by the absorbing boundary

  const DensityMatrixGrid& last() const { return frames.back(); }
};

/// Split-step evolution to t_final with steps of at most dt.
///
/// Each step is the symmetric sequence: half potential, half dissipation,
/// exact kinetic propagator on the grid (unless frozen), half dissipation,
/// half potential. A half dissipation over [t, t + dt/2] applies the factor
/// exp(-(M_A / hbar) D (x - x')^2 dt/2) and the two derivative terms by the
/// explicit midpoint rule, all with coefficients at t + dt/4.
///
/// Throws StepSizeError if dt violates the derivative-term bound and
/// IntegratorFailure if trace (plus absorbed probability) drifts beyond
/// trace_tolerance per unit time.
OracleTrajectory evolve_density_matrix(const ModelConfig& cfg, const CoefficientSet& coeffs,
                                       const DensityMatrixGrid& initial, double t_final, double dt,
                                       const OracleSettings& settings = {});

/// Locations of the two branches of a superposition.
struct PacketSpec {
  double center_a{-1.0};
  double center_b{1.0};
  double floor{1e-12};  ///< diagonal peaks below floor * max diagonal are undefined
};

/// |rho(a, b)| / sqrt(rho(a, a) rho(b, b)) at the grid nodes nearest the branch
/// centres; 1 for a pure superposition, 0 for a fully dephased mixture.
double fringe_visibility(const DensityMatrixGrid& state, const PacketSpec& packets);

/// d rho / dt contributed by the diffusion term alone, -(M_A / hbar) D (x - x')^2 rho.
Eigen::MatrixXcd diffusion_term_rate(const DensityMatrixGrid& state, double d, double m_a,
                                     double hbar);

}  // namespace compdeco
