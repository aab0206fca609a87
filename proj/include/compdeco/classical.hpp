#pragma once

#include <optional>

#include "compdeco/detail/exp_sum.hpp"
#include "compdeco/model.hpp"

namespace compdeco {

/// A value and its time derivative along a trajectory.
struct PhasePoint {
  double value{0.0};
  double rate{0.0};
};

/// True when the harmonic boundary-value problem on [0, t] is singular:
/// |sin(freq t)| < 1e-8 max(1, |cos(freq t)|).
bool near_caustic(double freq, double t) noexcept;

/// Boundary mode functions on [0, t]:
///   u0(s) = S(f (t - s)) / S(f t),  uf(s) = S(f s) / S(f t)
/// with S = sin for harmonic and sinh for inverted oscillators.
class ModeFunctions {
public:
  /// Throws DomainError for t <= 0 and CausticError near freq t = n pi (harmonic only).
  ModeFunctions(OscillatorKind kind, double freq, double t);

  double initial(double s) const noexcept;
  double final(double s) const noexcept;
  double initial_rate(double s) const noexcept;
  double final_rate(double s) const noexcept;

  OscillatorKind kind() const noexcept { return kind_; }
  double freq() const noexcept { return freq_; }
  double horizon() const noexcept { return t_; }

private:
  OscillatorKind kind_;
  double freq_;
  double t_;
  double denom_;  // S(f t)
};

/// x_cl(s) = x0 S(f(t-s))/S(f t) + xf S(f s)/S(f t).
double free_trajectory(OscillatorKind kind, double freq, double t, double x0, double xf, double s);
double free_trajectory_derivative(OscillatorKind kind, double freq, double t, double x0, double xf,
                                  double s);

/// Convolutions of the A difference trajectory x(u) (boundary values dx0, dxf
/// on [0, t]) with B's propagator S_B(v) = sin / sinh(omega_b v):
///   up_to_s      = int_0^s x(u) S_B(s - u) du
///   up_to_t      = int_0^t x(u) S_B(t - u) du
///   up_to_s_rate = d/ds up_to_s = omega_b int_0^s x(u) C_B(s - u) du
/// All evaluated in closed form.
struct SourceConvolution {
  double up_to_s{0.0};
  double up_to_t{0.0};
  double up_to_s_rate{0.0};
};

SourceConvolution source_convolution(OscillatorKind kind_b, double omega_b, OscillatorKind kind_a,
                                     double omega, double t, double dx0, double dxf, double s);

/// True when |w1^2 - w2^2| < 1e-9 (w1^2 + w2^2); same-kind convolutions then
/// switch to the coincident-frequency limit.
bool resonant(double w1, double w2) noexcept;

/// Closed-form difference trajectories of A and B for one final time t.
///
/// Construct once per t and evaluate at many s; this is the hot path of the
/// diffusion coefficient. B obeys  q'' -+ Omega^2 q = (lambda / M_B) x(s).
class DifferenceTrajectories {
public:
  DifferenceTrajectories(const ModelConfig& cfg, const TrajectorySpec& traj, double t);

  PhasePoint delta_x(double s) const;
  PhasePoint delta_q(double s) const;

  double horizon() const noexcept { return t_; }

private:
  OscillatorKind kind_a_, kind_b_;
  double omega_, omega_b_;
  double kappa_;  // lambda / (M_B Omega)
  double t_;
  EndpointMode mode_;
  double dx0_, dxf_, dq0_, dqf_;
  std::optional<ModeFunctions> modes_a_, modes_b_;
  double source_up_to_t_{0.0};
  bool resonant_{false};
  detail::ExpSum source_, kernel_sine_, kernel_cosine_;

  SourceConvolution convolve(double s) const;
};

/// (Delta x_cl(s), d/ds Delta x_cl(s)) for the final time t.
PhasePoint delta_x_trajectory(const ModelConfig& cfg, const TrajectorySpec& traj, double t,
                              double s);

/// (Delta q_cl(s), d/ds Delta q_cl(s)) for the final time t: homogeneous part
/// from the B endpoints plus lambda / (M_B Omega) times the source convolutions.
PhasePoint delta_q_trajectory(const ModelConfig& cfg, const TrajectorySpec& traj, double t,
                              double s);

}  // namespace compdeco
