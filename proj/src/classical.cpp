#include "compdeco/classical.hpp"

#include <cmath>
#include <string>

#include "compdeco/errors.hpp"
#include "compdeco/detail/exp_sum.hpp"

namespace compdeco {

namespace {

double mode_s(OscillatorKind kind, double z) {
  return kind == OscillatorKind::Harmonic ? std::sin(z) : std::sinh(z);
}

double mode_c(OscillatorKind kind, double z) {
  return kind == OscillatorKind::Harmonic ? std::cos(z) : std::cosh(z);
}

// d/dz C(z): -sin for harmonic, +sinh for inverted.
double mode_c_rate(OscillatorKind kind, double z) {
  return kind == OscillatorKind::Harmonic ? -std::sin(z) : std::sinh(z);
}

constexpr double kCausticTol = 1e-8;
constexpr double kResonanceTol = 1e-9;

void check_interval(double t, double s) {
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  if (!(s >= -slack && s <= t + slack)) {
    throw DomainError("trajectory evaluated at s=" + std::to_string(s) + " outside [0, " +
                      std::to_string(t) + "]");
  }
}

detail::ExpSum boundary_source(const ModeFunctions& modes, double dx0, double dxf) {
  const double inv = 1.0 / mode_s(modes.kind(), modes.freq() * modes.horizon());
  const detail::ExpSum sine = detail::sine_mode(modes.kind(), modes.freq());
  detail::ExpSum src;
  src.append(detail::reflected(sine, modes.horizon()), dx0 * inv);
  src.append(sine, dxf * inv);
  return src;
}

}  // namespace

bool near_caustic(double freq, double t) noexcept {
  const double z = freq * t;
  return std::abs(std::sin(z)) < kCausticTol * std::max(1.0, std::abs(std::cos(z)));
}

bool resonant(double w1, double w2) noexcept {
  const double a = w1 * w1;
  const double b = w2 * w2;
  return std::abs(a - b) < kResonanceTol * (a + b);
}

ModeFunctions::ModeFunctions(OscillatorKind kind, double freq, double t)
    : kind_(kind), freq_(freq), t_(t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("boundary-value mode functions need t > 0, got t=" + std::to_string(t));
  }
  if (!(freq > 0.0) || !std::isfinite(freq)) {
    throw DomainError("mode functions need a positive frequency, got " + std::to_string(freq));
  }
  if (kind == OscillatorKind::Harmonic && near_caustic(freq, t)) {
    throw CausticError("harmonic boundary-value problem is singular: freq*t=" +
                       std::to_string(freq * t) + " is within tolerance of a multiple of pi");
  }
  denom_ = mode_s(kind, freq * t);
}

double ModeFunctions::initial(double s) const noexcept {
  return mode_s(kind_, freq_ * (t_ - s)) / denom_;
}

double ModeFunctions::final(double s) const noexcept { return mode_s(kind_, freq_ * s) / denom_; }

double ModeFunctions::initial_rate(double s) const noexcept {
  return -freq_ * mode_c(kind_, freq_ * (t_ - s)) / denom_;
}

double ModeFunctions::final_rate(double s) const noexcept {
  return freq_ * mode_c(kind_, freq_ * s) / denom_;
}

double free_trajectory(OscillatorKind kind, double freq, double t, double x0, double xf, double s) {
  check_interval(t, s);
  const ModeFunctions m(kind, freq, t);
  return x0 * m.initial(s) + xf * m.final(s);
}

double free_trajectory_derivative(OscillatorKind kind, double freq, double t, double x0, double xf,
                                  double s) {
  check_interval(t, s);
  const ModeFunctions m(kind, freq, t);
  return x0 * m.initial_rate(s) + xf * m.final_rate(s);
}

SourceConvolution source_convolution(OscillatorKind kind_b, double omega_b, OscillatorKind kind_a,
                                     double omega, double t, double dx0, double dxf, double s) {
  check_interval(t, s);
  if (!(omega_b > 0.0)) throw DomainError("omega_b must be positive");
  const ModeFunctions modes_a(kind_a, omega, t);
  const detail::ExpSum src = boundary_source(modes_a, dx0, dxf);
  const bool res = kind_a == kind_b && resonant(omega, omega_b);
  const detail::ExpSum k_sine = detail::sine_mode(kind_b, omega_b);
  const detail::ExpSum k_cosine = detail::cosine_mode(kind_b, omega_b);
  return {detail::convolve(src, k_sine, s, res), detail::convolve(src, k_sine, t, res),
          omega_b * detail::convolve(src, k_cosine, s, res)};
}

DifferenceTrajectories::DifferenceTrajectories(const ModelConfig& cfg, const TrajectorySpec& traj,
                                               double t)
    : kind_a_(cfg.composite.a_kind),
      kind_b_(cfg.composite.b_kind),
      omega_(cfg.omega),
      omega_b_(cfg.omega_b),
      kappa_(cfg.lambda / (cfg.m_b * cfg.omega_b)),
      t_(t),
      mode_(traj.mode),
      dx0_(traj.dx0),
      dxf_(traj.dxf),
      dq0_(traj.dq0),
      dqf_(traj.dqf),
      resonant_(cfg.composite.a_kind == cfg.composite.b_kind && resonant(cfg.omega, cfg.omega_b)) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError("final time must be finite and >= 0, got " + std::to_string(t));
  }
  kernel_sine_ = detail::sine_mode(kind_b_, omega_b_);
  kernel_cosine_ = detail::cosine_mode(kind_b_, omega_b_);
  if (mode_ == EndpointMode::Fixed) {
    modes_a_.emplace(kind_a_, omega_, t);
    modes_b_.emplace(kind_b_, omega_b_, t);
    source_ = boundary_source(*modes_a_, dx0_, dxf_);
    source_up_to_t_ = detail::convolve(source_, kernel_sine_, t, resonant_);
  } else {
    source_.append(detail::cosine_mode(kind_a_, omega_), dx0_);
  }
}

SourceConvolution DifferenceTrajectories::convolve(double s) const {
  return {detail::convolve(source_, kernel_sine_, s, resonant_), source_up_to_t_,
          omega_b_ * detail::convolve(source_, kernel_cosine_, s, resonant_)};
}

PhasePoint DifferenceTrajectories::delta_x(double s) const {
  check_interval(t_, s);
  if (mode_ == EndpointMode::Fixed) {
    return {dx0_ * modes_a_->initial(s) + dxf_ * modes_a_->final(s),
            dx0_ * modes_a_->initial_rate(s) + dxf_ * modes_a_->final_rate(s)};
  }
  return {dx0_ * mode_c(kind_a_, omega_ * s), dx0_ * omega_ * mode_c_rate(kind_a_, omega_ * s)};
}

PhasePoint DifferenceTrajectories::delta_q(double s) const {
  check_interval(t_, s);
  const SourceConvolution conv = convolve(s);
  if (mode_ == EndpointMode::Fixed) {
    const ModeFunctions& b = *modes_b_;
    return {dq0_ * b.initial(s) + dqf_ * b.final(s) + kappa_ * (conv.up_to_s - b.final(s) * conv.up_to_t),
            dq0_ * b.initial_rate(s) + dqf_ * b.final_rate(s) +
                kappa_ * (conv.up_to_s_rate - b.final_rate(s) * conv.up_to_t)};
  }
  return {dq0_ * mode_c(kind_b_, omega_b_ * s) + kappa_ * conv.up_to_s,
          dq0_ * omega_b_ * mode_c_rate(kind_b_, omega_b_ * s) + kappa_ * conv.up_to_s_rate};
}

PhasePoint delta_x_trajectory(const ModelConfig& cfg, const TrajectorySpec& traj, double t,
                              double s) {
  return DifferenceTrajectories(cfg, traj, t).delta_x(s);
}

PhasePoint delta_q_trajectory(const ModelConfig& cfg, const TrajectorySpec& traj, double t,
                              double s) {
  return DifferenceTrajectories(cfg, traj, t).delta_q(s);
}

}  // namespace compdeco
