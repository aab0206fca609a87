#pragma once

#include <optional>

#include "compdeco/diffusion.hpp"
#include "compdeco/model.hpp"
#include "compdeco/quadrature.hpp"

namespace compdeco {

/// Inputs of the squeezing-based decoherence-time estimate for an unstable A.
struct LyapunovSpec {
  double lambda_lyap{1.0};  ///< Lyapunov coefficient (1/time)
  double t_max_onset{0.0};  ///< time at which decoherence becomes effective
  double d_reference{0.0};  ///< representative diffusion value D_i
};

/// Frequency: Lambda = omega (rate of the sinh solutions of an inverted A).
/// TwoOmegaSquared: Lambda = 2 omega^2, numerically; only meaningful with omega
/// in inverse time units where the two coincide dimensionally.
enum class LyapunovRule { Frequency, TwoOmegaSquared };

struct TimescaleOptions {
  LyapunovRule rule{LyapunovRule::Frequency};
  std::optional<double> lambda_override{};
  double plateau_fraction{0.2};  ///< trailing fraction of the window used for D_i
  double onset_fraction{0.05};   ///< |D| above this fraction of D_i marks the onset
};

double lyapunov_coefficient(const ModelConfig& cfg, const TimescaleOptions& options = {});

/// sigma_p(t) = sigma_p0 exp(Lambda t).
double squeezing_width(double sigma_p0, double lambda_lyap, double t);

/// sigma_c = sqrt(2 D_i / Lambda).
double critical_width(double d_reference, double lambda_lyap);

/// t_D = t_max + ln(sigma_p0 / sigma_c) / Lambda. Not clamped below t_max.
/// Throws DomainError for sigma_c <= 0.
double unstable_decoherence_time(double sigma_p0, double t_max_onset, double sigma_c,
                                 double lambda_lyap);

/// First time Gamma(t) <= epsilon, linearly interpolated between grid points.
std::optional<double> threshold_crossing_time(const DecoherenceSeries& series, double epsilon);

/// Reads D_i and t_max off a series. The analysis window is [0, t_eps] with
/// t_eps the first grid point where Gamma <= epsilon (the whole grid when
/// Gamma never gets there). D_i is the median of D over the trailing
/// plateau_fraction of the window; t_max is the first time |D| exceeds
/// onset_fraction * D_i.
LyapunovSpec extract_lyapunov_spec(const DecoherenceSeries& series, double lambda_lyap,
                                   double epsilon, const TimescaleOptions& options = {});

/// Squeezing estimate end to end: extract_lyapunov_spec + critical_width +
/// unstable_decoherence_time.
double unstable_decoherence_time(const DecoherenceSeries& series, double sigma_p0,
                                 double lambda_lyap, double epsilon,
                                 const TimescaleOptions& options = {});

/// Smallest t with L^2 int_0^t D = 1. The crossing is bracketed on the grid
/// and refined by bisection on the interpolant whose D is linear between grid
/// nodes (pinned to the stored cumulative values). Throws NotReachedError with
/// the attained maximum of L^2 int D when there is no crossing.
double harmonic_decoherence_time(const DecoherenceSeries& series, double separation);

double harmonic_decoherence_time(const ModelConfig& cfg, const TrajectorySpec& traj,
                                 double separation, const TimeGrid& grid,
                                 const QuadratureSettings& quad = {});

}  // namespace compdeco
