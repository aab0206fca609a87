#pragma once

#include <functional>
#include <vector>

#include "compdeco/model.hpp"
#include "compdeco/quadrature.hpp"

namespace compdeco {

/// Ohmic spectral density with Gaussian cutoff: 2 m gamma0 w exp(-w^2 / cutoff^2).
double spectral_density(double omega_tilde, double m, double gamma0, double cutoff);

/// Noise kernel induced on A by tracing out B:
///   nu(ds) = lambda^2 sigma / (32 hbar) * C_B(Omega ds),
/// C_B = cosh for an inverted B and cos for a harmonic B.
double noise_kernel(const ModelConfig& cfg, double delta_s);

/// One evaluation of D(t) = thermal + kernel.
struct DiffusionSample {
  double total{0.0};
  double thermal{0.0};
  double kernel{0.0};
};

/// D(t) for final time t:
///   thermal = (2 gamma0 k_B T / (hbar Omega^2)) lambda^2 int_0^t dq dq' ds
///   kernel  = int_0^t nu(t - s) dx(s) ds
/// (the kernel term picks up a second lambda^2 sigma / 32 hbar factor under
/// PrefactorConvention::Double). D(0) = 0.
DiffusionSample diffusion_coefficient(const ModelConfig& cfg, const TrajectorySpec& traj, double t,
                                      const QuadratureSettings& quad = {});

struct DiffusionSeries {
  std::vector<double> d_values;
  std::vector<double> thermal_part;
  std::vector<double> kernel_part;
};

/// Gamma(t) = exp(-int_0^t D) sampled on a grid, together with the D samples.
struct DecoherenceSeries {
  TimeGrid grid;
  std::vector<double> gamma_values;
  std::vector<double> cumulative_d;
  DiffusionSeries diffusion;
  bool clamped{false};  ///< some |cumulative_d| exceeded kCumulativeClamp before exponentiation
};

inline constexpr double kCumulativeClamp = 700.0;

/// Builds the series from an arbitrary D(t). Grid nodes and three interior
/// Gauss-Legendre nodes per interval are evaluated in parallel; the
/// cumulative integral is accumulated in index order.
DecoherenceSeries decoherence_from_diffusion(const TimeGrid& grid,
                                             const std::function<DiffusionSample(double)>& diffusion);

DecoherenceSeries decoherence_factor(const ModelConfig& cfg, const TrajectorySpec& traj,
                                     const TimeGrid& grid, const QuadratureSettings& quad = {});

/// Same series with D scaled by `factor` (e.g. (M_A / hbar) L^2), so that
/// Gamma -> Gamma^factor. Clamping is re-applied.
DecoherenceSeries rescaled(const DecoherenceSeries& series, double factor);

}  // namespace compdeco
