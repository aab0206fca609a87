#include "compdeco/diffusion.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "compdeco/classical.hpp"
#include "compdeco/errors.hpp"
#include "compdeco/parallel.hpp"

namespace compdeco {

namespace {

double kernel_scale(const ModelConfig& cfg) {
  return cfg.lambda * cfg.lambda * cfg.sigma / (32.0 * cfg.hbar);
}

void exponentiate(DecoherenceSeries& series) {
  series.gamma_values.resize(series.cumulative_d.size());
  series.clamped = false;
  for (std::size_t k = 0; k < series.cumulative_d.size(); ++k) {
    double c = series.cumulative_d[k];
    if (std::abs(c) > kCumulativeClamp) {
      c = std::clamp(c, -kCumulativeClamp, kCumulativeClamp);
      series.clamped = true;
    }
    series.gamma_values[k] = std::exp(-c);
  }
}

// Three-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 3> kOuterNodes{-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kOuterWeights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

}  // namespace

double spectral_density(double omega_tilde, double m, double gamma0, double cutoff) {
  if (omega_tilde < 0.0) throw DomainError("spectral density needs omega_tilde >= 0");
  const double r = omega_tilde / cutoff;
  return 2.0 * m * gamma0 * omega_tilde * std::exp(-r * r);
}

double noise_kernel(const ModelConfig& cfg, double delta_s) {
  const double z = cfg.omega_b * delta_s;
  const double shape =
      cfg.composite.b_kind == OscillatorKind::Inverted ? std::cosh(z) : std::cos(z);
  return kernel_scale(cfg) * shape;
}

DiffusionSample diffusion_coefficient(const ModelConfig& cfg, const TrajectorySpec& traj, double t,
                                      const QuadratureSettings& quad) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("diffusion coefficient needs t >= 0");
  if (t == 0.0) return {};

  const DifferenceTrajectories paths(cfg, traj, t);

  double thermal = 0.0;
  const double g0kt = cfg.gamma0_kb_t();
  if (g0kt != 0.0 && cfg.lambda != 0.0) {
    const double pre = 2.0 * g0kt * cfg.lambda * cfg.lambda /
                       (cfg.hbar * cfg.omega_b * cfg.omega_b);
    const auto integrand = [&](double s) {
      const PhasePoint q = paths.delta_q(s);
      return q.value * q.rate;
    };
    thermal = pre * integrate(integrand, 0.0, t, quad).value;
  }

  const auto kernel_integrand = [&](double s) {
    return noise_kernel(cfg, t - s) * paths.delta_x(s).value;
  };
  double kernel = integrate(kernel_integrand, 0.0, t, quad).value;
  if (cfg.noise_prefactor == PrefactorConvention::Double) kernel *= kernel_scale(cfg);

  return {thermal + kernel, thermal, kernel};
}

DecoherenceSeries decoherence_from_diffusion(
    const TimeGrid& grid, const std::function<DiffusionSample(double)>& diffusion) {
  const std::size_t n = grid.n_steps();
  const double h = grid.spacing();

  DecoherenceSeries out{grid, {}, {}, {}, false};
  out.diffusion.d_values.assign(grid.size(), 0.0);
  out.diffusion.thermal_part.assign(grid.size(), 0.0);
  out.diffusion.kernel_part.assign(grid.size(), 0.0);
  std::vector<double> interior(3 * n, 0.0);

  // Tasks [0, n] are grid nodes, (n, 4n] interior nodes.
  parallel_for(grid.size() + interior.size(), [&](std::size_t task) {
    if (task < grid.size()) {
      const DiffusionSample d = diffusion(grid.time(task));
      out.diffusion.d_values[task] = d.thermal + d.kernel;
      out.diffusion.thermal_part[task] = d.thermal;
      out.diffusion.kernel_part[task] = d.kernel;
      return;
    }
    const std::size_t j = task - grid.size();
    const std::size_t interval = j / 3;
    const double mid = grid.time(interval) + 0.5 * h;
    const DiffusionSample d = diffusion(mid + 0.5 * h * kOuterNodes[j % 3]);
    interior[j] = d.thermal + d.kernel;
  });

  out.cumulative_d.assign(grid.size(), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double step = 0.0;
    for (std::size_t i = 0; i < 3; ++i) step += kOuterWeights[i] * interior[3 * k + i];
    out.cumulative_d[k + 1] = out.cumulative_d[k] + 0.5 * h * step;
  }
  exponentiate(out);
  return out;
}

DecoherenceSeries decoherence_factor(const ModelConfig& cfg, const TrajectorySpec& traj,
                                     const TimeGrid& grid, const QuadratureSettings& quad) {
  return decoherence_from_diffusion(
      grid, [&](double t) { return diffusion_coefficient(cfg, traj, t, quad); });
}

DecoherenceSeries rescaled(const DecoherenceSeries& series, double factor) {
  DecoherenceSeries out = series;
  auto scale = [factor](std::vector<double>& v) {
    for (double& x : v) x *= factor;
  };
  scale(out.cumulative_d);
  scale(out.diffusion.d_values);
  scale(out.diffusion.thermal_part);
  scale(out.diffusion.kernel_part);
  exponentiate(out);
  return out;
}

}  // namespace compdeco
