#include "compdeco/timescales.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "compdeco/errors.hpp"

namespace compdeco {

double lyapunov_coefficient(const ModelConfig& cfg, const TimescaleOptions& options) {
  if (options.lambda_override) {
    if (!(*options.lambda_override > 0.0)) throw DomainError("lambda_lyap must be > 0");
    return *options.lambda_override;
  }
  return options.rule == LyapunovRule::Frequency ? cfg.omega : 2.0 * cfg.omega * cfg.omega;
}

double squeezing_width(double sigma_p0, double lambda_lyap, double t) {
  return sigma_p0 * std::exp(lambda_lyap * t);
}

double critical_width(double d_reference, double lambda_lyap) {
  if (d_reference < 0.0) throw DomainError("critical width needs D_i >= 0");
  if (!(lambda_lyap > 0.0)) throw DomainError("critical width needs Lambda > 0");
  return std::sqrt(2.0 * d_reference / lambda_lyap);
}

double unstable_decoherence_time(double sigma_p0, double t_max_onset, double sigma_c,
                                 double lambda_lyap) {
  if (!(sigma_c > 0.0)) throw DomainError("unstable decoherence time needs sigma_c > 0");
  if (!(sigma_p0 > 0.0)) throw DomainError("unstable decoherence time needs sigma_p0 > 0");
  if (!(lambda_lyap > 0.0)) throw DomainError("unstable decoherence time needs Lambda > 0");
  return t_max_onset + std::log(sigma_p0 / sigma_c) / lambda_lyap;
}

std::optional<double> threshold_crossing_time(const DecoherenceSeries& series, double epsilon) {
  const auto& g = series.gamma_values;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k] > epsilon) continue;
    if (k == 0) return series.grid.time(0);
    const double t0 = series.grid.time(k - 1);
    const double t1 = series.grid.time(k);
    const double frac = (g[k - 1] - epsilon) / (g[k - 1] - g[k]);
    return t0 + frac * (t1 - t0);
  }
  return std::nullopt;
}

LyapunovSpec extract_lyapunov_spec(const DecoherenceSeries& series, double lambda_lyap,
                                   double epsilon, const TimescaleOptions& options) {
  const auto& gamma = series.gamma_values;
  const auto& d = series.diffusion.d_values;
  std::size_t last = gamma.size() - 1;
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    if (gamma[k] <= epsilon) {
      last = k;
      break;
    }
  }
  const auto first_plateau =
      static_cast<std::size_t>(std::floor((1.0 - options.plateau_fraction) * static_cast<double>(last)));
  std::vector<double> tail(d.begin() + static_cast<std::ptrdiff_t>(first_plateau),
                           d.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  std::sort(tail.begin(), tail.end());
  const std::size_t mid = tail.size() / 2;
  const double median = tail.size() % 2 == 1 ? tail[mid] : 0.5 * (tail[mid - 1] + tail[mid]);

  LyapunovSpec spec{lambda_lyap, 0.0, median};
  for (std::size_t k = 0; k <= last; ++k) {
    if (std::abs(d[k]) > options.onset_fraction * median) {
      spec.t_max_onset = series.grid.time(k);
      break;
    }
  }
  return spec;
}

double unstable_decoherence_time(const DecoherenceSeries& series, double sigma_p0,
                                 double lambda_lyap, double epsilon,
                                 const TimescaleOptions& options) {
  const LyapunovSpec spec = extract_lyapunov_spec(series, lambda_lyap, epsilon, options);
  if (!(spec.d_reference > 0.0)) {
    throw DomainError("plateau diffusion D_i = " + std::to_string(spec.d_reference) +
                      " is not positive; sigma_c undefined");
  }
  const double sigma_c = critical_width(spec.d_reference, spec.lambda_lyap);
  return unstable_decoherence_time(sigma_p0, spec.t_max_onset, sigma_c, spec.lambda_lyap);
}

double harmonic_decoherence_time(const DecoherenceSeries& series, double separation) {
  if (!(separation > 0.0)) throw DomainError("harmonic decoherence time needs L > 0");
  const double target = 1.0 / (separation * separation);
  const auto& cum = series.cumulative_d;
  const auto& d = series.diffusion.d_values;
  const double h = series.grid.spacing();

  for (std::size_t k = 0; k + 1 < cum.size(); ++k) {
    if (!(cum[k] < target && cum[k + 1] >= target)) continue;
    const double d0 = d[k];
    const double d1 = d[k + 1];
    const double pin = (cum[k + 1] - cum[k]) - 0.5 * h * (d0 + d1);
    auto interpolant = [&](double tau) {
      return cum[k] + d0 * tau + 0.5 * (d1 - d0) * tau * tau / h + pin * tau / h;
    };
    double lo = 0.0;
    double hi = h;
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, series.grid.time(k)); ++iter) {
      const double mid = 0.5 * (lo + hi);
      (interpolant(mid) < target ? lo : hi) = mid;
    }
    return series.grid.time(k) + 0.5 * (lo + hi);
  }
  const double attained = separation * separation * *std::max_element(cum.begin(), cum.end());
  throw NotReachedError("L^2 int D reached only " + std::to_string(attained) + " by t=" +
                            std::to_string(series.grid.t_max()),
                        attained);
}

double harmonic_decoherence_time(const ModelConfig& cfg, const TrajectorySpec& traj,
                                 double separation, const TimeGrid& grid,
                                 const QuadratureSettings& quad) {
  return harmonic_decoherence_time(decoherence_factor(cfg, traj, grid, quad), separation);
}

}  // namespace compdeco
