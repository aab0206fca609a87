#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "compdeco/classical.hpp"
#include "compdeco/diffusion.hpp"
#include "compdeco/errors.hpp"

using namespace compdeco;

namespace {

ModelConfig reference(CaseLabel label, double gamma0 = 0.0) {
  ModelConfig cfg;
  cfg.composite = make_case(label);
  cfg.omega = 1.5;
  cfg.omega_b = 1.0;
  cfg.lambda = 0.1;
  cfg.gamma0 = gamma0;
  return cfg;
}

constexpr CaseLabel kAll[] = {CaseLabel::A, CaseLabel::B, CaseLabel::C, CaseLabel::D};

}  // namespace

TEST_CASE("noise kernel") {
  ModelConfig cfg = reference(CaseLabel::A);
  cfg.lambda = 1.0;
  CHECK(noise_kernel(cfg, 1.0) == doctest::Approx(std::cosh(1.0) / 32.0).epsilon(1e-15));
  CHECK(noise_kernel(cfg, 1.0) == doctest::Approx(0.048221).epsilon(1e-5));
  cfg.composite = make_case(CaseLabel::C);
  CHECK(noise_kernel(cfg, 1.0) == doctest::Approx(std::cos(1.0) / 32.0).epsilon(1e-15));
  cfg.sigma = 2.0;
  cfg.hbar = 0.5;
  CHECK(noise_kernel(cfg, 0.0) == doctest::Approx(2.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("spectral density") {
  CHECK(spectral_density(0.0, 1.0, 0.3, 5.0) == 0.0);
  CHECK(spectral_density(5.0, 2.0, 0.3, 5.0) == doctest::Approx(2 * 2.0 * 0.3 * 5.0 / std::exp(1.0)));
  CHECK_THROWS_AS(spectral_density(-1.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("zero coupling gives no decoherence") {
  const TimeGrid grid(10.0, 2000);
  for (auto label : kAll) {
    ModelConfig cfg = reference(label, 5.0);
    cfg.lambda = 0.0;
    const auto series = decoherence_factor(cfg, trajectory_for_separation(2.0), grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(series.diffusion.d_values[k] == 0.0);
      CHECK(series.gamma_values[k] == 1.0);
    }
  }
}

TEST_CASE("thermal part telescopes to the endpoint values of dq") {
  for (auto label : kAll) {
    const ModelConfig cfg = reference(label, 3.0);
    TrajectorySpec traj = trajectory_for_separation(2.0);
    traj.dq0 = 0.25;
    const double t = 2.7;
    const double q0 = delta_q_trajectory(cfg, traj, t, 0.0).value;
    const double qt = delta_q_trajectory(cfg, traj, t, t).value;
    const double expected = 2.0 * cfg.gamma0_kb_t() * cfg.lambda * cfg.lambda /
                            (cfg.hbar * cfg.omega_b * cfg.omega_b) * 0.5 * (qt * qt - q0 * q0);
    CHECK(diffusion_coefficient(cfg, traj, t).thermal == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("kernel part matches an independent quadrature") {
  using boost::math::quadrature::gauss_kronrod;
  for (auto label : kAll) {
    const ModelConfig cfg = reference(label);
    const TrajectorySpec traj = trajectory_for_separation(2.0);
    const double t = 3.3;
    const double c_b = cfg.composite.b_kind == OscillatorKind::Inverted ? 1.0 : -1.0;
    auto f = [&](double s) {
      const double z = cfg.omega_b * (t - s);
      const double shape = c_b > 0 ? std::cosh(z) : std::cos(z);
      const double z_a = cfg.omega * s;
      const double x = 2.0 * (cfg.composite.a_kind == OscillatorKind::Inverted ? std::cosh(z_a) : std::cos(z_a));
      return cfg.lambda * cfg.lambda / 32.0 * shape * x;
    };
    const double ref = gauss_kronrod<double, 61>::integrate(f, 0.0, t, 15, 1e-14);
    CHECK(diffusion_coefficient(cfg, traj, t).kernel == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("double prefactor convention scales only the kernel term") {
  ModelConfig cfg = reference(CaseLabel::B, 1.0);
  const TrajectorySpec traj = trajectory_for_separation(2.0);
  const auto single = diffusion_coefficient(cfg, traj, 2.0);
  cfg.noise_prefactor = PrefactorConvention::Double;
  const auto twice = diffusion_coefficient(cfg, traj, 2.0);
  CHECK(twice.thermal == single.thermal);
  CHECK(twice.kernel == doctest::Approx(single.kernel * cfg.lambda * cfg.lambda / 32.0).epsilon(1e-14));
}

TEST_CASE("D vanishes at t = 0") {
  const auto d = diffusion_coefficient(reference(CaseLabel::D, 1.0), trajectory_for_separation(2.0), 0.0);
  CHECK(d.total == 0.0);
  CHECK_THROWS_AS(diffusion_coefficient(reference(CaseLabel::D), trajectory_for_separation(2.0), -1.0),
                  DomainError);
}

TEST_CASE("constant and linear D integrate exactly") {
  const TimeGrid grid(5.0, 50);
  const auto constant = decoherence_from_diffusion(grid, [](double) { return DiffusionSample{0.4, 0.4, 0.0}; });
  const auto linear = decoherence_from_diffusion(grid, [](double t) { return DiffusionSample{0.3 * t, 0.0, 0.3 * t}; });
  const auto quintic =
      decoherence_from_diffusion(grid, [](double t) { return DiffusionSample{std::pow(t, 5), 0.0, std::pow(t, 5)}; });
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.time(k);
    CHECK(constant.gamma_values[k] == doctest::Approx(std::exp(-0.4 * t)).epsilon(1e-14));
    CHECK(linear.cumulative_d[k] == doctest::Approx(0.15 * t * t).epsilon(1e-13));
    CHECK(quintic.cumulative_d[k] == doctest::Approx(std::pow(t, 6) / 6.0).epsilon(1e-12));
  }
  CHECK(constant.diffusion.thermal_part[3] == 0.4);
  CHECK(linear.diffusion.kernel_part[10] == doctest::Approx(0.3));
}

TEST_CASE("cumulative integral is clamped before exponentiation") {
  const TimeGrid grid(10.0, 10);
  const auto series = decoherence_from_diffusion(grid, [](double) { return DiffusionSample{100.0, 100.0, 0.0}; });
  CHECK(series.clamped);
  CHECK(series.gamma_values.back() == doctest::Approx(std::exp(-kCumulativeClamp)));
  CHECK(series.cumulative_d.back() == doctest::Approx(1000.0));
}

TEST_CASE("rescaling raises Gamma to a power") {
  const auto series = decoherence_factor(reference(CaseLabel::B, 1.0), trajectory_for_separation(2.0), TimeGrid(4.0, 200));
  const auto scaled = rescaled(series, 4.0);
  for (std::size_t k = 0; k < series.grid.size(); k += 20) {
    CHECK(scaled.gamma_values[k] == doctest::Approx(std::pow(series.gamma_values[k], 4.0)).epsilon(1e-12));
  }
}

TEST_CASE("inner quadrature refinement changes little") {
  const TimeGrid grid(6.0, 100);
  QuadratureSettings fine;
  fine.rel_tol = 1e-12;
  for (auto label : kAll) {
    const ModelConfig cfg = reference(label, 1.0);
    const auto coarse = decoherence_factor(cfg, trajectory_for_separation(2.0), grid);
    const auto refined = decoherence_factor(cfg, trajectory_for_separation(2.0), grid, fine);
    CHECK(std::abs(coarse.gamma_values.back() / refined.gamma_values.back() - 1.0) < 1e-8);
  }
}

TEST_CASE("D grows with the bath temperature") {
  for (auto label : kAll) {
    const TrajectorySpec traj = trajectory_for_separation(2.0);
    const double cold = diffusion_coefficient(reference(label, 0.0), traj, 2.0).total;
    const double hot = diffusion_coefficient(reference(label, 10.0), traj, 2.0).total;
    CHECK(hot >= cold);
  }
}
