// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "compdeco/classical.hpp"
#include "compdeco/diffusion.hpp"
#include "compdeco/errors.hpp"
#include "compdeco/oracle.hpp"
#include "compdeco/sweep.hpp"
#include "compdeco/timescales.hpp"
#include "support/reference_oracles.hpp"

using namespace compdeco;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr CaseLabel kCases[] = {CaseLabel::A, CaseLabel::B, CaseLabel::C, CaseLabel::D};

struct Outcome {
  bool pass{false};
  std::string detail;
};

const fs::path kConfigDir{COMPDECO_CONFIG_DIR};

RunConfig reference_config() { return load_config(kConfigDir / "fig1-left.cfg"); }

const SweepReport& reference_sweep() {
  static const SweepReport report = run_sweep(reference_config());
  return report;
}

double threshold_or_inf(CaseLabel label, double g) {
  const CellResult* cell = reference_sweep().find(label, g);
  if (cell == nullptr || !cell->ok()) throw std::runtime_error("reference cell missing or failed");
  return cell->t_threshold.value_or(kInf);
}

std::string show(double v) { return std::isinf(v) ? "not reached" : fmt::format("{:.4f}", v); }

Outcome boundary_identity() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto kind = testing::pick_kind(rng);
    const double f = u(rng);
    const double t = u(rng);
    if (near_caustic(f, t) || std::abs(std::sin(f * t)) < 1e-3) continue;
    const double x0 = u(rng) - 1.5;
    const double xf = u(rng) - 1.5;
    worst = std::max(worst, std::abs(free_trajectory(kind, f, t, x0, xf, 0.0) - x0));
    worst = std::max(worst, std::abs(free_trajectory(kind, f, t, x0, xf, t) - xf));

    ModelConfig cfg = testing::config_for(kCases[i % 4], f, u(rng), 0.3);
    if (std::abs(std::sin(cfg.omega * t)) < 1e-3 || std::abs(std::sin(cfg.omega_b * t)) < 1e-3) continue;
    TrajectorySpec traj = trajectory_for_separation(x0, EndpointMode::Fixed);
    traj.dxf = xf;
    traj.dq0 = u(rng) - 1.5;
    traj.dqf = u(rng) - 1.5;
    const double scale = std::max(1.0, std::abs(traj.dqf));
    worst = std::max(worst, std::abs(delta_x_trajectory(cfg, traj, t, t).value - xf));
    worst = std::max(worst, std::abs(delta_q_trajectory(cfg, traj, t, 0.0).value - traj.dq0) / scale);
    worst = std::max(worst, std::abs(delta_q_trajectory(cfg, traj, t, t).value - traj.dqf) / scale);
  }
  const bool endpoints_ok = worst < 1e-12;

  bool silent = true;
  const TimeGrid grid(10.0, 2000);
  for (auto label : kCases) {
    ModelConfig cfg = reference_config().model;
    cfg.composite = make_case(label);
    cfg.lambda = 0.0;
    cfg.gamma0 = 10.0;
    const auto series = decoherence_factor(cfg, trajectory_for_separation(2.0), grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      silent = silent && series.diffusion.d_values[k] == 0.0 && series.gamma_values[k] == 1.0;
    }
  }
  return {endpoints_ok && silent,
          fmt::format("max endpoint error {:.2e}; lambda=0 gives D=0, Gamma=1: {}", worst, silent ? "yes" : "no")};
}

Outcome closed_form_vs_numeric() {
  std::mt19937_64 rng(20261019);
  const double conv = testing::convolution_mismatch(rng, 100);
  const double shot = testing::shooting_mismatch(rng, 20);
  return {conv < 1e-10 && shot < 1e-8,
          fmt::format("convolution vs Kronrod {:.2e} (< 1e-10), dq vs shooting {:.2e} (< 1e-8)", conv, shot)};
}

Outcome quadrature_convergence() {
  RunConfig coarse = reference_config();
  RunConfig fine = coarse;
  fine.grid = TimeGrid(coarse.grid.t_max(), 2 * coarse.grid.n_steps());
  double worst = 0.0;
  for (auto label : kCases) {
    for (double g : coarse.gamma0_kt) {
      const ModelConfig m = cell_model(coarse, make_case(label), g);
      const double a = decoherence_factor(m, coarse.traj, coarse.grid, coarse.quad).gamma_values.back();
      const double b = decoherence_factor(m, fine.traj, fine.grid, fine.quad).gamma_values.back();
      worst = std::max(worst, std::abs(a / b - 1.0));
    }
  }
  return {worst < 1e-6, fmt::format("max relative change of Gamma(t_max) {:.2e} (< 1e-6)", worst)};
}

Outcome isolated_ordering() {
  const double a = threshold_or_inf(CaseLabel::A, 0.0);
  const double b = threshold_or_inf(CaseLabel::B, 0.0);
  const double c = threshold_or_inf(CaseLabel::C, 0.0);
  const double d = threshold_or_inf(CaseLabel::D, 0.0);
  const double gap = (b - d) / b;
  const bool ok = d < b && b < std::min(a, c) && gap >= 0.05;
  return {ok, fmt::format("t_D a={} b={} c={} d={}; (b-d)/b={:.3f}", show(a), show(b), show(c), show(d), gap)};
}

Outcome high_temperature() {
  const double a = threshold_or_inf(CaseLabel::A, 100.0);
  const double b = threshold_or_inf(CaseLabel::B, 100.0);
  const double c = threshold_or_inf(CaseLabel::C, 100.0);
  const double d = threshold_or_inf(CaseLabel::D, 100.0);
  const double spread = std::abs(b - d) / b;
  const bool coincide = spread < 0.15;
  const bool c_first = c < a;
  return {coincide && c_first,
          fmt::format("|b-d|/b={:.3f} (< 0.15: {}); t_D c={} < a={}: {}", spread, coincide ? "yes" : "no", show(c),
                      show(a), c_first ? "yes" : "no")};
}

Outcome thermal_dominance() {
  const RunConfig cfg = reference_config();
  double worst = kInf;
  for (auto label : kCases) {
    const auto sample = diffusion_coefficient(cell_model(cfg, make_case(label), 100.0), cfg.traj, 2.0, cfg.quad);
    worst = std::min(worst, std::abs(sample.thermal) / std::abs(sample.kernel));
  }
  return {worst > 10.0, fmt::format("min |thermal|/|kernel| at t=2: {:.1f} (> 10)", worst)};
}

Outcome formula_consistency() {
  double worst = 0.0;
  bool defined = true;
  for (auto label : {CaseLabel::B, CaseLabel::D}) {
    for (double g : reference_config().gamma0_kt) {
      const CellResult* cell = reference_sweep().find(label, g);
      if (!cell->t_threshold || !cell->t_formula) {
        defined = false;
        continue;
      }
      worst = std::max(worst, std::abs(*cell->t_formula - *cell->t_threshold) / *cell->t_threshold);
    }
  }
  return {defined && worst < 0.30, fmt::format("max relative gap squeezing estimate vs crossing {:.3f} (< 0.30)", worst)};
}

Outcome oracle_checks() {
  RunConfig cfg = reference_config();
  const double length = cfg.separation;
  double analytic_worst = 0.0;
  double engine_worst = 0.0;
  for (auto label : kCases) {
    const ModelConfig m = cell_model(cfg, make_case(label), 1.0);
    const auto series = decoherence_factor(m, cfg.traj, cfg.grid, cfg.quad);
    const auto scaled = rescaled(series, m.m_a / m.hbar * length * length);
    double t_eval = cfg.grid.t_max();
    for (std::size_t k = 1; k < scaled.grid.size(); ++k) {
      if (scaled.gamma_values[k] <= 0.5) {
        t_eval = scaled.grid.time(k);
        break;
      }
    }

    // Analytic pure dephasing: visibility = exp(-(M_A/hbar) L^2 int_0^t D).
    const double intervals = 255.0;
    const double half_width = intervals * length / (4.0 * 15.5);
    const auto initial = superposition_state(256, half_width, length, length / 8.0);
    OracleSettings settings;
    settings.freeze_kinetic = true;
    settings.absorbing_boundary = false;
    const auto run = evolve_density_matrix(m, engine_coefficients(m, cfg.traj, cfg.quad), initial, t_eval,
                                           cfg.grid.spacing() / 4.0, settings);
    const double visibility = fringe_visibility(run.last(), PacketSpec{-length / 2.0, length / 2.0});
    const auto [integral, magnitude] = testing::kronrod(
        [&](double t) { return diffusion_coefficient(m, cfg.traj, t, cfg.quad).total; }, 0.0, t_eval);
    (void)magnitude;
    analytic_worst = std::max(analytic_worst, std::abs(visibility - std::exp(-m.m_a / m.hbar * length * length * integral)));

    CellResult cell;
    cell.composite = make_case(label);
    cell.gamma0_kt = 1.0;
    cell.series = series;
    engine_worst = std::max(engine_worst, oracle_agreement(cfg, cell));
  }
  return {analytic_worst < 1e-6 && engine_worst < 0.05,
          fmt::format("visibility vs analytic {:.2e} (< 1e-6), vs engine Gamma {:.2e} (< 0.05)", analytic_worst,
                      engine_worst)};
}

Outcome determinism() {
  bool identical = true;
  std::string files;
  for (const char* name : {"fig1-left.cfg", "fig1-right.cfg"}) {
    RunConfig cfg = load_config(kConfigDir / name);
    std::string manifests[2];
    for (int run = 0; run < 2; ++run) {
      cfg.outputs.directory = fs::temp_directory_path() / fmt::format("compdeco_acceptance_{}_{}", name, run);
      fs::remove_all(cfg.outputs.directory);
      emit_outputs(run_sweep(cfg), cfg);
      std::ifstream in(cfg.outputs.directory / "manifest.sha256", std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      manifests[run] = ss.str();
    }
    identical = identical && !manifests[0].empty() && manifests[0] == manifests[1];
    files += fmt::format(" {}: {} files", name, std::count(manifests[0].begin(), manifests[0].end(), '\n'));
  }
  return {identical, fmt::format("manifests byte-identical: {};{}", identical ? "yes" : "no", files)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "boundary and identity suite", 5.0, boundary_identity},
      {2, "closed forms vs numerical oracles", 60.0, closed_form_vs_numeric},
      {3, "quadrature convergence", 300.0, quadrature_convergence},
      {4, "isolated-regime ordering", kInf, isolated_ordering},
      {5, "high-temperature coincidence", kInf, high_temperature},
      {6, "thermal dominance", kInf, thermal_dominance},
      {7, "formula consistency", kInf, formula_consistency},
      {8, "density-matrix oracle agreement", 600.0, oracle_checks},
      {9, "determinism", kInf, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt::format("{:.1f}s", seconds);
    if (seconds > c.budget_seconds) {
      outcome.pass = false;
      timing += fmt::format(" over budget {:.0f}s", c.budget_seconds);
    }
    failures += outcome.pass ? 0 : 1;
    fmt::print("criterion {}: {} {} - {} [{}]\n", c.id, outcome.pass ? "PASS" : "FAIL", c.name, outcome.detail, timing);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
