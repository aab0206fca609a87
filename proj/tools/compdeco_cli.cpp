#include <fmt/format.h>

#include <CLI11.hpp>
#include <iostream>

#include "compdeco/errors.hpp"
#include "compdeco/sweep.hpp"

namespace {

std::string describe(const std::optional<double>& v) {
  return v ? fmt::format("{:.6g}", *v) : std::string("-");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoherence sweep over composite oscillator cases"};
  std::string config_path;
  std::vector<std::string> cases;
  std::vector<double> temperatures;
  std::optional<double> t_max;
  std::optional<std::size_t> steps;
  bool oracle = false;
  std::string out_dir;
  bool quiet = false;

  app.add_option("-c,--config", config_path, "configuration file")->required();
  app.add_option("--case", cases, "restrict to these case labels (a-d)")->delimiter(',');
  app.add_option("--gamma0kT", temperatures, "override the gamma0 k_B T sweep")->delimiter(',');
  app.add_option("--tmax", t_max, "override t_max");
  app.add_option("--steps", steps, "override n_steps");
  app.add_flag("--oracle", oracle, "cross-check every cell with the density-matrix oracle");
  app.add_option("-o,--out", out_dir, "output directory");
  app.add_flag("-q,--quiet", quiet, "suppress the per-cell report");
  CLI11_PARSE(app, argc, argv);

  compdeco::RunConfig config;
  try {
    config = compdeco::load_config(config_path);
    if (!cases.empty()) {
      config.cases.clear();
      for (const auto& label : cases) config.cases.push_back(compdeco::case_from_label(label));
    }
    if (!temperatures.empty()) {
      for (double g : temperatures) {
        if (g < 0.0) throw compdeco::ConfigError("--gamma0kT values must be >= 0", {"gamma0kT"});
      }
      config.gamma0_kt = temperatures;
    }
    if (t_max || steps) {
      config.grid = compdeco::TimeGrid(t_max.value_or(config.grid.t_max()),
                                       steps.value_or(config.grid.n_steps()));
    }
    if (oracle) config.oracle = true;
    if (!out_dir.empty()) config.outputs.directory = out_dir;
  } catch (const compdeco::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  const compdeco::SweepReport report = compdeco::run_sweep(config);
  try {
    compdeco::emit_outputs(report, config);
  } catch (const compdeco::IoError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return 1;
  }

  for (const auto& cell : report.cells) {
    if (!cell.ok()) {
      std::cerr << fmt::format("cell ({}) gamma0kT={:g} failed: {}\n", compdeco::label_of(cell.composite),
                               cell.gamma0_kt, cell.error);
    } else if (!quiet) {
      std::cout << fmt::format("({}) gamma0kT={:<6g} t_threshold={:<10} t_formula={:<10}",
                               compdeco::label_of(cell.composite), cell.gamma0_kt,
                               describe(cell.t_threshold), describe(cell.t_formula));
      if (cell.oracle_agreement) std::cout << fmt::format(" oracle={:.3g}", *cell.oracle_agreement);
      std::cout << '\n';
    }
  }
  return report.all_ok() ? 0 : 2;
}
