#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "compdeco/diffusion.hpp"
#include "compdeco/model.hpp"
#include "compdeco/quadrature.hpp"
#include "compdeco/timescales.hpp"

namespace compdeco {

inline constexpr int kConfigSchemaVersion = 1;

struct OutputSpec {
  std::filesystem::path directory{"out"};
  bool csv{true};
  bool svg{false};
};

/// Everything a batch run needs. `model.gamma0` is overwritten per cell from
/// the gamma0 k_B T sweep value.
struct RunConfig {
  ModelConfig model{};
  TrajectorySpec traj{};
  double separation{2.0};
  TimeGrid grid{10.0, 1000};
  std::vector<CompositeCase> cases{};
  std::vector<double> gamma0_kt{};
  double epsilon{0.01};
  OutputSpec outputs{};
  bool oracle{false};
  QuadratureSettings quad{};
  TimescaleOptions timescales{};
};

/// Parses the flat `key = value` format:
///
///   # comment
///   schema_version = 1
///   omega = 1.5
///   cases = a, b, c, d
///   gamma0kT = 0, 1, 100
///
/// Unknown keys, duplicates and malformed values are rejected with the
/// source name and line number. The model is checked with validate_config.
RunConfig parse_config(std::string_view text, const std::string& source_name = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Model and trajectory of one (case, gamma0 k_B T) cell.
ModelConfig cell_model(const RunConfig& config, const CompositeCase& c, double gamma0_kt);

struct CellResult {
  CompositeCase composite{};
  double gamma0_kt{0.0};
  std::optional<DecoherenceSeries> series{};
  std::optional<double> t_threshold{};
  std::optional<double> t_formula{};
  std::optional<double> oracle_agreement{};  ///< |visibility / Gamma^((M_A/hbar)L^2) - 1|
  std::string error{};

  bool ok() const noexcept { return error.empty(); }
};

struct SweepReport {
  std::vector<CellResult> cells;  ///< sorted by (case, gamma0 k_B T)

  bool all_ok() const noexcept;
  const CellResult* find(CaseLabel label, double gamma0_kt) const noexcept;
};

/// Runs every cell independently; a failing cell records its error and
/// leaves its siblings untouched.
SweepReport run_sweep(const RunConfig& config);

/// Oracle cross-check of one computed cell: pure-dephasing evolution (kinetic
/// frozen) of a superposition of separation L, compared with the engine's
/// Gamma rescaled by (M_A / hbar) L^2 at the first grid time where that falls
/// to 1/2 (t_max otherwise). Returns the relative disagreement.
double oracle_agreement(const RunConfig& config, const CellResult& cell);

struct ManifestEntry {
  std::filesystem::path path;
  std::string sha256;
};

std::string cell_file_name(const CellResult& cell);
std::string panel_file_name(double gamma0_kt);

/// Writes per-cell CSVs, the summary CSV and optional SVG panels into
/// config.outputs.directory, plus `manifest.sha256` listing every written
/// file (the manifest itself excluded). Returns the manifest entries.
std::vector<ManifestEntry> emit_outputs(const SweepReport& report, const RunConfig& config);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// 17-significant-digit rendering used in all CSVs.
std::string format_number(double v);

}  // namespace compdeco
