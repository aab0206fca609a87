#include "compdeco/sweep.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <tuple>

#include "compdeco/errors.hpp"
#include "compdeco/oracle.hpp"
#include "compdeco/parallel.hpp"

namespace compdeco {

namespace {

constexpr std::size_t kOraclePoints = 256;

// Half width placing the branch centres +-L/2 exactly on nodes of an
// even-sized grid (nodes sit at +-(k + 1/2) dx).
double oracle_half_width(double separation, double target) {
  const double intervals = static_cast<double>(kOraclePoints - 1);
  const double k = std::max(0.0, std::round(separation * intervals / (4.0 * target) - 0.5));
  return intervals * separation / (4.0 * (k + 0.5));
}

std::string gamma_tag(double g) { return fmt::format("{:g}", g); }

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

void write_file(const std::filesystem::path& path, const std::string& bytes,
                std::vector<ManifestEntry>& manifest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << bytes;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
  manifest.push_back({path.filename(), sha256_hex(bytes)});
}

std::string cell_csv(const CellResult& cell) {
  const DecoherenceSeries& s = *cell.series;
  std::string text = "t,D_total,D_thermal,D_kernel,cum_D,Gamma\n";
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    text += fmt::format("{},{},{},{},{},{}\n", format_number(s.grid.time(k)),
                        format_number(s.diffusion.d_values[k]), format_number(s.diffusion.thermal_part[k]),
                        format_number(s.diffusion.kernel_part[k]), format_number(s.cumulative_d[k]),
                        format_number(s.gamma_values[k]));
  }
  return text;
}

std::string summary_csv(const SweepReport& report, const RunConfig& config) {
  std::string text = "case,gamma0kT,t_threshold,t_formula,epsilon";
  text += config.oracle ? ",oracle_agreement\n" : "\n";
  for (const CellResult& cell : report.cells) {
    text += fmt::format("{},{},{},{},{}", label_of(cell.composite), format_number(cell.gamma0_kt),
                        optional_number(cell.t_threshold), optional_number(cell.t_formula),
                        format_number(config.epsilon));
    text += config.oracle ? "," + optional_number(cell.oracle_agreement) + "\n" : "\n";
  }
  return text;
}

std::string_view case_colour(CaseLabel label) {
  switch (label) {
    case CaseLabel::A: return "#1f77b4";
    case CaseLabel::B: return "#d62728";
    case CaseLabel::C: return "#2ca02c";
    case CaseLabel::D: return "#9467bd";
  }
  return "#000000";
}

std::string panel_svg(const SweepReport& report, const RunConfig& config, double g) {
  constexpr double width = 480.0;
  constexpr double height = 360.0;
  constexpr double left = 56.0;
  constexpr double right = 16.0;
  constexpr double top = 28.0;
  constexpr double bottom = 44.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const double t_max = config.grid.t_max();
  auto px = [&](double t) { return left + plot_w * t / t_max; };
  auto py = [&](double gamma) { return top + plot_h * (1.0 - std::clamp(gamma, 0.0, 1.0)); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
      "Gamma(t), gamma0 kT = {3}</text>\n"
      "<rect x=\"{4}\" y=\"{5}\" width=\"{6}\" height=\"{7}\" fill=\"none\" stroke=\"black\"/>\n",
      width, height, width / 2.0, gamma_tag(g), left, top, plot_w, plot_h);
  for (int i = 0; i <= 4; ++i) {
    const double t = t_max * i / 4.0;
    const double v = i / 4.0;
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
        "text-anchor=\"middle\">{:g}</text>\n",
        px(t), top + plot_h + 16.0, t);
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
        "text-anchor=\"end\">{:g}</text>\n",
        left - 6.0, py(v) + 4.0, v);
  }
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"middle\">t</text>\n",
      left + plot_w / 2.0, height - 8.0);

  int legend_row = 0;
  for (const CellResult& cell : report.cells) {
    if (cell.gamma0_kt != g || !cell.series) continue;
    const DecoherenceSeries& s = *cell.series;
    const std::size_t stride = std::max<std::size_t>(1, s.grid.size() / 1000);
    std::string points;
    for (std::size_t k = 0; k < s.grid.size(); k += stride) {
      points += fmt::format("{:.2f},{:.2f} ", px(s.grid.time(k)), py(s.gamma_values[k]));
    }
    points += fmt::format("{:.2f},{:.2f}", px(s.grid.t_max()), py(s.gamma_values.back()));
    const auto colour = case_colour(cell.composite.label);
    svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                       colour, points);
    const double ly = top + 14.0 + 16.0 * legend_row++;
    svg += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"{3}\" stroke-width=\"2\"/>"
        "<text x=\"{4:.2f}\" y=\"{5:.2f}\" font-family=\"sans-serif\" font-size=\"11\">({6})</text>\n",
        left + plot_w - 60.0, ly, left + plot_w - 40.0, colour, left + plot_w - 34.0, ly + 4.0,
        label_of(cell.composite));
  }
  svg += "</svg>\n";
  return svg;
}

CellResult run_cell(const RunConfig& config, const CompositeCase& c, double g) {
  CellResult cell;
  cell.composite = c;
  cell.gamma0_kt = g;
  try {
    const ModelConfig model = cell_model(config, c, g);
    cell.series = decoherence_factor(model, config.traj, config.grid, config.quad);
    cell.t_threshold = threshold_crossing_time(*cell.series, config.epsilon);
    if (c.a_kind == OscillatorKind::Inverted) {
      try {
        cell.t_formula = unstable_decoherence_time(*cell.series, model.sigma_p0,
                                                   lyapunov_coefficient(model, config.timescales),
                                                   config.epsilon, config.timescales);
      } catch (const DomainError&) {
      }
    } else {
      try {
        cell.t_formula = harmonic_decoherence_time(*cell.series, config.separation);
      } catch (const NotReachedError&) {
      }
    }
    if (config.oracle) cell.oracle_agreement = oracle_agreement(config, cell);
  } catch (const std::exception& e) {
    cell.error = e.what();
    if (cell.error.empty()) cell.error = "unknown failure";
  }
  return cell;
}

}  // namespace

ModelConfig cell_model(const RunConfig& config, const CompositeCase& c, double gamma0_kt) {
  ModelConfig model = config.model;
  model.composite = c;
  model.gamma0 = model.kb_t > 0.0 ? gamma0_kt / model.kb_t : 0.0;
  return validate_config(model);
}

bool SweepReport::all_ok() const noexcept {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok(); });
}

const CellResult* SweepReport::find(CaseLabel label, double gamma0_kt) const noexcept {
  for (const CellResult& c : cells) {
    if (c.composite.label == label && c.gamma0_kt == gamma0_kt) return &c;
  }
  return nullptr;
}

SweepReport run_sweep(const RunConfig& config) {
  std::vector<std::pair<CompositeCase, double>> jobs;
  for (const CompositeCase& c : config.cases) {
    for (double g : config.gamma0_kt) jobs.emplace_back(c, g);
  }
  SweepReport report;
  report.cells.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    report.cells[i] = run_cell(config, jobs[i].first, jobs[i].second);
  });
  std::stable_sort(report.cells.begin(), report.cells.end(), [](const CellResult& a, const CellResult& b) {
    return std::tie(a.composite.label, a.gamma0_kt) < std::tie(b.composite.label, b.gamma0_kt);
  });
  return report;
}

double oracle_agreement(const RunConfig& config, const CellResult& cell) {
  if (!cell.series) throw DomainError("oracle comparison needs a computed series");
  const ModelConfig model = cell_model(config, cell.composite, cell.gamma0_kt);
  const double length = config.separation;
  const DecoherenceSeries scaled = rescaled(*cell.series, model.m_a / model.hbar * length * length);

  std::size_t k_eval = scaled.grid.size() - 1;
  for (std::size_t k = 1; k < scaled.grid.size(); ++k) {
    if (scaled.gamma_values[k] <= 0.5) {
      k_eval = k;
      break;
    }
  }
  const double t_eval = scaled.grid.time(k_eval);
  const double packet = length / 8.0;
  const double half_width = oracle_half_width(length, length / 2.0 + 6.0 * packet + 1.0);

  const DensityMatrixGrid initial = superposition_state(kOraclePoints, half_width, length, packet);
  OracleSettings settings;
  settings.freeze_kinetic = true;
  settings.absorbing_boundary = false;
  const OracleTrajectory run =
      evolve_density_matrix(model, engine_coefficients(model, config.traj, config.quad), initial, t_eval,
                            scaled.grid.spacing(), settings);
  const double visibility = fringe_visibility(run.last(), PacketSpec{-length / 2.0, length / 2.0});
  const double expected = scaled.gamma_values[k_eval];
  return std::abs(visibility / expected - 1.0);
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::string cell_file_name(const CellResult& cell) {
  return fmt::format("cell_{}_g{}.csv", label_of(cell.composite), gamma_tag(cell.gamma0_kt));
}

std::string panel_file_name(double gamma0_kt) { return fmt::format("panel_g{}.svg", gamma_tag(gamma0_kt)); }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::vector<ManifestEntry> emit_outputs(const SweepReport& report, const RunConfig& config) {
  const auto& dir = config.outputs.directory;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  std::vector<ManifestEntry> manifest;
  if (config.outputs.csv) {
    for (const CellResult& cell : report.cells) {
      if (cell.series) write_file(dir / cell_file_name(cell), cell_csv(cell), manifest);
    }
    write_file(dir / "summary.csv", summary_csv(report, config), manifest);
  }
  if (config.outputs.svg) {
    for (double g : config.gamma0_kt) write_file(dir / panel_file_name(g), panel_svg(report, config, g), manifest);
  }

  std::string listing;
  for (const ManifestEntry& e : manifest) listing += fmt::format("{}  {}\n", e.sha256, e.path.string());
  std::ofstream out(dir / "manifest.sha256", std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / "manifest.sha256").string());
  out << listing;
  return manifest;
}

}  // namespace compdeco
