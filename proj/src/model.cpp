#include "compdeco/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

#include "compdeco/errors.hpp"

namespace compdeco {

CompositeCase make_case(CaseLabel label) noexcept {
  using K = OscillatorKind;
  switch (label) {
    case CaseLabel::A: return {K::Harmonic, K::Inverted, label};
    case CaseLabel::B: return {K::Inverted, K::Harmonic, label};
    case CaseLabel::C: return {K::Harmonic, K::Harmonic, label};
    case CaseLabel::D: return {K::Inverted, K::Inverted, label};
  }
  return {};
}

CompositeCase case_from_label(std::string_view label) {
  if (label.size() == 1) {
    switch (std::tolower(static_cast<unsigned char>(label.front()))) {
      case 'a': return make_case(CaseLabel::A);
      case 'b': return make_case(CaseLabel::B);
      case 'c': return make_case(CaseLabel::C);
      case 'd': return make_case(CaseLabel::D);
      default: break;
    }
  }
  throw ConfigError("unknown case label '" + std::string(label) + "' (allowed: a, b, c, d)",
                    {"case"});
}

std::string label_of(const CompositeCase& c) {
  switch (c.label) {
    case CaseLabel::A: return "a";
    case CaseLabel::B: return "b";
    case CaseLabel::C: return "c";
    case CaseLabel::D: return "d";
  }
  return "?";
}

std::string_view to_string(OscillatorKind kind) noexcept {
  return kind == OscillatorKind::Harmonic ? "harmonic" : "inverted";
}

ModelConfig validate_config(const ModelConfig& cfg) {
  std::vector<std::string> bad;
  std::ostringstream msg;
  auto require = [&](bool ok, const char* field, const std::string& why) {
    if (!ok) {
      bad.emplace_back(field);
      msg << "\n  " << field << ": " << why;
    }
  };
  auto positive = [&](double v, const char* field) {
    require(std::isfinite(v) && v > 0.0, field, "must be finite and > 0");
  };
  auto nonnegative = [&](double v, const char* field) {
    require(std::isfinite(v) && v >= 0.0, field, "must be finite and >= 0");
  };

  positive(cfg.m_a, "m_a");
  positive(cfg.m_b, "m_b");
  positive(cfg.hbar, "hbar");
  positive(cfg.sigma, "sigma");
  positive(cfg.sigma_p0, "sigma_p0");
  positive(cfg.omega, "omega");
  positive(cfg.omega_b, "omega_b");
  nonnegative(cfg.gamma0, "gamma0");
  nonnegative(cfg.kb_t, "kb_t");
  require(std::isfinite(cfg.lambda), "lambda", "must be finite");
  require(std::isfinite(cfg.cutoff) && cfg.cutoff > std::max(cfg.omega, cfg.omega_b), "cutoff",
          "must exceed max(omega, omega_b)");

  const CompositeCase expected = make_case(cfg.composite.label);
  require(expected == cfg.composite, "case", "oscillator kinds do not match the case label");

  if (!bad.empty()) throw ConfigError("invalid model configuration:" + msg.str(), std::move(bad));
  return cfg;
}

TrajectorySpec trajectory_for_separation(double separation, EndpointMode mode) {
  TrajectorySpec traj;
  traj.dx0 = separation;
  traj.dxf = separation;
  traj.mode = mode;
  return traj;
}

TimeGrid::TimeGrid(double t_max, std::size_t n_steps) : t_max_(t_max), n_steps_(n_steps) {
  std::vector<std::string> bad;
  if (!(std::isfinite(t_max) && t_max > 0.0)) bad.emplace_back("t_max");
  if (n_steps < 2) bad.emplace_back("n_steps");
  if (!bad.empty()) {
    throw ConfigError("invalid time grid (need t_max > 0 and n_steps >= 2, got t_max=" +
                          std::to_string(t_max) + ", n_steps=" + std::to_string(n_steps) + ")",
                      std::move(bad));
  }
}

}  // namespace compdeco
