#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace compdeco {

/// Harmonic oscillators evolve with sin/cos mode functions, inverted
/// ("upside-down") ones with sinh/cosh. Frequencies are always stored positive.
enum class OscillatorKind { Harmonic, Inverted };

enum class CaseLabel { A, B, C, D };

/// Composition of the A (observed) and B (intermediate) oscillators.
struct CompositeCase {
  OscillatorKind a_kind{OscillatorKind::Harmonic};
  OscillatorKind b_kind{OscillatorKind::Inverted};
  CaseLabel label{CaseLabel::A};

  friend bool operator==(const CompositeCase&, const CompositeCase&) = default;
};

/// a: harmonic A + inverted B, b: inverted A + harmonic B,
/// c: both harmonic, d: both inverted.
CompositeCase make_case(CaseLabel label) noexcept;

/// Case-insensitive "a".."d". Throws ConfigError listing the allowed labels.
CompositeCase case_from_label(std::string_view label);

/// Lower-case single letter.
std::string label_of(const CompositeCase& c);
std::string_view to_string(OscillatorKind kind) noexcept;

/// How many times the lambda^2 sigma / (32 hbar) factor multiplies the
/// kernel addend of D(t). `Single` applies it only inside the noise kernel.
enum class PrefactorConvention { Single, Double };

/// Full physical parameter set, natural units (hbar = k_B = 1 by default).
struct ModelConfig {
  double m_a{1.0};       ///< mass of A
  double m_b{1.0};       ///< mass of B
  double omega{1.0};     ///< bare frequency of A
  double omega_b{1.0};   ///< bare frequency of B
  double lambda{0.1};    ///< A-B bilinear coupling
  double gamma0{0.0};    ///< bath damping constant
  double kb_t{1.0};      ///< bath temperature as an energy
  double hbar{1.0};
  double sigma{1.0};     ///< initial width of the B packet
  double sigma_p0{1.0};  ///< initial momentum width of A
  double cutoff{50.0};   ///< bath cutoff frequency
  CompositeCase composite{};
  PrefactorConvention noise_prefactor{PrefactorConvention::Single};

  double gamma0_kb_t() const noexcept { return gamma0 * kb_t; }
};

/// Returns `cfg` unchanged or throws ConfigError naming every violated field.
ModelConfig validate_config(const ModelConfig& cfg);

/// How the endpoints of the difference trajectories are fixed for a final time t.
///
/// Fixed: dx0/dxf and dq0/dqf are used verbatim as boundary values.
/// FreeEvolution: only dx0 and dq0 are used; the final values are those reached
/// by free (initial-value) evolution from rest, i.e. dx(s) = dx0 C(omega s)
/// and dq(s) is B's causal response to dx starting from dq0 at rest.
enum class EndpointMode { FreeEvolution, Fixed };

struct TrajectorySpec {
  double x0{0.0}, xf{0.0};    ///< A endpoints
  double q0{0.0}, qf{0.0};    ///< B endpoints
  double dx0{0.0}, dxf{0.0};  ///< A difference-trajectory endpoints
  double dq0{0.0}, dqf{0.0};  ///< B difference-trajectory endpoints
  EndpointMode mode{EndpointMode::FreeEvolution};
};

/// Trajectory data for a superposition of separation `separation`:
/// dx0 = dxf = separation, dq0 = dqf = 0.
TrajectorySpec trajectory_for_separation(double separation,
                                         EndpointMode mode = EndpointMode::FreeEvolution);

/// Uniform grid s_k = k t_max / n_steps, k = 0..n_steps.
class TimeGrid {
public:
  /// Throws ConfigError unless n_steps >= 2 and t_max > 0.
  TimeGrid(double t_max, std::size_t n_steps);

  double t_max() const noexcept { return t_max_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t size() const noexcept { return n_steps_ + 1; }
  double spacing() const noexcept { return t_max_ / static_cast<double>(n_steps_); }
  double time(std::size_t k) const noexcept {
    return k == n_steps_ ? t_max_ : t_max_ * static_cast<double>(k) / static_cast<double>(n_steps_);
  }

private:
  double t_max_;
  std::size_t n_steps_;
};

}  // namespace compdeco
