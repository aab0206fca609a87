#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "compdeco/errors.hpp"

namespace compdeco {

struct QuadratureSettings {
  double rel_tol{1e-9};
  std::size_t initial_panels{2};
  std::size_t max_panels{1u << 14};
};

struct QuadratureResult {
  double value{0.0};
  double error_estimate{0.0};
  std::size_t panels{0};
};

namespace detail {

inline constexpr std::size_t kGaussOrder = 16;

struct GaussLegendreRule {
  std::array<double, kGaussOrder> nodes{};
  std::array<double, kGaussOrder> weights{};
};

/// Nodes/weights on [-1, 1] by Newton iteration on P_n.
const GaussLegendreRule& gauss_legendre_rule();

/// Sum of panels GL rules over [a, b]; also accumulates int |f|.
template <class F>
void panel_sum(F&& f, double a, double b, std::size_t panels, double& value, double& magnitude) {
  const GaussLegendreRule& rule = gauss_legendre_rule();
  const double width = (b - a) / static_cast<double>(panels);
  value = 0.0;
  magnitude = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double mid = lo + 0.5 * width;
    double partial = 0.0;
    double partial_abs = 0.0;
    for (std::size_t k = 0; k < kGaussOrder; ++k) {
      const double fx = f(mid + 0.5 * width * rule.nodes[k]);
      partial += rule.weights[k] * fx;
      partial_abs += rule.weights[k] * std::abs(fx);
    }
    value += 0.5 * width * partial;
    magnitude += 0.5 * width * partial_abs;
  }
}

}  // namespace detail

/// Composite Gauss-Legendre quadrature of f over [a, b]. The panel count is
/// doubled until two successive estimates agree to rel_tol relative to
/// int |f|; throws NumericalAccuracyError when max_panels is exceeded.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureSettings& settings = {}) {
  if (a == b) return {0.0, 0.0, 0};
  std::size_t panels = settings.initial_panels == 0 ? 1 : settings.initial_panels;
  double coarse = 0.0;
  double magnitude = 0.0;
  detail::panel_sum(f, a, b, panels, coarse, magnitude);
  while (true) {
    const std::size_t fine_panels = 2 * panels;
    double fine = 0.0;
    detail::panel_sum(f, a, b, fine_panels, fine, magnitude);
    const double err = std::abs(fine - coarse);
    if (!std::isfinite(fine)) {
      throw NumericalAccuracyError("quadrature produced a non-finite value");
    }
    if (err <= settings.rel_tol * magnitude || magnitude == 0.0) {
      return {fine, err, fine_panels};
    }
    if (fine_panels >= settings.max_panels) {
      throw NumericalAccuracyError("quadrature did not converge: estimated error " +
                                   std::to_string(err) + " vs scale " + std::to_string(magnitude) +
                                   " after " + std::to_string(fine_panels) + " panels");
    }
    coarse = fine;
    panels = fine_panels;
  }
}

}  // namespace compdeco
