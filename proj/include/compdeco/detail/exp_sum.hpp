#pragma once

// Short sums of complex exponentials, sum_k c_k exp(r_k u), used to evaluate
// convolutions of sin/sinh/cos/cosh products in closed form.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "compdeco/model.hpp"

namespace compdeco::detail {

using cplx = std::complex<double>;

struct ExpTerm {
  cplx coef;
  cplx rate;
};

struct ExpSum {
  std::array<ExpTerm, 4> terms{};
  std::size_t count{0};

  void add(cplx coef, cplx rate) { terms[count++] = {coef, rate}; }

  void append(const ExpSum& other, double scale) {
    for (std::size_t k = 0; k < other.count; ++k) add(scale * other.terms[k].coef, other.terms[k].rate);
  }
};

/// The rate whose exponentials build the mode functions: f (inverted) or i f (harmonic).
inline cplx mode_rate(OscillatorKind kind, double freq) {
  return kind == OscillatorKind::Inverted ? cplx{freq, 0.0} : cplx{0.0, freq};
}

/// S(f v): sinh(f v) = (e^{fv} - e^{-fv}) / 2,  sin(f v) = (e^{ifv} - e^{-ifv}) / 2i.
inline ExpSum sine_mode(OscillatorKind kind, double freq) {
  const cplx r = mode_rate(kind, freq);
  const cplx half = kind == OscillatorKind::Inverted ? cplx{0.5, 0.0} : cplx{0.0, -0.5};
  ExpSum out;
  out.add(half, r);
  out.add(-half, -r);
  return out;
}

/// C(f v): cosh or cos.
inline ExpSum cosine_mode(OscillatorKind kind, double freq) {
  const cplx r = mode_rate(kind, freq);
  ExpSum out;
  out.add(0.5, r);
  out.add(0.5, -r);
  return out;
}

/// g(u) = f(t - u).
inline ExpSum reflected(const ExpSum& f, double t) {
  ExpSum out;
  for (std::size_t k = 0; k < f.count; ++k) {
    out.add(f.terms[k].coef * std::exp(f.terms[k].rate * t), -f.terms[k].rate);
  }
  return out;
}

/// phi1(z) = (e^z - 1) / z, accurate near z = 0.
inline cplx phi1(cplx z) {
  if (std::abs(z) < 1e-3) {
    return 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0))));
  }
  const double a = z.real();
  const double b = z.imag();
  const double sb2 = std::sin(0.5 * b);
  const cplx em1{std::expm1(a) * std::cos(b) - 2.0 * sb2 * sb2, std::exp(a) * std::sin(b)};
  return em1 / z;
}

/// Re int_0^s x(u) k(s - u) du for exponential sums x and k.
///
/// Each pair contributes c d e^{b s} s phi1((a - b) s). With `resonant` set,
/// pairs whose rates coincide up to the resonance tolerance use the exact
/// coincident-rate limit s e^{b s}.
inline double convolve(const ExpSum& x, const ExpSum& k, double s, bool resonant) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < x.count; ++i) {
    for (std::size_t j = 0; j < k.count; ++j) {
      const cplx a = x.terms[i].rate;
      const cplx b = k.terms[j].rate;
      cplx z = (a - b) * s;
      if (resonant && std::abs(a - b) < std::abs(a + b)) z = 0.0;
      acc += x.terms[i].coef * k.terms[j].coef * std::exp(b * s) * s * phi1(z);
    }
  }
  return acc.real();
}

}  // namespace compdeco::detail
