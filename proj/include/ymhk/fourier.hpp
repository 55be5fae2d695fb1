#pragma once

// Thin RAII wrapper over FFTW for the 4-D periodic lattice, plus the discrete
// and continuum symbols of the derivative operators.
//
// Convention: forward transform is unnormalized sum_x f(x) e^{-2 pi i k.x/N};
// the inverse carries the 1/N^4 factor. A mode e^{2 pi i k.x / L} is mapped by
// the forward difference along mu to theta_mu(k) times itself.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <vector>

#include "ymhk/lattice.hpp"

namespace ymhk::fourier {

using cplx = std::complex<double>;
using Spectrum = std::vector<cplx>;

enum class Symbol { Lattice, Continuum };

namespace detail {
struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

inline void transform(Spectrum& data, int n, int sign) {
  const int dims[4] = {n, n, n, n};
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  Plan plan(fftw_plan_dft(4, dims, ptr, ptr, sign, FFTW_ESTIMATE));
  fftw_execute(plan.get());
}
}  // namespace detail

inline void forward(Spectrum& data, int n) { detail::transform(data, n, FFTW_FORWARD); }

inline void inverse(Spectrum& data, int n) {
  detail::transform(data, n, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

/// Signed frequency of FFT index i, in (-N/2, N/2].
inline int frequency(int i, int n) { return (2 * i > n) ? i - n : i; }

inline Coord mode_of(const LatticeGeom& g, std::size_t idx) {
  Coord c = g.coord(idx);
  for (auto& v : c) v = frequency(v, g.n());
  return c;
}

/// theta_mu(k): multiplier of a single mode under the chosen derivative.
inline cplx theta(const LatticeGeom& g, int kmu, Symbol sym) {
  using std::numbers::pi;
  if (sym == Symbol::Continuum) return {0.0, 2.0 * pi * kmu / g.side()};
  const double phase = 2.0 * pi * kmu / g.n();
  return (cplx(std::cos(phase), std::sin(phase)) - 1.0) / g.spacing();
}

/// lambda(k) = |theta(k)|^2, the symbol of nabla* nabla on scalars.
inline double laplace_symbol(const LatticeGeom& g, const Coord& k, Symbol sym) {
  using std::numbers::pi;
  double s = 0.0;
  for (int kmu : k) {
    if (sym == Symbol::Continuum) {
      const double w = 2.0 * pi * kmu / g.side();
      s += w * w;
    } else {
      const double sn = std::sin(pi * kmu / g.n());
      s += 4.0 * sn * sn / (g.spacing() * g.spacing());
    }
  }
  return s;
}

/// Copies component (slot m, algebra index a) of every site into a spectrum buffer.
inline Spectrum gather(const TensorField& t, std::size_t m, int a) {
  Spectrum out(t.geom().sites());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = t.slot(s, m)[a];
  return out;
}

/// Writes the real part of `data` back into component (m, a).
inline void scatter(const Spectrum& data, std::size_t m, int a, TensorField& t) {
  for (std::size_t s = 0; s < data.size(); ++s) t.slot(s, m)[a] = data[s].real();
}

}  // namespace ymhk::fourier
