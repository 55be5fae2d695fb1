#pragma once

#include <cstdint>
#include <random>

#include "ymhk/fourier.hpp"
#include "ymhk/lattice.hpp"

namespace ymhk {

/// Reproducible initial-data recipe.
///
/// Gaussian white noise is drawn per storage slot, each Fourier coefficient is
/// damped by (1 + |k|^2)^(-alpha/2), and the result is scaled so that its sup
/// norm equals `amplitude`. `band_limit > 0` zeroes every mode with
/// max_mu |k_mu| > band_limit.
struct SeededSpectrum {
  std::uint64_t seed = 0;
  double alpha = 0.0;
  double amplitude = 1.0;
  int band_limit = 0;
  bool zero_mean = false;
};

inline TensorField random_field(const LatticeGeom& geom, int rank, GroupSpec group,
                                const SeededSpectrum& spec) {
  if (spec.alpha < 0.0) throw UsageError("spectral decay exponent must be >= 0");
  TensorField t(geom, rank, group);
  if (spec.amplitude == 0.0) return t;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : t.values()) v = normal(rng);

  const bool filtered = spec.alpha > 0.0 || spec.band_limit > 0 || spec.zero_mean;
  if (filtered) {
    std::vector<double> damp(geom.sites());
    for (std::size_t i = 0; i < damp.size(); ++i) {
      const Coord k = fourier::mode_of(geom, i);
      double k2 = 0.0;
      int kmax = 0;
      for (int v : k) {
        k2 += static_cast<double>(v) * v;
        kmax = std::max(kmax, std::abs(v));
      }
      double f = std::pow(1.0 + k2, -0.5 * spec.alpha);
      if (spec.band_limit > 0 && kmax > spec.band_limit) f = 0.0;
      if (spec.zero_mean && i == 0) f = 0.0;
      damp[i] = f;
    }
    for (std::size_t m = 0; m < t.slots(); ++m) {
      for (int a = 0; a < t.dim(); ++a) {
        auto spec_data = fourier::gather(t, m, a);
        fourier::forward(spec_data, geom.n());
        for (std::size_t i = 0; i < spec_data.size(); ++i) spec_data[i] *= damp[i];
        fourier::inverse(spec_data, geom.n());
        fourier::scatter(spec_data, m, a, t);
      }
    }
  }

  const double sup = sup_norm(t);
  if (sup > 0.0) t *= spec.amplitude / sup;
  return t;
}

}  // namespace ymhk
