#pragma once

// Closed-form Fourier solutions of the abelian flow and the discrete Green
// function of the scalar lattice Laplacian.
//
// For U(1) every bracket vanishes, so the gradient flow of the k-energy is
// linear. Per Fourier mode, with theta_mu the derivative multiplier and
// lambda = |theta|^2:
//
//   u_hat(t) = exp(-lambda^(k+1) t) u_hat(0)
//   a_hat(t) = P a_hat(0) + exp(-2 lambda^(k+1) t) (1 - P) a_hat(0),
//   P = theta theta^* / |theta|^2
//
// The factor 2 on the transverse rate comes from ||F||^2 summing over both
// orderings (mu, nu) and (nu, mu) of the antisymmetric curvature.

#include <cmath>
#include <complex>
#include <random>

#include "ymhk/covariant.hpp"
#include "ymhk/flow.hpp"
#include "ymhk/fourier.hpp"

namespace ymhk {

using fourier::Symbol;

/// Evolves a U(1) state by `duration` using the chosen derivative symbol.
/// Symbol::Lattice reproduces the finite-difference flow exactly; with
/// Symbol::Continuum the input should be band-limited below the Nyquist mode.
inline FlowState exact_abelian_flow(const FlowState& s, double duration,
                                    Symbol sym = Symbol::Lattice) {
  if (!s.group().abelian()) throw UsageError("exact_abelian_flow requires the U1 group");
  if (duration < 0.0) throw UsageError("exact_abelian_flow: negative duration");
  FlowState out = s;
  out.t = s.t + duration;
  if (duration == 0.0) return out;
  const auto& g = s.geom();
  const int n = g.n();
  const std::size_t sites = g.sites();
  const int p = s.k + 1;

  auto u_hat = fourier::gather(s.u, 0, 0);
  fourier::forward(u_hat, n);
  std::array<fourier::Spectrum, kDim> a_hat;
  for (int mu = 0; mu < kDim; ++mu) {
    a_hat[static_cast<std::size_t>(mu)] = fourier::gather(s.A, static_cast<std::size_t>(mu), 0);
    fourier::forward(a_hat[static_cast<std::size_t>(mu)], n);
  }

  for (std::size_t i = 0; i < sites; ++i) {
    const Coord kv = fourier::mode_of(g, i);
    std::array<fourier::cplx, kDim> th;
    double lam = 0.0;
    for (int mu = 0; mu < kDim; ++mu) {
      th[static_cast<std::size_t>(mu)] = fourier::theta(g, kv[static_cast<std::size_t>(mu)], sym);
      lam += std::norm(th[static_cast<std::size_t>(mu)]);
    }
    if (lam == 0.0) continue;
    const double rate = std::pow(lam, p);
    u_hat[i] *= std::exp(-rate * duration);

    fourier::cplx proj = 0.0;  // theta^* a
    for (int mu = 0; mu < kDim; ++mu)
      proj += std::conj(th[static_cast<std::size_t>(mu)]) * a_hat[static_cast<std::size_t>(mu)][i];
    const double decay = std::exp(-2.0 * rate * duration);
    for (int mu = 0; mu < kDim; ++mu) {
      auto& v = a_hat[static_cast<std::size_t>(mu)][i];
      const fourier::cplx longitudinal = th[static_cast<std::size_t>(mu)] * proj / lam;
      v = longitudinal + decay * (v - longitudinal);
    }
  }

  fourier::inverse(u_hat, n);
  fourier::scatter(u_hat, 0, 0, out.u);
  for (int mu = 0; mu < kDim; ++mu) {
    fourier::inverse(a_hat[static_cast<std::size_t>(mu)], n);
    fourier::scatter(a_hat[static_cast<std::size_t>(mu)], static_cast<std::size_t>(mu), 0, out.A);
  }
  return out;
}

/// Mean-zero Green function of the lattice Laplacian: Delta_h G = delta_0 - 1/N^4
/// with delta_0 the Kronecker delta at the origin.
inline TensorField green_function(const LatticeGeom& g) {
  fourier::Spectrum hat(g.sites());
  for (std::size_t i = 1; i < hat.size(); ++i) {
    hat[i] = -1.0 / fourier::laplace_symbol(g, fourier::mode_of(g, i), Symbol::Lattice);
  }
  fourier::inverse(hat, g.n());
  TensorField out(g, 0, kU1);
  fourier::scatter(hat, 0, 0, out);
  return out;
}

/// S(x) = sum_y <nabla_y G_c(x - y), nabla u(y)> h^4 with G_c = G / h^4 the
/// continuum-normalized Green function. Summation by parts gives
/// u(x) - mean(u) = -S(x) exactly.
inline TensorField green_gradient_pairing(const TensorField& green, const TensorField& u) {
  const auto& g = u.geom();
  const double inv_h = 1.0 / g.spacing();
  const TensorField du = forward_gradient(u);
  // dg_mu(z) = (G(z - mu) - G(z)) / h is the y-derivative of G(x - y) at z = x - y.
  TensorField dg(g, 1, kU1);
  for (std::size_t z = 0; z < g.sites(); ++z)
    for (int mu = 0; mu < kDim; ++mu)
      dg.slot(z, static_cast<std::size_t>(mu))[0] =
          (green.slot(g.shift(z, mu, -1), 0)[0] - green.slot(z, 0)[0]) * inv_h;

  TensorField out(g, 0, kU1);
  parallel_for(g.sites(), [&](std::size_t x) {
    const Coord cx = g.coord(x);
    std::vector<double> terms(g.sites());
    for (std::size_t y = 0; y < g.sites(); ++y) {
      const Coord cy = g.coord(y);
      const std::size_t z = g.site({cx[0] - cy[0], cx[1] - cy[1], cx[2] - cy[2], cx[3] - cy[3]});
      terms[y] = kernel::dot(kDim, dg.data() + z * kDim, du.data() + y * kDim);
    }
    // G_c h^4 = G, so the quadrature weight cancels.
    out.slot(x, 0)[0] = pairwise_sum(terms);
  });
  return out;
}

inline double mean(const TensorField& t, int component = 0) {
  std::vector<double> v(t.geom().sites());
  for (std::size_t s = 0; s < v.size(); ++s) v[s] = t.slot(s, 0)[component];
  return pairwise_sum(v) / static_cast<double>(v.size());
}

/// max_x |u(x) - mean(u) + S(x)|, the residual of the oscillation identity.
inline double oscillation_identity_check(const TensorField& u) {
  if (u.rank() != 0 || !u.group().abelian()) {
    throw UsageError("oscillation_identity_check expects a scalar U1 field");
  }
  const TensorField pairing = green_gradient_pairing(green_function(u.geom()), u);
  const double ubar = mean(u);
  double worst = 0.0;
  for (std::size_t x = 0; x < u.geom().sites(); ++x) {
    worst = std::max(worst, std::abs(u.slot(x, 0)[0] - ubar + pairing.slot(x, 0)[0]));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Band-limited states whose Fourier coefficients do not depend on N.
// ---------------------------------------------------------------------------

/// Fills every component of `t` with a real trigonometric polynomial over the
/// modes max_mu |k_mu| <= band. Coefficients are drawn in a fixed mode order
/// from `rng`, so the continuum function is the same on every lattice with
/// N > 2 band.
inline void fill_band_limited(TensorField& t, int band, std::mt19937_64& rng) {
  const auto& g = t.geom();
  if (2 * band >= g.n()) throw UsageError("band limit must be below the Nyquist mode");
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t m = 0; m < t.slots(); ++m) {
    for (int a = 0; a < t.dim(); ++a) {
      fourier::Spectrum hat(g.sites(), 0.0);
      for (int k4 = -band; k4 <= band; ++k4)
        for (int k3 = -band; k3 <= band; ++k3)
          for (int k2 = -band; k2 <= band; ++k2)
            for (int k1 = -band; k1 <= band; ++k1) {
              const Coord kv{k1, k2, k3, k4};
              // canonical half: first nonzero component positive
              int lead = 0;
              for (int v : kv)
                if (v != 0) {
                  lead = v;
                  break;
                }
              if (lead < 0) continue;
              const double decay = 1.0 / (1.0 + k1 * k1 + k2 * k2 + k3 * k3 + k4 * k4);
              const double re = normal(rng) * decay;
              const double im = lead == 0 ? 0.0 : normal(rng) * decay;
              const fourier::cplx c(re, im);
              const double norm = static_cast<double>(g.sites());
              hat[g.site(kv)] += c * norm;
              if (lead != 0) hat[g.site({-k1, -k2, -k3, -k4})] += std::conj(c) * norm;
            }
      fourier::inverse(hat, g.n());
      fourier::scatter(hat, m, a, t);
    }
  }
}

/// A band-limited (A, u) state; identical continuum data for every N > 2 band.
inline FlowState band_limited_state(const LatticeGeom& g, GroupSpec grp, int k, std::uint64_t seed,
                                    int band, double amplitude = 1.0) {
  std::mt19937_64 rng(seed);
  FlowState s = FlowState::zero(g, grp, k);
  fill_band_limited(s.A, band, rng);
  fill_band_limited(s.u, band, rng);
  s.A *= amplitude;
  s.u *= amplitude;
  return s;
}

/// Exact continuum derivative along mu of a band-limited field.
inline TensorField spectral_derivative(const TensorField& t, int mu) {
  const auto& g = t.geom();
  TensorField out(g, t.rank(), t.group());
  for (std::size_t m = 0; m < t.slots(); ++m) {
    for (int a = 0; a < t.dim(); ++a) {
      auto hat = fourier::gather(t, m, a);
      fourier::forward(hat, g.n());
      for (std::size_t i = 0; i < hat.size(); ++i) {
        const Coord kv = fourier::mode_of(g, i);
        hat[i] *= fourier::theta(g, kv[static_cast<std::size_t>(mu)], Symbol::Continuum);
      }
      fourier::inverse(hat, g.n());
      fourier::scatter(hat, m, a, out);
    }
  }
  return out;
}

}  // namespace ymhk
