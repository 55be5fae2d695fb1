#pragma once

// Checks that turn the qualitative statements about the flow into numbers
// with tolerances: Kato's inequality, smoothing-rate exponents, scaling-law
// commutation, blow-up normalization and L^p tracking.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ymhk/flow.hpp"
#include "ymhk/spectral.hpp"

namespace ymhk {

// ---------------------------------------------------------------------------
// Kato's inequality |d|u|| <= |nabla u|
// ---------------------------------------------------------------------------

struct KatoReport {
  double max_violation = 0.0;  ///< max_x (|d|u||(x) - |nabla u|(x)); may be negative
  double slack = 0.0;          ///< max_x of the discretization allowance eps_h(x)
  double excess = 0.0;         ///< max_x (violation(x) - eps_h(x))
  bool pass = true;
};

/// Pointwise comparison with forward differences. The allowance
///   eps_h(x) = | (h |[A_mu, u]|^2 / (2|u|))_mu |
/// bounds the second-order defect of |u + h [A_mu, u]| versus |u|, so a
/// correct implementation never exceeds it. With A = 0 the discrete
/// inequality is exact (reverse triangle inequality).
inline KatoReport kato_check(const GaugeField& a, const TensorField& u) {
  if (u.rank() != 0) throw UsageError("kato_check expects a rank-0 Higgs field");
  detail::check_gauge(a, u, "kato_check");
  const auto& g = u.geom();
  const GroupSpec grp = u.group();
  const int dim = grp.dim();
  const double h = g.spacing();

  std::vector<double> viol(g.sites()), slack(g.sites()), grad(g.sites());
  parallel_for(g.sites(), [&](std::size_t s) {
    const double* here = u.slot(s, 0);
    const double n_here = std::sqrt(kernel::dot(dim, here, here));
    double d_norm_sq = 0.0, cov_sq = 0.0, slack_sq = 0.0;
    for (int mu = 0; mu < kDim; ++mu) {
      const double* there = u.slot(g.shift(s, mu, +1), 0);
      const double n_there = std::sqrt(kernel::dot(dim, there, there));
      const double d = (n_there - n_here) / h;
      d_norm_sq += d * d;
      std::array<double, 3> br{};
      kernel::add_bracket(grp, a.slot(s, static_cast<std::size_t>(mu)), here, 1.0, br.data());
      double c_sq = 0.0;
      for (int c = 0; c < dim; ++c) {
        const double v = (there[c] - here[c]) / h + br[static_cast<std::size_t>(c)];
        c_sq += v * v;
      }
      cov_sq += c_sq;
      if (n_here > 0.0) {
        const double sm = h * kernel::dot(dim, br.data(), br.data()) / (2.0 * n_here);
        slack_sq += sm * sm;
      }
    }
    viol[s] = std::sqrt(d_norm_sq) - std::sqrt(cov_sq);
    slack[s] = std::sqrt(slack_sq);
    grad[s] = std::sqrt(cov_sq);
  });

  KatoReport r;
  r.max_violation = -std::numeric_limits<double>::infinity();
  r.excess = -std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (std::size_t s = 0; s < viol.size(); ++s) {
    r.max_violation = std::max(r.max_violation, viol[s]);
    r.slack = std::max(r.slack, slack[s]);
    r.excess = std::max(r.excess, viol[s] - slack[s]);
    scale = std::max(scale, grad[s]);
  }
  r.pass = r.excess <= 1e-12 * scale;
  return r;
}

// ---------------------------------------------------------------------------
// Smoothing rate
// ---------------------------------------------------------------------------

struct SmoothingSample {
  double t = 0.0;
  double grad_q_sq = 0.0;  ///< ||nabla^(q) X||^2
  double base_sq = 0.0;    ///< ||X||^2
};

struct SmoothingFit {
  double slope = 0.0;      ///< d log(||nabla^(q) X||^2 / ||X||^2) / d log t
  double raw_slope = 0.0;  ///< d log ||nabla^(q) X||^2 / d log t
  double residual = 0.0;   ///< rms residual of the normalized fit
  double target = 0.0;     ///< -q / (k + 1)
  bool inconclusive = false;
  std::string reason;
};

namespace detail {
struct LineFit {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
};
inline LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}
}  // namespace detail

/// Fits the decay of the q-th derivative norm normalized by the dissipating
/// base norm. For a power-law initial spectrum the normalized quantity decays
/// like t^(-q/(k+1)) regardless of the spectral slope, which isolates the
/// smoothing effect from plain dissipation.
inline SmoothingFit smoothing_rate(std::span<const SmoothingSample> samples, int q, int k) {
  SmoothingFit fit;
  fit.target = -static_cast<double>(q) / (k + 1);
  if (samples.size() < 8) {
    fit.inconclusive = true;
    fit.reason = "fewer than 8 snapshots";
    return fit;
  }
  std::vector<double> logt, lograw, lognorm, t;
  for (const auto& s : samples) {
    if (!(s.t > 0.0) || !(s.grad_q_sq > 0.0) || !(s.base_sq > 0.0)) {
      fit.inconclusive = true;
      fit.reason = "non-positive time or norm";
      return fit;
    }
    t.push_back(s.t);
    logt.push_back(std::log(s.t));
    lograw.push_back(std::log(s.grad_q_sq));
    lognorm.push_back(std::log(s.grad_q_sq / s.base_sq));
  }
  const auto [tmin, tmax] = std::minmax_element(t.begin(), t.end());
  if (*tmax / *tmin < 10.0 * (1.0 - 1e-12)) {
    fit.inconclusive = true;
    fit.reason = "time span below one decade";
    return fit;
  }
  const auto norm_fit = detail::least_squares(logt, lognorm);
  fit.slope = norm_fit.slope;
  fit.residual = norm_fit.rms;
  fit.raw_slope = detail::least_squares(logt, lograw).slope;

  // A single decaying eigenmode gives an exact exponential, not a power law.
  const auto expo = detail::least_squares(t, lograw);
  const auto [lo, hi] = std::minmax_element(lograw.begin(), lograw.end());
  if (expo.rms <= 1e-9 * std::max(1.0, *hi - *lo)) {
    fit.inconclusive = true;
    fit.reason = "single exponential decay";
  }
  return fit;
}

enum class SmoothedField { Higgs, Curvature };

/// ||nabla^(q) X||^2 and ||X||^2 for X = u or F at each snapshot.
inline std::vector<SmoothingSample> smoothing_samples(std::span<const FlowState> snapshots, int q,
                                                      SmoothedField which = SmoothedField::Higgs) {
  std::vector<SmoothingSample> out;
  for (const auto& s : snapshots) {
    const TensorField base = which == SmoothedField::Higgs ? s.u : curvature(s.A);
    const TensorField d = iterated_diff(s.A, base, q);
    out.push_back({s.t, l2_inner(d, d), l2_inner(base, base)});
  }
  return out;
}

/// Log-spaced times covering one decade starting at start_factor / lambda_max^(k+1),
/// i.e. after grid-scale modes have been smoothed but long before the lowest
/// mode is depleted.
inline std::vector<double> smoothing_window(const LatticeGeom& g, int k, int count = 10,
                                            double start_factor = 20.0) {
  const double lmax = 16.0 / (g.spacing() * g.spacing());
  const double t0 = start_factor / std::pow(lmax, k + 1);
  std::vector<double> ts;
  for (int i = 0; i < count; ++i) ts.push_back(t0 * std::pow(10.0, static_cast<double>(i) / (count - 1)));
  return ts;
}

/// Abelian snapshots of `initial` at the given times via the lattice-exact oracle.
inline std::vector<FlowState> abelian_snapshots(const FlowState& initial,
                                                std::span<const double> times) {
  std::vector<FlowState> out;
  for (double t : times) out.push_back(exact_abelian_flow(initial, t, Symbol::Lattice));
  return out;
}

// ---------------------------------------------------------------------------
// Scaling law under the covering map
// ---------------------------------------------------------------------------

/// sup |rescale(flow(s, T)) - flow(rescale(s), T / m^(2(k+1)))| relative to
/// the sup of the first path.
inline double scaling_commutation_error(const FlowState& s, int m, double duration, Symbol sym) {
  const FlowState a = rescale(exact_abelian_flow(s, duration, sym), m);
  const double shrink = std::pow(static_cast<double>(m), 2 * (s.k + 1));
  const FlowState b = exact_abelian_flow(rescale(s, m), duration / shrink, sym);
  const double diff = detail::max_abs_diff(a, b);
  const double scale = detail::max_abs(a);
  return scale > 0.0 ? diff / scale : diff;
}

struct ScalingReport {
  double spectral_error = 0.0;
  double fd_error_coarse = 0.0;
  double fd_error_fine = 0.0;
  double fd_ratio = 0.0;  ///< coarse / fine; >= 2 means first order or better
  int n_spectral = 0, n_coarse = 0, n_fine = 0;
};

/// Flow-then-rescale versus rescale-then-flow on band-limited U(1) data.
/// The continuum-symbol path is exact; the lattice-symbol (finite-difference)
/// path is compared on N and 2N with the same continuum data, band-limited to
/// |k_mu| <= fd_band so that the refinement is in the asymptotic regime.
inline ScalingReport scaling_law_check(int k, int m, std::uint64_t seed, int n_spectral = 16,
                                       int n_coarse = 16, int fd_band = 1) {
  if (m < 2) throw UsageError("scaling_law_check: m must be >= 2");
  const double duration = 0.2 / std::pow(4.0 * std::numbers::pi * std::numbers::pi, k + 1);
  ScalingReport r;
  r.n_spectral = n_spectral;
  r.n_coarse = n_coarse;
  r.n_fine = 2 * n_coarse;
  const int band_s = (n_spectral / 2 - 1) / m;
  const int band_fd = fd_band;
  if (band_s < 1 || band_fd < 1 || 2 * m * band_fd >= n_coarse) throw UsageError("scaling_law_check: lattice too small for m");

  const auto s = band_limited_state(LatticeGeom(n_spectral), kU1, k, seed, band_s);
  r.spectral_error = scaling_commutation_error(s, m, duration, Symbol::Continuum);

  const auto coarse = band_limited_state(LatticeGeom(n_coarse), kU1, k, seed, band_fd);
  const auto fine = band_limited_state(LatticeGeom(r.n_fine), kU1, k, seed, band_fd);
  r.fd_error_coarse = scaling_commutation_error(coarse, m, duration, Symbol::Lattice);
  r.fd_error_fine = scaling_commutation_error(fine, m, duration, Symbol::Lattice);
  r.fd_ratio = r.fd_error_fine > 0.0 ? r.fd_error_coarse / r.fd_error_fine : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Blow-up normalization
// ---------------------------------------------------------------------------

enum class DerivativeMode { Spectral, Lattice };

/// max_x (|F|(x) + |nabla u|(x)) with spectral or forward-difference derivatives.
inline double blowup_quantity(const FlowState& s, DerivativeMode mode) {
  if (mode == DerivativeMode::Lattice) return monitor(s, {}).sup_blowup;
  const auto& g = s.geom();
  const GroupSpec grp = s.group();
  const int dim = grp.dim();
  std::array<TensorField, kDim> dA, du;
  for (int mu = 0; mu < kDim; ++mu) {
    dA[static_cast<std::size_t>(mu)] = spectral_derivative(s.A, mu);
    du[static_cast<std::size_t>(mu)] = spectral_derivative(s.u, mu);
  }
  double best = 0.0;
  for (std::size_t x = 0; x < g.sites(); ++x) {
    double f_sq = 0.0, g_sq = 0.0;
    std::array<double, 3> v{};
    for (int mu = 0; mu < kDim; ++mu) {
      for (int nu = 0; nu < kDim; ++nu) {
        if (mu == nu) continue;
        const double* dmu_anu = dA[static_cast<std::size_t>(mu)].slot(x, static_cast<std::size_t>(nu));
        const double* dnu_amu = dA[static_cast<std::size_t>(nu)].slot(x, static_cast<std::size_t>(mu));
        for (int c = 0; c < dim; ++c) v[static_cast<std::size_t>(c)] = dmu_anu[c] - dnu_amu[c];
        kernel::add_bracket(grp, s.A.slot(x, static_cast<std::size_t>(mu)),
                            s.A.slot(x, static_cast<std::size_t>(nu)), 1.0, v.data());
        f_sq += kernel::dot(dim, v.data(), v.data());
      }
      const double* d = du[static_cast<std::size_t>(mu)].slot(x, 0);
      for (int c = 0; c < dim; ++c) v[static_cast<std::size_t>(c)] = d[c];
      kernel::add_bracket(grp, s.A.slot(x, static_cast<std::size_t>(mu)), s.u.slot(x, 0), 1.0,
                          v.data());
      g_sq += kernel::dot(dim, v.data(), v.data());
    }
    best = std::max(best, std::sqrt(f_sq) + std::sqrt(g_sq));
  }
  return best;
}

/// Sets rho = S^(-(k+1)) from the monitored supremum S, applies the blow-up
/// scaling (space by rho^(1/(2(k+1))), fields by the same factor) and returns
/// the supremum of the rescaled state, recomputed on the rescaled torus.
inline double blowup_normalization_check(const FlowState& s,
                                         DerivativeMode mode = DerivativeMode::Spectral) {
  const double sup = blowup_quantity(s, mode);
  if (!(sup > 0.0)) throw UsageError("blowup_normalization_check: zero state has no normalization");
  const int kp1 = s.k + 1;
  const double rho = std::pow(sup, -static_cast<double>(kp1));
  const double sigma = std::pow(rho, 1.0 / (2.0 * kp1));
  const LatticeGeom zoomed(s.geom().n(), s.geom().side() / sigma);
  FlowState r{s.t / rho, GaugeField(zoomed, 1, s.group()), TensorField(zoomed, 0, s.group()), s.k};
  for (std::size_t i = 0; i < r.A.size(); ++i) r.A.values()[i] = sigma * s.A.values()[i];
  for (std::size_t i = 0; i < r.u.size(); ++i) r.u.values()[i] = sigma * s.u.values()[i];
  return blowup_quantity(r, mode);
}

// ---------------------------------------------------------------------------
// L^p tracking
// ---------------------------------------------------------------------------

struct LpPoint {
  double t = 0.0;
  double lp = 0.0;   ///< ||F||_p + ||nabla u||_p
  double sup = 0.0;  ///< ||F||_inf + ||nabla u||_inf
};

inline std::vector<LpPoint> lp_track(const Trajectory& traj, double p) {
  if (!(p >= 1.0)) throw UsageError("lp_track requires p >= 1");
  const auto it = std::find(traj.p_list.begin(), traj.p_list.end(), p);
  if (it == traj.p_list.end()) throw UsageError("lp_track: p was not recorded in this trajectory");
  const auto idx = static_cast<std::size_t>(it - traj.p_list.begin());
  std::vector<LpPoint> out;
  for (const auto& r : traj.records) out.push_back({r.t, r.F_lp[idx] + r.gradu_lp[idx], r.sup_F + r.sup_gradu});
  return out;
}

/// True when the series is nonincreasing (within rel_tol of its max) from its
/// maximum onwards.
inline bool monotone_after_max(std::span<const double> v, double rel_tol = 1e-12) {
  if (v.empty()) return true;
  const auto peak = std::max_element(v.begin(), v.end());
  const double tol = rel_tol * std::abs(*peak);
  for (auto it = peak; it + 1 != v.end(); ++it)
    if (*(it + 1) > *it + tol) return false;
  return true;
}

}  // namespace ymhk
