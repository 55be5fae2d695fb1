#pragma once

// Negative gradient flow of the discrete k-energy, explicit RK4 with
// step-doubling error control, trajectory monitoring, and the integer
// covering-map rescaling of the torus.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ymhk/energy.hpp"

namespace ymhk {

struct FlowState {
  double t = 0.0;
  GaugeField A;
  TensorField u;
  int k = 0;

  const LatticeGeom& geom() const { return u.geom(); }
  GroupSpec group() const { return u.group(); }

  static FlowState zero(const LatticeGeom& geom, GroupSpec g, int k) {
    return {0.0, GaugeField(geom, 1, g), TensorField(geom, 0, g), k};
  }
};

struct FlowConfig {
  double t_end = 0.0;
  double dt_init = 0.0;
  double dt_max = 0.0;        ///< 0 means stability_cap(geom, k)
  double tolerance = 1e-8;    ///< step-doubling relative error per step
  double monotone_tol = 1e-10;  ///< allowed energy increase, relative to E(0)
  int monitor_every = 1;
  int snapshot_every = 0;     ///< 0 disables snapshots
  std::vector<double> p_list{4.0};
};

struct Record {
  double t = 0.0;
  EnergyBreakdown energy;
  double sup_F = 0.0;
  double sup_gradu = 0.0;
  double sup_blowup = 0.0;  ///< max_x (|F|(x) + |nabla u|(x))
  double u_l2 = 0.0;
  std::vector<double> F_lp;      ///< one entry per configured p
  std::vector<double> gradu_lp;
  double dt = 0.0;
};

struct Trajectory {
  std::vector<double> p_list;
  std::vector<Record> records;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t non_monotone_steps = 0;  ///< total_k rose by more than the tolerance
  double max_energy_rise = 0.0;        ///< largest observed increase of total_k
};

/// Thrown when the state stops being finite; carries the last finite state.
class FlowAborted : public std::runtime_error {
 public:
  FlowAborted(const std::string& what, FlowState last_good, Trajectory partial)
      : std::runtime_error(what), last_good_(std::move(last_good)), partial_(std::move(partial)) {}
  const FlowState& last_good() const { return last_good_; }
  const Trajectory& partial() const { return partial_; }

 private:
  FlowState last_good_;
  Trajectory partial_;
};

/// Largest stable step for explicit stepping of the order-2(k+1) operator:
/// safety * 2 / lambda_max^(k+1), lambda_max = 16 / h^2.
inline double stability_cap(const LatticeGeom& geom, int k) {
  constexpr double safety = 0.5;
  const double h = geom.spacing();
  const double lambda_max = 16.0 / (h * h);
  return safety * 2.0 / std::pow(lambda_max, k + 1);
}

inline Record monitor(const FlowState& s, const std::vector<double>& p_list = {4.0}) {
  Record r;
  r.t = s.t;
  r.energy = ymh_k_energy(s.A, s.u, s.k);
  const TensorField f = curvature(s.A);
  const TensorField du = covariant_diff(s.A, s.u);
  const auto nf = pointwise_norms(f);
  const auto nu = pointwise_norms(du);
  for (std::size_t i = 0; i < nf.size(); ++i) {
    r.sup_F = std::max(r.sup_F, nf[i]);
    r.sup_gradu = std::max(r.sup_gradu, nu[i]);
    r.sup_blowup = std::max(r.sup_blowup, nf[i] + nu[i]);
  }
  r.u_l2 = lp_norm(s.u, 2.0);
  for (double p : p_list) {
    r.F_lp.push_back(lp_norm(f, p));
    r.gradu_lp.push_back(lp_norm(du, p));
  }
  return r;
}

inline FlowState step_rk4(const FlowState& s, double dt) {
  if (!(dt > 0.0)) throw UsageError("step_rk4: dt must be positive");
  auto advance = [&](const FlowState& base, const Gradient& g, double c) {
    FlowState out = base;
    out.A.axpy(-c, g.dA);
    out.u.axpy(-c, g.du);
    return out;
  };
  const Gradient k1 = grad_ymh_k(s.A, s.u, s.k);
  const FlowState s2 = advance(s, k1, 0.5 * dt);
  const Gradient k2 = grad_ymh_k(s2.A, s2.u, s.k);
  const FlowState s3 = advance(s, k2, 0.5 * dt);
  const Gradient k3 = grad_ymh_k(s3.A, s3.u, s.k);
  const FlowState s4 = advance(s, k3, dt);
  const Gradient k4 = grad_ymh_k(s4.A, s4.u, s.k);

  FlowState out = s;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < out.A.size(); ++i) {
    out.A.values()[i] -= w * (k1.dA.values()[i] + 2.0 * k2.dA.values()[i] +
                              2.0 * k3.dA.values()[i] + k4.dA.values()[i]);
  }
  for (std::size_t i = 0; i < out.u.size(); ++i) {
    out.u.values()[i] -= w * (k1.du.values()[i] + 2.0 * k2.du.values()[i] +
                              2.0 * k3.du.values()[i] + k4.du.values()[i]);
  }
  out.t = s.t + dt;
  return out;
}

namespace detail {
inline double max_abs(const FlowState& s) {
  double m = 0.0;
  for (double v : s.A.values()) m = std::max(m, std::abs(v));
  for (double v : s.u.values()) m = std::max(m, std::abs(v));
  return m;
}
inline double max_abs_diff(const FlowState& x, const FlowState& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.A.size(); ++i)
    m = std::max(m, std::abs(x.A.values()[i] - y.A.values()[i]));
  for (std::size_t i = 0; i < x.u.size(); ++i)
    m = std::max(m, std::abs(x.u.values()[i] - y.u.values()[i]));
  return m;
}
inline bool finite(const FlowState& s) { return s.A.finite() && s.u.finite(); }
}  // namespace detail

struct RunResult {
  FlowState state;
  Trajectory trajectory;
};

using SnapshotSink = std::function<void(const FlowState&)>;

/// Integrates to config.t_end. A step is accepted when the step-doubling
/// estimate |y_{dt/2,dt/2} - y_dt| / 15, relative to max|y|, is within the
/// tolerance; the two-half-step solution is kept.
inline RunResult run(FlowState state, const FlowConfig& cfg, const SnapshotSink& snapshot = {}) {
  if (!(cfg.t_end > 0.0)) throw UsageError("run: t_end must be positive");
  const double cap = stability_cap(state.geom(), state.k);
  const double dt_max = cfg.dt_max > 0.0 ? std::min(cfg.dt_max, cap) : cap;
  double dt = cfg.dt_init > 0.0 ? cfg.dt_init : dt_max;
  if (dt > dt_max) dt = dt_max;
  if (!(cfg.tolerance > 0.0)) throw UsageError("run: tolerance must be positive");
  const int cadence = std::max(1, cfg.monitor_every);

  Trajectory traj;
  traj.p_list = cfg.p_list;
  traj.records.push_back(monitor(state, cfg.p_list));
  if (snapshot && cfg.snapshot_every > 0) snapshot(state);
  const double e0 = traj.records.front().energy.total_k();
  double e_prev = e0;

  const double t_start = state.t;
  const double t_stop = t_start + cfg.t_end;
  std::size_t step = 0;
  while (state.t < t_stop) {
    double h = std::min(dt, t_stop - state.t);
    // Avoid a sliver step at the end from accumulated rounding in t.
    if (t_stop - (state.t + h) < 1e-12 * cfg.t_end) h = t_stop - state.t;

    const FlowState full = step_rk4(state, h);
    const FlowState half = step_rk4(step_rk4(state, 0.5 * h), 0.5 * h);
    if (!detail::finite(half) || !detail::finite(full)) {
      throw FlowAborted("non-finite value at t = " + std::to_string(state.t + h), state, traj);
    }
    const double scale = std::max(detail::max_abs(state), std::numeric_limits<double>::min());
    const double err = detail::max_abs_diff(half, full) / 15.0 / scale;
    const double factor = err > 0.0 ? 0.9 * std::pow(cfg.tolerance / err, 0.2) : 2.0;

    if (err <= cfg.tolerance) {
      state = half;
      state.t = (t_stop - state.t < 1e-12 * cfg.t_end) ? t_stop : state.t;
      ++step;
      ++traj.accepted_steps;
      const bool last = state.t >= t_stop;
      const double e_now = ymh_k_total(state.A, state.u, state.k);
      const double rise = e_now - e_prev;
      traj.max_energy_rise = std::max(traj.max_energy_rise, rise);
      if (rise > cfg.monotone_tol * e0) ++traj.non_monotone_steps;
      e_prev = e_now;
      if (step % static_cast<std::size_t>(cadence) == 0 || last) {
        Record r = monitor(state, cfg.p_list);
        r.dt = h;
        traj.records.push_back(std::move(r));
      }
      if (snapshot && cfg.snapshot_every > 0 &&
          (step % static_cast<std::size_t>(cfg.snapshot_every) == 0 || last)) {
        snapshot(state);
      }
      dt = std::min(dt_max, h * std::min(2.0, factor));
    } else {
      ++traj.rejected_steps;
      dt = h * std::max(0.2, factor);
    }
  }
  return {std::move(state), std::move(traj)};
}

/// Pullback under the covering map x -> m x of the torus:
/// A'(j) = m A(m j), u'(j) = m u(m j), t' = t / m^(2(k+1)).
inline FlowState rescale(const FlowState& s, int m) {
  if (m < 2) throw UsageError("rescale: factor must be an integer >= 2");
  const auto& g = s.geom();
  auto pull = [&](const TensorField& in) {
    TensorField out(g, in.rank(), in.group());
    for (std::size_t site = 0; site < g.sites(); ++site) {
      Coord c = g.coord(site);
      for (auto& v : c) v *= m;
      const auto src = in.at_site(g.site(c));
      auto dst = out.at_site(site);
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] = m * src[i];
    }
    return out;
  };
  FlowState out{s.t / std::pow(static_cast<double>(m), 2 * (s.k + 1)), pull(s.A), pull(s.u), s.k};
  return out;
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

inline constexpr const char* kTrajectoryHeader =
    "t,e_kF,e_ku,e_0F,e_0u,total_k,total_0,sup_F,sup_gradu,sup_blowup,u_l2,F_lp,gradu_lp,dt";

/// Writes the trajectory with the fixed header. The L^p columns use the first
/// configured p. Values are printed with 17 significant digits.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << kTrajectoryHeader << '\n';
  char buf[64];
  auto put = [&](double v, bool last = false) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << (last ? '\n' : ',');
  };
  for (const auto& r : traj.records) {
    put(r.t);
    put(r.energy.e_kF);
    put(r.energy.e_ku);
    put(r.energy.e_0F);
    put(r.energy.e_0u);
    put(r.energy.total_k());
    put(r.energy.total_0());
    put(r.sup_F);
    put(r.sup_gradu);
    put(r.sup_blowup);
    put(r.u_l2);
    put(r.F_lp.empty() ? 0.0 : r.F_lp.front());
    put(r.gradu_lp.empty() ? 0.0 : r.gradu_lp.front());
    put(r.dt, true);
  }
}

}  // namespace ymhk
