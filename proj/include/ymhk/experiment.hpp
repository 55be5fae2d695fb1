#pragma once

// Turns a RunConfig into the seeded initial state and integrator settings, so
// the command-line tool and the test suites build identical runs.

#include <algorithm>

#include "ymhk/config.hpp"
#include "ymhk/flow.hpp"
#include "ymhk/random_field.hpp"

namespace ymhk {

/// A is drawn from `seed`, u from `seed + 1`.
inline FlowState initial_state(const RunConfig& c) {
  const LatticeGeom geom(c.N, c.L);
  const GroupSpec g{c.group};
  return {0.0, random_field(geom, 1, g, {c.seed, c.alpha, c.amplitude_A}),
          random_field(geom, 0, g, {c.seed + 1, c.alpha, c.amplitude_u}), c.k};
}

/// t_end = 0 in the config resolves to 20 * dt_max.
inline FlowConfig flow_config(const RunConfig& c) {
  const LatticeGeom geom(c.N, c.L);
  FlowConfig f;
  const double cap = stability_cap(geom, c.k);
  f.dt_max = c.dt_max > 0 ? std::min(c.dt_max, cap) : cap;
  f.t_end = c.t_end > 0 ? c.t_end : 20.0 * f.dt_max;
  f.dt_init = c.dt_init;
  f.tolerance = c.tolerance;
  f.monotone_tol = c.monotone_tol;
  f.monitor_every = c.monitor_every;
  f.snapshot_every = c.snapshot_every;
  f.p_list = c.p_list;
  return f;
}

}  // namespace ymhk
