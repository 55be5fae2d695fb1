// ymhk: command-line front end for the Yang-Mills-Higgs k-flow laboratory.
//
// Exit codes: 0 success / check passed, 1 check failed, 2 usage or config
// error, 3 flow aborted on a non-finite value.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ymhk/ymhk.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ymhk;

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kAborted = 3 };

int emit(const CheckReport& r, const std::string& out_dir) {
  const json j = r.to_json();
  std::cout << j.dump(2) << '\n';
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / (r.name + ".json")) << j.dump(2) << '\n';
  }
  return r.pass ? kOk : kCheckFailed;
}

std::string resolve_out_dir(const std::string& flag, const std::string& from_config) {
  if (!flag.empty()) return flag;
  if (!from_config.empty()) return from_config;
  if (const char* env = std::getenv("YMHK_OUT_DIR"); env && *env) return env;
  return "ymhk_out";
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::string out_dir;
  long long seed = -1;
  bool dry_run = false;
};

int cmd_run(const RunArgs& a) {
  RunConfig cfg;
  try {
    cfg = load_config(a.config);
    if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  const std::string out_dir = resolve_out_dir(a.out_dir, cfg.out_dir);
  const FlowConfig fcfg = flow_config(cfg);
  if (a.dry_run) {
    std::cout << "config ok: group=" << to_string(cfg.group) << " N=" << cfg.N << " k=" << cfg.k
              << " t_end=" << fcfg.t_end << " dt_max=" << fcfg.dt_max << " out_dir=" << out_dir << '\n';
    return kOk;
  }

  fs::create_directories(out_dir);
  const auto started = std::chrono::steady_clock::now();
  int snap_index = 0;
  auto sink = [&](const FlowState& s) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%06d.bin", snap_index++);
    io::save_state((fs::path(out_dir) / name).string(), s);
  };

  json manifest;
  manifest["version"] = kVersion;
  manifest["config_path"] = a.config;
  manifest["config"] = cfg.raw;
  manifest["seed"] = cfg.seed;
  manifest["workers"] = workers();
  manifest["t_end"] = fcfg.t_end;
  manifest["dt_max"] = fcfg.dt_max;

  int code = kOk;
  Trajectory traj;
  try {
    auto result = run(initial_state(cfg), fcfg, sink);
    traj = std::move(result.trajectory);
    manifest["status"] = "completed";
    manifest["final_t"] = result.state.t;
  } catch (const FlowAborted& e) {
    traj = e.partial();
    manifest["status"] = "aborted";
    manifest["error"] = e.what();
    manifest["last_good_t"] = e.last_good().t;
    io::save_state((fs::path(out_dir) / "last_good.bin").string(), e.last_good());
    std::cerr << "error: flow aborted: " << e.what() << '\n';
    code = kAborted;
  }
  {
    std::ofstream csv(fs::path(out_dir) / "trajectory.csv");
    write_trajectory_csv(csv, traj);
  }
  manifest["accepted_steps"] = traj.accepted_steps;
  manifest["rejected_steps"] = traj.rejected_steps;
  manifest["non_monotone_steps"] = traj.non_monotone_steps;
  manifest["snapshots"] = snap_index;
  manifest["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::ofstream(fs::path(out_dir) / "manifest.json") << manifest.dump(2) << '\n';
  return code;
}

int cmd_gradcheck(const std::string& group, int k, int n, std::uint64_t seed, const std::string& out) {
  if (n < 3 || n > 6) throw UsageError("gradcheck: N must be in [3, 6]");
  if (k < 0) throw UsageError("gradcheck: k must be >= 0");
  const GroupSpec g{parse_group(group)};
  const LatticeGeom geom(n);
  const auto a = random_field(geom, 1, g, {seed, 0.0, 1.0});
  const auto u = random_field(geom, 0, g, {seed + 1, 0.0, 1.0});
  const auto grad = grad_ymh_k(a, u, k);
  double best = std::numeric_limits<double>::infinity();
  double best_eps = 0.0;
  for (double eps : {1e-3, 1e-4, 1e-5, 1e-6}) {
    const double e = relative_sup_error(grad, fd_gradient_oracle(a, u, k, eps));
    if (e < best) {
      best = e;
      best_eps = eps;
    }
  }
  CheckReport r{"gradcheck", {{"group", group}, {"k", k}, {"N", n}, {"seed", seed}, {"best_eps", best_eps}},
                1e-6, best, best <= 1e-6};
  return emit(r, out);
}

int cmd_oracle(const std::string& config_path, long long seed, const std::string& out) {
  RunConfig cfg = load_config(config_path);
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (cfg.group != Group::U1) throw UsageError("oracle: the closed-form flow exists only for U1");
  FlowConfig fcfg = flow_config(cfg);
  fcfg.snapshot_every = 0;
  const FlowState init = initial_state(cfg);
  const auto result = run(init, fcfg);
  const FlowState exact = exact_abelian_flow(init, result.state.t - init.t);
  const double scale = std::max(sup_norm(init.A), sup_norm(init.u));
  const double err = std::max(sup_norm(result.state.A - exact.A), sup_norm(result.state.u - exact.u)) /
                     (scale > 0 ? scale : 1.0);
  CheckReport r{"oracle", {{"config", config_path}, {"seed", cfg.seed}, {"t", result.state.t}, {"k", cfg.k}},
                1e-6, err, err <= 1e-6};
  return emit(r, out);
}

int cmd_green(int n, std::uint64_t seed, const std::string& out) {
  const LatticeGeom geom(n);
  const TensorField G = green_function(geom);
  GaugeField zero(geom, 1, kU1);
  TensorField lap = bochner_laplacian(zero, G);
  double identity = 0.0;
  const double inv = 1.0 / static_cast<double>(geom.sites());
  for (std::size_t s = 0; s < geom.sites(); ++s)
    identity = std::max(identity, std::abs(lap.slot(s, 0)[0] + inv - (s == 0 ? 1.0 : 0.0)));
  const double mean_g = std::abs(mean(G));
  const auto u = random_field(geom, 0, kU1, {seed, 3.0, 1.0});
  const double osc = oscillation_identity_check(u) / sup_norm(u);
  const bool pass = osc <= 1e-8 && identity <= 1e-12 && mean_g <= 1e-12;
  CheckReport r{"green",
                {{"N", n}, {"seed", seed}, {"laplacian_identity", identity}, {"mean", mean_g}},
                1e-8, osc, pass};
  return emit(r, out);
}

int cmd_scale(int k, int m, std::uint64_t seed, const std::string& out) {
  if (k < 0 || m < 2) throw UsageError("scale: need k >= 0 and m >= 2");
  const auto s = scaling_law_check(k, m, seed);
  const bool pass = s.spectral_error <= 1e-10 && s.fd_ratio >= 1.8;
  CheckReport r{"scale",
                {{"k", k}, {"m", m}, {"seed", seed}, {"fd_error_coarse", s.fd_error_coarse},
                 {"fd_error_fine", s.fd_error_fine}, {"fd_ratio", s.fd_ratio},
                 {"n_spectral", s.n_spectral}, {"n_coarse", s.n_coarse}},
                1e-10, s.spectral_error, pass};
  return emit(r, out);
}

int diag_kato(std::uint64_t seed, const std::string& out) {
  const LatticeGeom geom(8);
  const auto a = random_field(geom, 1, kSU2, {seed, 2.0, 1.0});
  const auto u = random_field(geom, 0, kSU2, {seed + 1, 2.0, 1.0});
  const auto rep = kato_check(a, u);
  CheckReport r{"kato", {{"N", 8}, {"group", "SU2"}, {"seed", seed}, {"slack", rep.slack},
                         {"max_violation", rep.max_violation}},
                0.0, rep.excess, rep.pass};
  return emit(r, out);
}

int diag_smoothing(std::uint64_t seed, const std::string& out) {
  const int k = 1, q = 1;
  const LatticeGeom geom(16);
  FlowState s = FlowState::zero(geom, kU1, k);
  s.u = random_field(geom, 0, kU1, {seed, 0.0, 1.0});
  const auto times = smoothing_window(geom, k);
  const auto snaps = abelian_snapshots(s, times);
  const auto samples = smoothing_samples(snaps, q);
  const auto fit = smoothing_rate(samples, q, k);
  const double dev = std::abs(fit.slope - fit.target);
  CheckReport r{"smoothing", {{"N", 16}, {"k", k}, {"q", q}, {"seed", seed}, {"slope", fit.slope},
                              {"raw_slope", fit.raw_slope}, {"target", fit.target},
                              {"t_first", times.front()}, {"t_last", times.back()},
                              {"inconclusive", fit.inconclusive}},
                0.25, dev, !fit.inconclusive && dev <= 0.25};
  return emit(r, out);
}

int diag_blowup(std::uint64_t seed, const std::string& out) {
  double worst = 0.0;
  for (int k = 0; k <= 2; ++k) {
    const auto s = band_limited_state(LatticeGeom(8), kU1, k, seed, 2);
    worst = std::max(worst, std::abs(blowup_normalization_check(s) - 1.0));
  }
  CheckReport r{"blowup", {{"N", 8}, {"seed", seed}, {"k", {0, 1, 2}}}, 1e-9, worst, worst <= 1e-9};
  return emit(r, out);
}

int diag_lp(std::uint64_t seed, const std::string& out) {
  const LatticeGeom geom(6);
  FlowState s{0.0, random_field(geom, 1, kU1, {seed, 3.0, 1.0}),
              random_field(geom, 0, kU1, {seed + 1, 3.0, 1.0}), 1};
  FlowConfig f;
  f.t_end = 20 * stability_cap(geom, 1);
  f.p_list = {4.0};
  const auto traj = run(s, f).trajectory;
  const auto series = lp_track(traj, 4.0);
  std::vector<double> lp, sup;
  for (const auto& p : series) {
    lp.push_back(p.lp);
    sup.push_back(p.sup);
  }
  const bool ok = monotone_after_max(lp) && monotone_after_max(sup);
  CheckReport r{"lp_track", {{"N", 6}, {"k", 1}, {"p", 4.0}, {"records", series.size()},
                             {"lp_first", lp.front()}, {"lp_last", lp.back()}},
                0.0, ok ? 0.0 : 1.0, ok};
  return emit(r, out);
}

int cmd_diag(const std::string& suite, std::uint64_t seed, const std::string& out) {
  if (suite == "kato") return diag_kato(seed, out);
  if (suite == "smoothing") return diag_smoothing(seed, out);
  if (suite == "blowup") return diag_blowup(seed, out);
  if (suite == "lp") return diag_lp(seed, out);
  if (suite == "all") {
    int worst = kOk;
    for (auto f : {diag_kato, diag_smoothing, diag_blowup, diag_lp}) worst = std::max(worst, f(seed, out));
    return worst;
  }
  throw UsageError("unknown diagnostic suite '" + suite + "' (kato, smoothing, blowup, lp, all)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Yang-Mills-Higgs k-flow laboratory on the flat 4-torus"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  int n_workers = 1;
  std::string out_dir;
  app.add_option("--workers", n_workers, "Worker threads for site-parallel loops")->check(CLI::PositiveNumber);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Integrate the flow from a config file");
  run_cmd->add_option("--config,config", run_args.config, "Config file")->required();
  run_cmd->add_option("--seed", run_args.seed, "Override the config seed");
  run_cmd->add_option("--out-dir", run_args.out_dir, "Output directory");
  run_cmd->add_flag("--dry-run", run_args.dry_run, "Validate the config and exit");
  run_cmd->add_option("--workers", n_workers, "Worker threads");

  std::string group = "SU2";
  int k = 1, n = 3, m = 2;
  long long seed = 42;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Adjoint gradient versus central differences");
  grad_cmd->add_option("group", group)->required();
  grad_cmd->add_option("k", k)->required();
  grad_cmd->add_option("N", n)->required();
  grad_cmd->add_option("seed", seed)->required();
  grad_cmd->add_option("--out-dir", out_dir);

  std::string oracle_config;
  long long oracle_seed = -1;
  auto* oracle_cmd = app.add_subcommand("oracle", "RK4 flow versus the closed-form U1 flow");
  oracle_cmd->add_option("--config,config", oracle_config)->required();
  oracle_cmd->add_option("--seed", oracle_seed);
  oracle_cmd->add_option("--out-dir", out_dir);

  int green_n = 8;
  auto* green_cmd = app.add_subcommand("green", "Green function and oscillation identity");
  green_cmd->add_option("N", green_n)->required();
  green_cmd->add_option("--seed", seed);
  green_cmd->add_option("--out-dir", out_dir);

  auto* scale_cmd = app.add_subcommand("scale", "Scaling-law commutation under the covering map");
  scale_cmd->add_option("k", k)->required();
  scale_cmd->add_option("m", m)->required();
  scale_cmd->add_option("seed", seed)->required();
  scale_cmd->add_option("--out-dir", out_dir);

  std::string suite;
  auto* diag_cmd = app.add_subcommand("diag", "Diagnostic suites: kato, smoothing, blowup, lp, all");
  diag_cmd->add_option("suite", suite)->required();
  diag_cmd->add_option("--seed", seed);
  diag_cmd->add_option("--out-dir", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  set_workers(n_workers);

  try {
    if (*run_cmd) return cmd_run(run_args);
    if (seed < 0) throw UsageError("seed must be nonnegative");
    const auto useed = static_cast<std::uint64_t>(seed);
    if (*grad_cmd) return cmd_gradcheck(group, k, n, useed, out_dir);
    if (*oracle_cmd) return cmd_oracle(oracle_config, oracle_seed, out_dir);
    if (*green_cmd) return cmd_green(green_n, useed, out_dir);
    if (*scale_cmd) return cmd_scale(k, m, useed, out_dir);
    if (*diag_cmd) return cmd_diag(suite, useed, out_dir);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const FlowAborted& e) {
    std::cerr << "error: flow aborted: " << e.what() << '\n';
    return kAborted;
  }
  return kUsage;
}
