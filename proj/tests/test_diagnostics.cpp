#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ymhk/diagnostics.hpp"
#include "ymhk/random_field.hpp"

using namespace ymhk;

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;

// u = f(x1) (cos phi, sin phi, 0) with A_1 = -phi' e3: the connection cancels
// the rotation, so |d|u|| = |nabla u| holds with equality in the continuum.
void kato_equality_data(const LatticeGeom& g, double eps, GaugeField& a, TensorField& u) {
  a = GaugeField(g, 1, kSU2);
  u = TensorField(g, 0, kSU2);
  for (std::size_t s = 0; s < g.sites(); ++s) {
    const double x = g.coord(s)[0] * g.spacing();
    const double f = 2.0 + 0.5 * std::sin(kTwoPi * x);
    const double phi = eps * std::sin(kTwoPi * x);
    const double dphi = eps * kTwoPi * std::cos(kTwoPi * x);
    u.set(s, 0, AlgElem{kSU2, {f * std::cos(phi), f * std::sin(phi), 0.0}});
    a.set(s, 0, AlgElem{kSU2, {0.0, 0.0, -dphi}});
  }
}

std::vector<SmoothingSample> white_noise_samples(std::uint64_t seed, int q, SmoothedField which) {
  const LatticeGeom g(16);
  FlowState s = FlowState::zero(g, kU1, 1);
  s.u = random_field(g, 0, kU1, {seed, 0.0, 1.0});
  s.A = random_field(g, 1, kU1, {seed + 1, 0.0, 1.0});
  return smoothing_samples(abelian_snapshots(s, smoothing_window(g, 1)), q, which);
}
}  // namespace

TEST(Kato, AbelianPositiveFieldIsAnEqualityCase) {
  LatticeGeom g(6);
  auto u = random_field(g, 0, kU1, {3, 1.0, 1.0});
  for (double& v : u.values()) v = 2.0 + v;  // constant sign
  const auto r = kato_check(random_field(g, 1, kU1, {4, 0.0, 5.0}), u);
  EXPECT_LE(std::abs(r.max_violation), 1e-12);
  EXPECT_EQ(r.slack, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(Kato, ZeroField) {
  LatticeGeom g(4);
  const auto r = kato_check(random_field(g, 1, kSU2, {1, 0.0, 1.0}), TensorField(g, 0, kSU2));
  EXPECT_EQ(r.max_violation, 0.0);
  EXPECT_EQ(r.slack, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(Kato, FlatConnectionHasNoViolation) {
  LatticeGeom g(8);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto r = kato_check(GaugeField(g, 1, kSU2), random_field(g, 0, kSU2, {seed, 0.0, 1.0}));
    EXPECT_LE(r.max_violation, 1e-12);
    EXPECT_TRUE(r.pass);
  }
}

TEST(Kato, RandomConnectionStaysWithinSlack) {
  LatticeGeom g(8);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto r = kato_check(random_field(g, 1, kSU2, {seed, 2.0, 3.0}),
                              random_field(g, 0, kSU2, {seed + 10, 2.0, 1.0}));
    EXPECT_TRUE(r.pass) << "excess " << r.excess;
    EXPECT_LE(r.excess, 0.0);
  }
}

TEST(Kato, ViolationVanishesAtFirstOrder) {
  // Leading term of the violation is h * max_x f phi'^2 / 2, attained at x = 0.
  const double eps = 0.1;
  const double c = 2.0 * std::pow(eps * kTwoPi, 2) / 2.0;
  double prev_dev = std::numeric_limits<double>::infinity();
  for (int n : {8, 16, 32}) {
    LatticeGeom g(n);
    GaugeField a;
    TensorField u;
    kato_equality_data(g, eps, a, u);
    const auto r = kato_check(a, u);
    EXPECT_TRUE(r.pass);
    EXPECT_GT(r.max_violation, 0.0);
    const double dev = std::abs(r.max_violation / (g.spacing() * c) - 1.0);
    EXPECT_LT(dev, 0.5 * prev_dev) << "n=" << n;
    prev_dev = dev;
  }
  EXPECT_LE(prev_dev, 0.01);
}

TEST(Kato, RejectsNonScalarHiggs) {
  LatticeGeom g(4);
  EXPECT_THROW(kato_check(GaugeField(g, 1, kSU2), TensorField(g, 1, kSU2)), UsageError);
}

TEST(Smoothing, WhiteNoiseExponent) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (int q : {1, 2}) {
      for (auto which : {SmoothedField::Higgs, SmoothedField::Curvature}) {
        const auto samples = white_noise_samples(seed, q, which);
        const auto fit = smoothing_rate(samples, q, 1);
        EXPECT_FALSE(fit.inconclusive) << fit.reason;
        EXPECT_DOUBLE_EQ(fit.target, -q / 2.0);
        EXPECT_NEAR(fit.slope, fit.target, 0.25) << "seed " << seed << " q " << q;
      }
    }
    const auto fit0 = smoothing_rate(white_noise_samples(seed, 0, SmoothedField::Higgs), 0, 1);
    EXPECT_GE(fit0.slope, -0.1);
  }
}

TEST(Smoothing, SingleModeIsInconclusive) {
  LatticeGeom g(8);
  FlowState s = FlowState::zero(g, kU1, 1);
  for (std::size_t x = 0; x < g.sites(); ++x) s.u.slot(x, 0)[0] = std::sin(kTwoPi * g.coord(x)[1] / g.n());
  const auto samples = smoothing_samples(abelian_snapshots(s, smoothing_window(g, 1)), 1);
  const auto fit = smoothing_rate(samples, 1, 1);
  EXPECT_TRUE(fit.inconclusive);
  EXPECT_EQ(fit.reason, "single exponential decay");
}

TEST(Smoothing, InsufficientSamplingIsInconclusive) {
  std::vector<SmoothingSample> few;
  for (int i = 1; i <= 7; ++i) few.push_back({std::pow(10.0, i / 3.0), 1.0 / i, 1.0});
  EXPECT_TRUE(smoothing_rate(few, 1, 1).inconclusive);

  std::vector<SmoothingSample> narrow;
  for (int i = 0; i < 10; ++i) narrow.push_back({1.0 + 0.5 * i, 1.0 / (1.0 + i), 1.0});
  const auto fit = smoothing_rate(narrow, 1, 1);
  EXPECT_TRUE(fit.inconclusive);
  EXPECT_EQ(fit.reason, "time span below one decade");
}

TEST(Smoothing, ExactPowerLawIsRecovered) {
  std::vector<SmoothingSample> v;
  for (int i = 0; i < 10; ++i) {
    const double t = std::pow(10.0, i / 4.0);
    v.push_back({t, 3.0 * std::pow(t, -0.7), 2.0 * std::pow(t, -0.2)});
  }
  const auto fit = smoothing_rate(v, 1, 0);
  EXPECT_FALSE(fit.inconclusive);
  EXPECT_NEAR(fit.slope, -0.5, 1e-12);
  EXPECT_NEAR(fit.raw_slope, -0.7, 1e-12);
  EXPECT_LE(fit.residual, 1e-12);
}

TEST(Scaling, ZeroDataCommutesExactly) {
  const auto z = FlowState::zero(LatticeGeom(8), kU1, 1);
  EXPECT_EQ(scaling_commutation_error(z, 2, 1e-3, Symbol::Continuum), 0.0);
  EXPECT_EQ(scaling_commutation_error(z, 2, 1e-3, Symbol::Lattice), 0.0);
}

TEST(Scaling, SpectralPathIsExactAndFiniteDifferencesConverge) {
  for (int k = 0; k <= 2; ++k) {
    const auto r = scaling_law_check(k, 2, 7);
    EXPECT_LE(r.spectral_error, 1e-10) << "k=" << k;
    EXPECT_GT(r.fd_error_coarse, 0.0);
    EXPECT_GE(r.fd_ratio, 1.8) << "k=" << k;
  }
  EXPECT_THROW(scaling_law_check(1, 1, 7), UsageError);
}

TEST(Blowup, NormalizesBandLimitedStates) {
  for (int k = 0; k <= 2; ++k) {
    const auto s = band_limited_state(LatticeGeom(8), kU1, k, 5, 2);
    EXPECT_NEAR(blowup_normalization_check(s), 1.0, 1e-9) << "k=" << k;
    EXPECT_NEAR(blowup_normalization_check(s, DerivativeMode::Lattice), 1.0, 1e-9);
  }
  const auto su2 = band_limited_state(LatticeGeom(6), kSU2, 1, 5, 1);
  EXPECT_NEAR(blowup_normalization_check(su2), 1.0, 1e-9);
}

TEST(Blowup, ScaleCovariant) {
  auto s = band_limited_state(LatticeGeom(8), kU1, 1, 9, 2);
  const double base = blowup_normalization_check(s);
  s.A *= 2.0;
  s.u *= 2.0;
  EXPECT_NEAR(blowup_normalization_check(s), base, 1e-12);
}

TEST(Blowup, SpectralQuantityMatchesClosedForm) {
  // u = sin(2 pi x1): sup |du| = 2 pi.
  LatticeGeom g(8);
  FlowState s = FlowState::zero(g, kU1, 0);
  for (std::size_t x = 0; x < g.sites(); ++x) s.u.slot(x, 0)[0] = std::sin(kTwoPi * g.coord(x)[0] / g.n());
  EXPECT_NEAR(blowup_quantity(s, DerivativeMode::Spectral), kTwoPi, 1e-12);
}

TEST(Blowup, ZeroStateIsRejected) {
  EXPECT_THROW(blowup_normalization_check(FlowState::zero(LatticeGeom(4), kU1, 1)), UsageError);
}

TEST(LpTrack, ZeroTrajectory) {
  FlowConfig cfg;
  cfg.t_end = 1e-4;
  cfg.p_list = {3.0, 4.0};
  const auto traj = run(FlowState::zero(LatticeGeom(4), kU1, 0), cfg).trajectory;
  for (const auto& p : lp_track(traj, 3.0)) {
    EXPECT_EQ(p.lp, 0.0);
    EXPECT_EQ(p.sup, 0.0);
  }
  EXPECT_THROW(lp_track(traj, 0.5), UsageError);
  EXPECT_THROW(lp_track(traj, 8.0), UsageError);
}

TEST(LpTrack, ConstantFieldsOnUnitTorus) {
  LatticeGeom g(4);
  FlowState s = FlowState::zero(g, kSU2, 1);
  s.A = constant_field(g, 1, AlgElem{kSU2, {0.3, -0.2, 0.5}});
  for (std::size_t x = 0; x < g.sites(); ++x) s.A.set(x, 1, AlgElem{kSU2, {0.1, 0.7, 0.0}});
  s.u = constant_field(g, 0, AlgElem{kSU2, {1.0, 0.0, 2.0}});
  Trajectory traj;
  traj.p_list = {3.0, 6.0};
  traj.records.push_back(monitor(s, traj.p_list));
  for (double p : traj.p_list) {
    const auto pt = lp_track(traj, p).front();
    EXPECT_GT(pt.sup, 0.0);
    EXPECT_NEAR(pt.lp, pt.sup, 1e-12 * pt.sup);
  }
}

TEST(LpTrack, DecayingAbelianRunIsMonotoneAfterMax) {
  LatticeGeom g(6);
  FlowState s{0.0, random_field(g, 1, kU1, {2, 3.0, 1.0}), random_field(g, 0, kU1, {3, 3.0, 1.0}), 1};
  FlowConfig cfg;
  cfg.t_end = 20 * stability_cap(g, 1);
  cfg.p_list = {4.0};
  const auto series = lp_track(run(s, cfg).trajectory, 4.0);
  std::vector<double> lp, sup;
  for (const auto& p : series) {
    lp.push_back(p.lp);
    sup.push_back(p.sup);
  }
  EXPECT_TRUE(monotone_after_max(lp));
  EXPECT_TRUE(monotone_after_max(sup));
  EXPECT_LT(lp.back(), lp.front());
}

TEST(LpTrack, MonotoneAfterMaxHelper) {
  const std::vector<double> rise_then_fall{1, 3, 2, 2, 1};
  const std::vector<double> bump{3, 1, 2};
  EXPECT_TRUE(monotone_after_max(rise_then_fall));
  EXPECT_FALSE(monotone_after_max(bump));
  EXPECT_TRUE(monotone_after_max(std::vector<double>{}));
}
