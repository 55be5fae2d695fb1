#include <gtest/gtest.h>

#include <random>

#include "ymhk/algebra.hpp"

using namespace ymhk;

namespace {
AlgElem random_elem(GroupSpec g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  AlgElem x = AlgElem::zero(g);
  for (int a = 0; a < g.dim(); ++a) x[a] = d(rng);
  return x;
}
AlgElem e(int i) { return AlgElem::basis(kSU2, i - 1); }
}  // namespace

TEST(Algebra, Dimensions) {
  EXPECT_EQ(kU1.dim(), 1);
  EXPECT_EQ(kSU2.dim(), 3);
}

TEST(Algebra, StructureConstantsAreTotallyAntisymmetric) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        EXPECT_EQ(kSU2.f(a, b, c), -kSU2.f(b, a, c));
        EXPECT_EQ(kSU2.f(a, b, c), -kSU2.f(a, c, b));
        EXPECT_EQ(kSU2.f(a, b, c), -kSU2.f(c, b, a));
        EXPECT_EQ(kU1.f(0, 0, 0), 0.0);
      }
  EXPECT_EQ(kSU2.f(0, 1, 2), 1.0);
}

TEST(Algebra, StructureConstantsSatisfyJacobi) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int e = 0; e < 3; ++e) {
          double s = 0;
          for (int d = 0; d < 3; ++d)
            s += kSU2.f(a, b, d) * kSU2.f(d, c, e) + kSU2.f(b, c, d) * kSU2.f(d, a, e) +
                 kSU2.f(c, a, d) * kSU2.f(d, b, e);
          EXPECT_EQ(s, 0.0);
        }
}

TEST(Algebra, BracketExamples) {
  const AlgElem x{kU1, {2.5}}, y{kU1, {-1.0}};
  EXPECT_EQ(bracket(x, y)[0], 0.0);
  const auto z = bracket(e(1), e(2));
  EXPECT_EQ(z[0], 0.0);
  EXPECT_EQ(z[1], 0.0);
  EXPECT_EQ(z[2], 1.0);
  const AlgElem w{kSU2, {0.3, -0.7, 1.1}};
  const auto ww = bracket(w, w);
  for (int a = 0; a < 3; ++a) EXPECT_EQ(ww[a], 0.0);
}

TEST(Algebra, InnerExamples) {
  EXPECT_EQ(inner(e(1), e(1)), 1.0);
  EXPECT_EQ(inner(e(1), e(2)), 0.0);
  // epsilon_123
  EXPECT_EQ(inner(bracket(e(1), e(2)), e(3)), 1.0);
}

TEST(Algebra, CogradExamples) {
  const AlgElem x{kU1, {2.0}}, y{kU1, {3.0}};
  EXPECT_EQ(bracket_cograd(x, y)[0], 0.0);
  // Solve inner(Z, a) = inner([a, e1], e2) over the basis: only a = e3 gives
  // [e3, e1] = e2, so Z = e3.
  AlgElem solved = AlgElem::zero(kSU2);
  for (int i = 1; i <= 3; ++i) solved[i - 1] = inner(bracket(e(i), e(1)), e(2));
  const auto z = bracket_cograd(e(1), e(2));
  for (int a = 0; a < 3; ++a) {
    EXPECT_EQ(z[a], solved[a]);
    EXPECT_EQ(z[a], e(3)[a]);
  }
}

TEST(Algebra, MismatchedGroupsAreUsageErrors) {
  const AlgElem x{kU1, {1.0}};
  EXPECT_THROW(bracket(x, e(1)), UsageError);
  EXPECT_THROW(inner(x, e(1)), UsageError);
  EXPECT_THROW(bracket_cograd(e(2), x), UsageError);
  EXPECT_THROW(adjoint_act(GroupElem::identity(kSU2), x), UsageError);
}

TEST(Algebra, RandomizedAlgebraicIdentities) {
  std::mt19937_64 rng(2024);
  for (int n = 0; n < 1000; ++n) {
    const auto x = random_elem(kSU2, rng), y = random_elem(kSU2, rng), z = random_elem(kSU2, rng);
    // antisymmetry
    const auto xy = bracket(x, y), yx = bracket(y, x);
    for (int a = 0; a < 3; ++a) EXPECT_NEAR(xy[a], -yx[a], 1e-12);
    // Jacobi
    const auto jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
    for (int a = 0; a < 3; ++a) EXPECT_NEAR(jac[a], 0.0, 1e-12);
    // ad-invariance
    EXPECT_NEAR(inner(bracket(z, x), y) + inner(x, bracket(z, y)), 0.0, 1e-12);
    // cograd defining identity
    EXPECT_NEAR(inner(bracket_cograd(x, y), z), inner(bracket(z, x), y), 1e-12);
  }
}

TEST(Algebra, AbelianOperationsVanish) {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 100; ++n) {
    const auto x = random_elem(kU1, rng), y = random_elem(kU1, rng);
    EXPECT_EQ(bracket(x, y)[0], 0.0);
    EXPECT_EQ(bracket_cograd(x, y)[0], 0.0);
  }
}

TEST(Algebra, AdjointAction) {
  const AlgElem x{kU1, {1.5}};
  EXPECT_EQ(adjoint_act(GroupElem::u1(0.7), x)[0], 1.5);
  const AlgElem w{kSU2, {0.3, -0.7, 1.1}};
  const auto id = adjoint_act(GroupElem::identity(kSU2), w);
  for (int a = 0; a < 3; ++a) EXPECT_EQ(id[a], w[a]);

  std::mt19937_64 rng(99);
  std::normal_distribution<double> n01;
  for (int n = 0; n < 200; ++n) {
    const auto g = GroupElem::su2(n01(rng), n01(rng), n01(rng), n01(rng));
    const auto x1 = random_elem(kSU2, rng), y1 = random_elem(kSU2, rng);
    const auto gx = adjoint_act(g, x1), gy = adjoint_act(g, y1);
    EXPECT_NEAR(inner(gx, gx), inner(x1, x1), 1e-12);
    // Ad is an algebra automorphism
    const auto lhs = adjoint_act(g, bracket(x1, y1));
    const auto rhs = bracket(gx, gy);
    for (int a = 0; a < 3; ++a) EXPECT_NEAR(lhs[a], rhs[a], 1e-12);
  }
}

TEST(Algebra, CompositionIsAHomomorphism) {
  const auto g = GroupElem::su2(0.2, 0.4, -0.1, 0.9);
  const auto h = GroupElem::su2(-0.5, 0.3, 0.3, 0.1);
  const auto gh = compose(g, h);
  EXPECT_NEAR(gh.quaternion_norm(), 1.0, 1e-12);
  const AlgElem x{kSU2, {1.0, 2.0, -0.5}};
  const auto a = adjoint_act(gh, x);
  const auto b = adjoint_act(g, adjoint_act(h, x));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  EXPECT_NEAR(compose(GroupElem::u1(5.0), GroupElem::u1(2.0)).angle, 7.0 - 2 * M_PI, 1e-12);
}

TEST(Algebra, NonUnitQuaternionRejected) {
  GroupElem g = GroupElem::identity(kSU2);
  g.q = {1.0, 0.1, 0.0, 0.0};
  EXPECT_THROW(adjoint_act(g, AlgElem::basis(kSU2, 0)), UsageError);
  EXPECT_THROW(GroupElem::su2(0, 0, 0, 0), UsageError);
}
