#pragma once

// Compact Lie algebra kernels for u(1) and su(2).
//
// Elements are stored in an orthonormal basis whose structure constants are
// totally antisymmetric (f = epsilon for su(2), f = 0 for u(1)), so the
// ad-invariant pairing is the Euclidean dot product and [X, Y]_c =
// sum_{ab} f_{abc} X_a Y_b is the cross product on su(2).

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "ymhk/errors.hpp"

namespace ymhk {

enum class Group : std::uint8_t { U1 = 0, SU2 = 1 };

inline const char* to_string(Group g) { return g == Group::U1 ? "U1" : "SU2"; }

inline Group parse_group(const std::string& s) {
  if (s == "U1" || s == "u1") return Group::U1;
  if (s == "SU2" || s == "su2") return Group::SU2;
  throw UsageError("unknown group '" + s + "' (expected U1 or SU2)");
}

struct GroupSpec {
  Group tag = Group::U1;

  constexpr int dim() const { return tag == Group::U1 ? 1 : 3; }
  constexpr bool abelian() const { return tag == Group::U1; }

  /// Structure constant f_{abc}, indices in [0, dim).
  constexpr double f(int a, int b, int c) const {
    if (abelian()) return 0.0;
    if (a == b || b == c || a == c) return 0.0;
    // even permutations of (0,1,2) -> +1
    return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
  }

  friend constexpr bool operator==(GroupSpec, GroupSpec) = default;
};

inline constexpr GroupSpec kU1{Group::U1};
inline constexpr GroupSpec kSU2{Group::SU2};

inline void require_same(GroupSpec a, GroupSpec b) {
  if (a != b) {
    throw UsageError(std::string("group mismatch: ") + to_string(a.tag) + " vs " +
                     to_string(b.tag));
  }
}

// ---------------------------------------------------------------------------
// Raw kernels on coefficient pointers (length group.dim()). These are what the
// field operators call in their inner loops.
// ---------------------------------------------------------------------------
namespace kernel {

/// out += s * [x, y]
inline void add_bracket(GroupSpec g, const double* x, const double* y, double s, double* out) {
  if (g.abelian()) return;
  out[0] += s * (x[1] * y[2] - x[2] * y[1]);
  out[1] += s * (x[2] * y[0] - x[0] * y[2]);
  out[2] += s * (x[0] * y[1] - x[1] * y[0]);
}

inline double dot(int dim, const double* x, const double* y) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += x[a] * y[a];
  return s;
}

}  // namespace kernel

/// Algebra element: coefficient tuple in the orthonormal basis.
struct AlgElem {
  GroupSpec group{};
  std::array<double, 3> c{};

  static AlgElem zero(GroupSpec g) { return AlgElem{g, {}}; }
  /// Basis vector e_{a+1}.
  static AlgElem basis(GroupSpec g, int a) {
    if (a < 0 || a >= g.dim()) throw UsageError("basis index out of range");
    AlgElem e{g, {}};
    e.c[static_cast<std::size_t>(a)] = 1.0;
    return e;
  }

  int dim() const { return group.dim(); }
  double operator[](int a) const { return c[static_cast<std::size_t>(a)]; }
  double& operator[](int a) { return c[static_cast<std::size_t>(a)]; }

  bool finite() const {
    for (int a = 0; a < dim(); ++a)
      if (!std::isfinite((*this)[a])) return false;
    return true;
  }

  AlgElem& operator+=(const AlgElem& o) {
    require_same(group, o.group);
    for (int a = 0; a < dim(); ++a) (*this)[a] += o[a];
    return *this;
  }
  AlgElem& operator-=(const AlgElem& o) {
    require_same(group, o.group);
    for (int a = 0; a < dim(); ++a) (*this)[a] -= o[a];
    return *this;
  }
  AlgElem& operator*=(double s) {
    for (int a = 0; a < dim(); ++a) (*this)[a] *= s;
    return *this;
  }
  friend AlgElem operator+(AlgElem x, const AlgElem& y) { return x += y; }
  friend AlgElem operator-(AlgElem x, const AlgElem& y) { return x -= y; }
  friend AlgElem operator*(double s, AlgElem x) { return x *= s; }
};

inline AlgElem bracket(const AlgElem& x, const AlgElem& y) {
  require_same(x.group, y.group);
  AlgElem out = AlgElem::zero(x.group);
  kernel::add_bracket(x.group, x.c.data(), y.c.data(), 1.0, out.c.data());
  return out;
}

/// Killing pairing, rescaled so the basis is orthonormal.
inline double inner(const AlgElem& x, const AlgElem& y) {
  require_same(x.group, y.group);
  return kernel::dot(x.dim(), x.c.data(), y.c.data());
}

/// The Z with inner(Z, a) == inner(bracket(a, x), y) for every a.
///
/// With totally antisymmetric structure constants this is bracket(x, y).
inline AlgElem bracket_cograd(const AlgElem& x, const AlgElem& y) { return bracket(x, y); }

// ---------------------------------------------------------------------------
// Group elements, used for global gauge transforms.
// ---------------------------------------------------------------------------

/// U(1): an angle. SU(2): a unit quaternion (w, x, y, z).
struct GroupElem {
  GroupSpec group{};
  double angle = 0.0;
  std::array<double, 4> q{1.0, 0.0, 0.0, 0.0};

  static GroupElem identity(GroupSpec g) { return GroupElem{g}; }

  static GroupElem u1(double theta) {
    GroupElem e{kU1};
    e.angle = std::fmod(theta, 2.0 * M_PI);
    if (e.angle < 0) e.angle += 2.0 * M_PI;
    return e;
  }

  /// Normalizes the given quaternion coordinates.
  static GroupElem su2(double w, double x, double y, double z) {
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (!(n > 0.0)) throw UsageError("zero quaternion");
    return GroupElem{kSU2, 0.0, {w / n, x / n, y / n, z / n}};
  }

  double quaternion_norm() const {
    return std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  }
};

/// Group product, renormalized for SU(2).
inline GroupElem compose(const GroupElem& a, const GroupElem& b) {
  require_same(a.group, b.group);
  if (a.group.abelian()) return GroupElem::u1(a.angle + b.angle);
  const auto& p = a.q;
  const auto& r = b.q;
  return GroupElem::su2(p[0] * r[0] - p[1] * r[1] - p[2] * r[2] - p[3] * r[3],
                        p[0] * r[1] + p[1] * r[0] + p[2] * r[3] - p[3] * r[2],
                        p[0] * r[2] - p[1] * r[3] + p[2] * r[0] + p[3] * r[1],
                        p[0] * r[3] + p[1] * r[2] - p[2] * r[1] + p[3] * r[0]);
}

/// Rotation matrix of Ad_g on su(2) in the orthonormal basis.
inline std::array<double, 9> adjoint_matrix(const GroupElem& g) {
  if (std::abs(g.quaternion_norm() - 1.0) > 1e-12) {
    throw UsageError("SU2 element is not unit norm");
  }
  const double w = g.q[0], x = g.q[1], y = g.q[2], z = g.q[3];
  return {1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
          2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
          2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y)};
}

inline AlgElem adjoint_act(const GroupElem& g, const AlgElem& x) {
  require_same(g.group, x.group);
  if (x.group.abelian()) return x;
  const auto m = adjoint_matrix(g);
  AlgElem out = AlgElem::zero(x.group);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += m[static_cast<std::size_t>(3 * i + j)] * x[j];
  return out;
}

}  // namespace ymhk
