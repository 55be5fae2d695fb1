#pragma once

// Periodic 4-torus lattice and Lie-algebra-valued tensor fields.
//
// Storage order: site index lexicographic with x1 fastest; within a site the
// direction multi-index is lexicographic (first index most significant), then
// the algebra components. A rank-r field therefore holds 4^r * dim doubles per
// site, and prepending a derivative index to a rank-r field yields four
// consecutive rank-r blocks per site.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ymhk/algebra.hpp"
#include "ymhk/errors.hpp"
#include "ymhk/parallel.hpp"

namespace ymhk {

inline constexpr int kDim = 4;

using Coord = std::array<int, kDim>;

class LatticeGeom {
 public:
  LatticeGeom() = default;
  LatticeGeom(int n, double side = 1.0) : n_(n), side_(side) {
    if (n < 3) throw UsageError("lattice needs N >= 3, got " + std::to_string(n));
    if (!(side > 0.0)) throw UsageError("torus side length must be positive");
    for (int mu = 0, s = 1; mu < kDim; ++mu, s *= n) stride_[static_cast<std::size_t>(mu)] = s;
  }

  int n() const { return n_; }
  double side() const { return side_; }
  double spacing() const { return side_ / n_; }
  double vol_elem() const {
    const double h = spacing();
    return h * h * h * h;
  }
  double volume() const { return side_ * side_ * side_ * side_; }
  std::size_t sites() const {
    const auto n = static_cast<std::size_t>(n_);
    return n * n * n * n;
  }

  Coord coord(std::size_t site) const {
    Coord c{};
    for (int mu = 0; mu < kDim; ++mu) {
      c[static_cast<std::size_t>(mu)] = static_cast<int>(site % static_cast<std::size_t>(n_));
      site /= static_cast<std::size_t>(n_);
    }
    return c;
  }

  /// Site of an arbitrary integer coordinate, wrapped periodically.
  std::size_t site(const Coord& c) const {
    std::size_t s = 0;
    for (int mu = kDim - 1; mu >= 0; --mu) {
      int v = c[static_cast<std::size_t>(mu)] % n_;
      if (v < 0) v += n_;
      s = s * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
    }
    return s;
  }

  /// Neighbor of `site` one step forward (+1) or backward (-1) along mu.
  std::size_t shift(std::size_t site, int mu, int dir) const {
    const auto stride = static_cast<std::size_t>(stride_[static_cast<std::size_t>(mu)]);
    const auto n = static_cast<std::size_t>(n_);
    const std::size_t c = (site / stride) % n;
    if (dir > 0) return c == n - 1 ? site - (n - 1) * stride : site + stride;
    return c == 0 ? site + (n - 1) * stride : site - stride;
  }

  friend bool operator==(const LatticeGeom& a, const LatticeGeom& b) {
    return a.n_ == b.n_ && a.side_ == b.side_;
  }

 private:
  int n_ = 3;
  double side_ = 1.0;
  std::array<int, kDim> stride_{1, 3, 9, 27};
};

inline std::size_t pow4(int r) { return std::size_t{1} << (2 * r); }

/// Lie-algebra-valued tensor of rank r on the lattice.
class TensorField {
 public:
  TensorField() = default;
  TensorField(const LatticeGeom& geom, int rank, GroupSpec group)
      : geom_(geom), rank_(rank), group_(group) {
    if (rank < 0) throw UsageError("negative tensor rank");
    values_.assign(geom.sites() * per_site(), 0.0);
  }

  const LatticeGeom& geom() const { return geom_; }
  int rank() const { return rank_; }
  GroupSpec group() const { return group_; }
  int dim() const { return group_.dim(); }
  /// Number of direction multi-indices per site.
  std::size_t slots() const { return pow4(rank_); }
  std::size_t per_site() const { return slots() * static_cast<std::size_t>(dim()); }
  std::size_t size() const { return values_.size(); }

  bool antisym2() const { return antisym2_; }
  void set_antisym2(bool v) { antisym2_ = v; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  std::span<double> at_site(std::size_t s) { return {values_.data() + s * per_site(), per_site()}; }
  std::span<const double> at_site(std::size_t s) const {
    return {values_.data() + s * per_site(), per_site()};
  }

  /// Pointer to the algebra coefficients at (site, multi-index slot).
  double* slot(std::size_t s, std::size_t m) {
    return values_.data() + s * per_site() + m * static_cast<std::size_t>(dim());
  }
  const double* slot(std::size_t s, std::size_t m) const {
    return values_.data() + s * per_site() + m * static_cast<std::size_t>(dim());
  }

  AlgElem get(std::size_t s, std::size_t m) const {
    AlgElem e = AlgElem::zero(group_);
    const double* p = slot(s, m);
    for (int a = 0; a < dim(); ++a) e[a] = p[a];
    return e;
  }
  void set(std::size_t s, std::size_t m, const AlgElem& e) {
    require_same(group_, e.group);
    double* p = slot(s, m);
    for (int a = 0; a < dim(); ++a) p[a] = e[a];
  }

  bool same_shape(const TensorField& o) const {
    return geom_ == o.geom_ && rank_ == o.rank_ && group_ == o.group_;
  }
  void require_same_shape(const TensorField& o, const char* what) const {
    if (!same_shape(o)) throw UsageError(std::string(what) + ": tensor shape mismatch");
  }

  bool finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  TensorField& operator+=(const TensorField& o) {
    require_same_shape(o, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  TensorField& operator-=(const TensorField& o) {
    require_same_shape(o, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  TensorField& operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
  }
  /// this += s * o
  TensorField& axpy(double s, const TensorField& o) {
    require_same_shape(o, "axpy");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * o.values_[i];
    return *this;
  }
  friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
  friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
  friend TensorField operator*(double s, TensorField a) { return a *= s; }

  friend bool operator==(const TensorField& a, const TensorField& b) {
    return a.same_shape(b) && a.values_ == b.values_;
  }

 private:
  LatticeGeom geom_{};
  int rank_ = 0;
  GroupSpec group_{};
  bool antisym2_ = false;
  std::vector<double> values_;
};

/// Constant field with value `v` in every slot.
inline TensorField constant_field(const LatticeGeom& geom, int rank, const AlgElem& v) {
  TensorField t(geom, rank, v.group);
  for (std::size_t s = 0; s < geom.sites(); ++s)
    for (std::size_t m = 0; m < t.slots(); ++m) t.set(s, m, v);
  return t;
}

/// Field translated by `offset` sites: out(x) = in(x + offset).
inline TensorField translate(const TensorField& t, const Coord& offset) {
  TensorField out(t.geom(), t.rank(), t.group());
  out.set_antisym2(t.antisym2());
  const auto& g = t.geom();
  for (std::size_t s = 0; s < g.sites(); ++s) {
    Coord c = g.coord(s);
    for (int mu = 0; mu < kDim; ++mu) c[static_cast<std::size_t>(mu)] += offset[static_cast<std::size_t>(mu)];
    const auto src = t.at_site(g.site(c));
    auto dst = out.at_site(s);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Norms and inner products. Quadrature weight h^4 per site.
// ---------------------------------------------------------------------------

inline double l2_inner(const TensorField& s, const TensorField& t) {
  s.require_same_shape(t, "l2_inner");
  const std::size_t ps = s.per_site();
  const double sum = parallel_sum(s.geom().sites(), [&](std::size_t site) {
    return kernel::dot(static_cast<int>(ps), s.data() + site * ps, t.data() + site * ps);
  });
  return sum * s.geom().vol_elem();
}

/// Euclidean norm over all indices and components at one site.
inline double pointwise_norm(const TensorField& t, std::size_t site) {
  const auto v = t.at_site(site);
  return std::sqrt(kernel::dot(static_cast<int>(v.size()), v.data(), v.data()));
}

inline std::vector<double> pointwise_norms(const TensorField& t) {
  std::vector<double> out(t.geom().sites());
  parallel_for(out.size(), [&](std::size_t s) { out[s] = pointwise_norm(t, s); });
  return out;
}

inline double sup_norm(const TensorField& t) {
  return parallel_max(t.geom().sites(), [&](std::size_t s) { return pointwise_norm(t, s); });
}

inline double lp_norm(const TensorField& t, double p) {
  if (!(p >= 1.0)) throw UsageError("lp_norm requires p >= 1");
  if (std::isinf(p)) return sup_norm(t);
  const double sum = parallel_sum(t.geom().sites(), [&](std::size_t s) {
    const double n = pointwise_norm(t, s);
    return p == 2.0 ? n * n : std::pow(n, p);
  });
  return std::pow(sum * t.geom().vol_elem(), 1.0 / p);
}

}  // namespace ymhk
