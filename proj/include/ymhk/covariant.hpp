#pragma once

// Discrete covariant calculus on site-based fields.
//
//   (nabla_mu T)(x) = (T(x + mu) - T(x)) / h + [A_mu(x), T(x)]
//
// The new derivative index is prepended. The adjoint is the mechanical
// transpose with respect to l2_inner, so nabla* nabla is symmetric positive
// semidefinite to roundoff.

#include <cstddef>
#include <vector>

#include "ymhk/algebra.hpp"
#include "ymhk/lattice.hpp"

namespace ymhk {

/// Connection coefficients A_mu(x); a rank-1 field.
using GaugeField = TensorField;

namespace detail {
inline void check_gauge(const GaugeField& a, const TensorField& t, const char* what) {
  if (a.rank() != 1) throw UsageError(std::string(what) + ": gauge field must be rank 1");
  if (!(a.geom() == t.geom())) throw UsageError(std::string(what) + ": lattice mismatch");
  require_same(a.group(), t.group());
}
}  // namespace detail

inline TensorField covariant_diff(const GaugeField& a, const TensorField& t) {
  detail::check_gauge(a, t, "covariant_diff");
  const auto& g = t.geom();
  const GroupSpec grp = t.group();
  const int dim = grp.dim();
  const double inv_h = 1.0 / g.spacing();
  const std::size_t blk = t.per_site();
  TensorField out(g, t.rank() + 1, grp);
  parallel_for(g.sites(), [&](std::size_t s) {
    const double* here = t.data() + s * blk;
    double* dst = out.data() + s * out.per_site();
    for (int mu = 0; mu < kDim; ++mu) {
      const double* there = t.data() + g.shift(s, mu, +1) * blk;
      double* o = dst + static_cast<std::size_t>(mu) * blk;
      for (std::size_t i = 0; i < blk; ++i) o[i] = (there[i] - here[i]) * inv_h;
      if (!grp.abelian()) {
        const double* amu = a.slot(s, static_cast<std::size_t>(mu));
        for (std::size_t m = 0; m < t.slots(); ++m)
          kernel::add_bracket(grp, amu, here + m * dim, 1.0, o + m * dim);
      }
    }
  });
  return out;
}

inline TensorField covariant_diff_adjoint(const GaugeField& a, const TensorField& s_field) {
  if (s_field.rank() < 1) throw UsageError("covariant_diff_adjoint: input must have rank >= 1");
  detail::check_gauge(a, s_field, "covariant_diff_adjoint");
  const auto& g = s_field.geom();
  const GroupSpec grp = s_field.group();
  const int dim = grp.dim();
  const double inv_h = 1.0 / g.spacing();
  TensorField out(g, s_field.rank() - 1, grp);
  const std::size_t blk = out.per_site();
  const std::size_t in_blk = s_field.per_site();
  parallel_for(g.sites(), [&](std::size_t s) {
    double* o = out.data() + s * blk;
    const double* here = s_field.data() + s * in_blk;
    for (int mu = 0; mu < kDim; ++mu) {
      const auto off = static_cast<std::size_t>(mu) * blk;
      const double* back = s_field.data() + g.shift(s, mu, -1) * in_blk + off;
      const double* cur = here + off;
      for (std::size_t i = 0; i < blk; ++i) o[i] += (back[i] - cur[i]) * inv_h;
      if (!grp.abelian()) {
        const double* amu = a.slot(s, static_cast<std::size_t>(mu));
        for (std::size_t m = 0; m < out.slots(); ++m)
          kernel::add_bracket(grp, amu, cur + m * dim, -1.0, o + m * dim);
      }
    }
  });
  return out;
}

/// Accumulates into `grad_a` the derivative of <residual, nabla T> with
/// respect to the gauge field through the bracket term only.
inline void accumulate_bracket_slot(const TensorField& t, const TensorField& residual,
                                    GaugeField& grad_a) {
  const GroupSpec grp = t.group();
  if (grp.abelian()) return;
  const int dim = grp.dim();
  const std::size_t blk = t.per_site();
  parallel_for(t.geom().sites(), [&](std::size_t s) {
    const double* here = t.data() + s * blk;
    const double* res = residual.data() + s * residual.per_site();
    for (int mu = 0; mu < kDim; ++mu) {
      double* ga = grad_a.slot(s, static_cast<std::size_t>(mu));
      const double* r = res + static_cast<std::size_t>(mu) * blk;
      for (std::size_t m = 0; m < t.slots(); ++m)
        kernel::add_bracket(grp, here + m * dim, r + m * dim, 1.0, ga);
    }
  });
}

/// F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu] with forward differences.
inline TensorField curvature(const GaugeField& a) {
  if (a.rank() != 1) throw UsageError("curvature: gauge field must be rank 1");
  const auto& g = a.geom();
  const GroupSpec grp = a.group();
  const int dim = grp.dim();
  const double inv_h = 1.0 / g.spacing();
  TensorField f(g, 2, grp);
  f.set_antisym2(true);
  parallel_for(g.sites(), [&](std::size_t s) {
    for (int mu = 0; mu < kDim; ++mu) {
      for (int nu = mu + 1; nu < kDim; ++nu) {
        const double* a_mu = a.slot(s, static_cast<std::size_t>(mu));
        const double* a_nu = a.slot(s, static_cast<std::size_t>(nu));
        const double* a_nu_fwd = a.slot(g.shift(s, mu, +1), static_cast<std::size_t>(nu));
        const double* a_mu_fwd = a.slot(g.shift(s, nu, +1), static_cast<std::size_t>(mu));
        double* fmn = f.slot(s, static_cast<std::size_t>(mu * kDim + nu));
        double* fnm = f.slot(s, static_cast<std::size_t>(nu * kDim + mu));
        for (int c = 0; c < dim; ++c)
          fmn[c] = (a_nu_fwd[c] - a_nu[c]) * inv_h - (a_mu_fwd[c] - a_mu[c]) * inv_h;
        kernel::add_bracket(grp, a_mu, a_nu, 1.0, fmn);
        for (int c = 0; c < dim; ++c) fnm[c] = -fmn[c];
      }
    }
  });
  return f;
}

/// Accumulates the gradient of <residual, curvature(A)> with respect to A.
/// `residual` is a full rank-2 field (not assumed antisymmetric).
inline void accumulate_curvature_adjoint(const GaugeField& a, const TensorField& residual,
                                         GaugeField& grad_a) {
  const auto& g = a.geom();
  const GroupSpec grp = a.group();
  const int dim = grp.dim();
  const double inv_h = 1.0 / g.spacing();
  auto r = [&](std::size_t s, int i, int j) {
    return residual.slot(s, static_cast<std::size_t>(i * kDim + j));
  };
  parallel_for(g.sites(), [&](std::size_t s) {
    for (int al = 0; al < kDim; ++al) {
      double* ga = grad_a.slot(s, static_cast<std::size_t>(al));
      for (int be = 0; be < kDim; ++be) {
        const std::size_t back = g.shift(s, be, -1);
        const double* r_ba_back = r(back, be, al);
        const double* r_ba = r(s, be, al);
        const double* r_ab_back = r(back, al, be);
        const double* r_ab = r(s, al, be);
        for (int c = 0; c < dim; ++c) {
          ga[c] += (r_ba_back[c] - r_ba[c]) * inv_h - (r_ab_back[c] - r_ab[c]) * inv_h;
        }
        const double* a_be = a.slot(s, static_cast<std::size_t>(be));
        kernel::add_bracket(grp, a_be, r_ab, 1.0, ga);
        kernel::add_bracket(grp, a_be, r_ba, -1.0, ga);
      }
    }
  });
}

/// All stages T, nabla T, ..., nabla^(q) T.
inline std::vector<TensorField> diff_chain(const GaugeField& a, const TensorField& t, int q) {
  if (q < 0) throw UsageError("iterated_diff: q must be >= 0");
  std::vector<TensorField> chain;
  chain.reserve(static_cast<std::size_t>(q) + 1);
  chain.push_back(t);
  for (int i = 0; i < q; ++i) chain.push_back(covariant_diff(a, chain.back()));
  return chain;
}

inline TensorField iterated_diff(const GaugeField& a, const TensorField& t, int q) {
  if (q < 0) throw UsageError("iterated_diff: q must be >= 0");
  TensorField cur = t;
  for (int i = 0; i < q; ++i) cur = covariant_diff(a, cur);
  return cur;
}

/// Delta = -nabla* nabla.
inline TensorField bochner_laplacian(const GaugeField& a, const TensorField& t) {
  TensorField out = covariant_diff_adjoint(a, covariant_diff(a, t));
  out *= -1.0;
  return out;
}

/// Forward-difference gradient of a rank-0 field with the trivial connection.
inline TensorField forward_gradient(const TensorField& chi) {
  if (chi.rank() != 0) throw UsageError("forward_gradient: expects a rank-0 field");
  GaugeField zero(chi.geom(), 1, chi.group());
  return covariant_diff(zero, chi);
}

/// Applies Ad_g to every slot of a field (constant gauge transform).
inline TensorField adjoint_act(const GroupElem& g, const TensorField& t) {
  require_same(g.group, t.group());
  if (t.group().abelian()) return t;
  const auto m = adjoint_matrix(g);
  TensorField out(t.geom(), t.rank(), t.group());
  out.set_antisym2(t.antisym2());
  const std::size_t n = t.size() / 3;
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = t.data() + 3 * i;
    double* y = out.data() + 3 * i;
    for (int r = 0; r < 3; ++r)
      y[r] = m[static_cast<std::size_t>(3 * r)] * x[0] + m[static_cast<std::size_t>(3 * r + 1)] * x[1] +
             m[static_cast<std::size_t>(3 * r + 2)] * x[2];
  }
  return out;
}

}  // namespace ymhk
