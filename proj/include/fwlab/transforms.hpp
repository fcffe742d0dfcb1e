#pragma once

#include <array>

#include "fwlab/field.hpp"
#include "fwlab/grid.hpp"

namespace fwlab {

/// Coefficients of the discrete expansion of f in its grid's basis.
///
/// Normalization (used everywhere in this project):
///   torus:  c_k = (1/N_tot) sum_x f(x) e^{-i kappa_k . x},
///           so the zero-mode coefficient is the mean of the field;
///   sine:   b_k with f(x_j) = sum_k b_k prod_a sin(kappa_k x_j).
SpectralField forward_transform(const Field& f);

/// Inverse of forward_transform. Rejects coefficient arrays that violate
/// the basis symmetry invariant (torus: conjugate symmetry; sine: real
/// coefficients).
Field inverse_transform(const SpectralField& s);

/// Samples of u(x + h) at the collocation points, computed by phase
/// multiplication in coefficient space. Exact for band-limited fields.
/// Torus basis only.
Field eval_shifted(const SpectralField& s, const std::array<double, 3>& h);

/// Exact band-limited interpolation of u onto the grid refined to
/// m_per_axis points per axis (m_per_axis >= n). m_per_axis == n
/// reproduces inverse_transform.
Field resample(const SpectralField& u, int m_per_axis);

/// Projection of a fine-grid field onto the band of `target`: forward
/// transform on the fine grid, then truncation to target's modes.
SpectralField forward_truncated(const Field& fine, const Grid& target);

/// Refinement grid used by resample / forward_truncated; relaxes the
/// make_grid size caps since it only ever holds intermediate samples.
Grid make_refined_grid(const Grid& base, int m_per_axis);

/// Pointwise application of fn in physical space on an m-refined grid,
/// then projection back onto u's band. With m_per_axis >= (p+1)/2 * n
/// the result is the exact Galerkin projection of fn(u) for a degree-p
/// polynomial fn (no aliasing).
template <typename F>
SpectralField apply_pointwise_dealiased(const SpectralField& u, int m_per_axis,
                                        F&& fn) {
  Field fine = resample(u, m_per_axis);
  for (Eigen::Index i = 0; i < fine.values.size(); ++i)
    fine.values[i] = fn(fine.values[i]);
  return forward_truncated(fine, u.grid);
}

/// Collocation quadrature of fn(u(x)) over the domain, with u
/// interpolated onto an m-refined grid first.
template <typename F>
double integrate_pointwise_refined(const SpectralField& u, int m_per_axis,
                                   F&& fn) {
  const Field fine = resample(u, m_per_axis);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < fine.values.size(); ++i)
    acc += fn(fine.values[i]);
  return acc * fine.grid.quadrature_weight();
}

}  // namespace fwlab
