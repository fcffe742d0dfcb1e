#pragma once

#include <Eigen/Core>

#include <complex>

#include "fwlab/grid.hpp"

namespace fwlab {

/// Real-valued function samples at the collocation points, row-major
/// axis order.
struct Field {
  Grid grid;
  Eigen::ArrayXd values;

  Field() = default;
  Field(Grid g, Eigen::ArrayXd v) : grid(std::move(g)), values(std::move(v)) {}
  explicit Field(const Grid& g) : grid(g), values(Eigen::ArrayXd::Zero(g.count())) {}
};

/// Coefficient-space mirror of a Field. The torus basis stores the full
/// complex coefficient array in FFT index order (no half-spectrum
/// compression); real fields satisfy coeffs(-k) = conj(coeffs(k)).
/// Sine-basis coefficients are real; the imaginary parts stay zero.
struct SpectralField {
  Grid grid;
  Eigen::ArrayXcd coeffs;

  SpectralField() = default;
  SpectralField(Grid g, Eigen::ArrayXcd c)
      : grid(std::move(g)), coeffs(std::move(c)) {}
  explicit SpectralField(const Grid& g)
      : grid(g), coeffs(Eigen::ArrayXcd::Zero(g.count())) {}
};

/// Sample an analytic function on the grid.
template <typename F>
Field sample_field(const Grid& grid, F&& fn) {
  Field f(grid);
  for (Eigen::Index i = 0; i < grid.count(); ++i) {
    const auto j = grid.unflatten(i);
    double x[3] = {0, 0, 0};
    for (int a = 0; a < grid.dim(); ++a) x[a] = grid.axis_coordinate(j[a]);
    f.values[i] = fn(x[0], x[1], x[2]);
  }
  return f;
}

/// L2 inner product of two coefficient arrays on the same grid,
/// exact via the Parseval identity.
double inner_product(const SpectralField& v, const SpectralField& u);

/// L2 norm via Parseval.
double l2_norm(const SpectralField& u);

/// Mean of the field (torus: the zero-mode coefficient).
double mean(const Field& f);

}  // namespace fwlab
