#include "fwlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fwlab {

namespace {
constexpr Eigen::Index kMaxCollocationCount = Eigen::Index(1) << 24;
}

Grid detail_make_grid_relaxed(int dim, int n_per_axis, Basis basis,
                              double axis_length);

double default_axis_length(Basis basis) {
  return basis == Basis::TorusExponential ? 2.0 * std::numbers::pi
                                          : std::numbers::pi;
}

Grid make_grid(int dim, int n_per_axis, Basis basis, double axis_length) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("make_grid: dim must be 1, 2 or 3, got " +
                                std::to_string(dim));
  if (n_per_axis < 4 || n_per_axis > 512)
    throw std::invalid_argument("make_grid: n_per_axis must be in [4,512], got " +
                                std::to_string(n_per_axis));
  if (n_per_axis % 2 != 0)
    throw std::invalid_argument("make_grid: n_per_axis must be even, got " +
                                std::to_string(n_per_axis));
  if (axis_length == 0.0) axis_length = default_axis_length(basis);
  if (!(axis_length > 0.0))
    throw std::invalid_argument("make_grid: axis_length must be positive");

  Eigen::Index count = 1;
  for (int a = 0; a < dim; ++a) count *= n_per_axis;
  if (count > kMaxCollocationCount)
    throw std::invalid_argument(
        "make_grid: collocation count " + std::to_string(count) +
        " exceeds the memory bound " + std::to_string(kMaxCollocationCount));

  return detail_make_grid_relaxed(dim, n_per_axis, basis, axis_length);
}

// Internal factory for refinement grids: same tables, no size cap beyond
// what the refinement itself implies.
Grid detail_make_grid_relaxed(int dim, int n_per_axis, Basis basis,
                              double axis_length) {
  Eigen::Index count = 1;
  for (int a = 0; a < dim; ++a) count *= n_per_axis;

  auto tables = std::make_shared<Grid::Tables>();
  tables->k.resize(n_per_axis);
  tables->kappa.resize(n_per_axis);
  tables->kappa2.resize(n_per_axis);
  const double scale = basis == Basis::TorusExponential
                           ? 2.0 * std::numbers::pi / axis_length
                           : std::numbers::pi / axis_length;
  for (int j = 0; j < n_per_axis; ++j) {
    const int k = basis == Basis::TorusExponential
                      ? (j <= n_per_axis / 2 ? j : j - n_per_axis)
                      : j + 1;
    tables->k[j] = k;
    tables->kappa[j] = scale * k;
    tables->kappa2[j] = tables->kappa[j] * tables->kappa[j];
    tables->max_kappa2 = std::max(tables->max_kappa2, tables->kappa2[j]);
  }

  Grid g;
  g.dim_ = dim;
  g.n_ = n_per_axis;
  g.basis_ = basis;
  g.length_ = axis_length;
  g.count_ = count;
  g.tables_ = std::move(tables);
  return g;
}

}  // namespace fwlab
