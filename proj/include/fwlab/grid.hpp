#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <memory>

namespace fwlab {

enum class Basis : std::uint8_t {
  TorusExponential = 0,  // e^{i k x} on [0,L)^d, k in {-n/2+1,...,n/2}
  DirichletSine = 1,     // sin(k pi x / L) on (0,L)^d, k in {1,...,n}
};

/// Spatial discretization descriptor. Cheap to copy; the per-axis
/// wavenumber tables are shared between copies.
///
/// Conventions used by every module built on top of this grid:
///  - torus collocation points  x_j = j L/n,            j = 0..n-1
///  - sine  collocation points  x_j = (j+1) L/(n+1),    j = 0..n-1 (interior)
///  - physical wavenumbers      kappa = 2 pi k / L      (torus)
///                              kappa = pi k / L        (sine)
///  - collocation quadrature weight: (L/n)^d torus, (L/(n+1))^d sine.
///    The sine weight uses the n+1 subintervals of the box so that the
///    discrete Parseval identity is exact (see transforms.hpp).
class Grid {
 public:
  Grid() = default;

  int dim() const { return dim_; }
  int n_per_axis() const { return n_; }
  Basis basis() const { return basis_; }
  double axis_length() const { return length_; }

  Eigen::Index count() const { return count_; }

  /// Integer wavenumber of axis-index j (torus: j or j-n; sine: j+1).
  int axis_wavenumber(int j) const { return tables_->k[j]; }
  /// Physical wavenumber kappa of axis-index j.
  double axis_kappa(int j) const { return tables_->kappa[j]; }
  /// kappa^2 of axis-index j.
  double axis_kappa2(int j) const { return tables_->kappa2[j]; }

  /// Collocation coordinate along one axis.
  double axis_coordinate(int j) const {
    return basis_ == Basis::TorusExponential ? j * length_ / n_
                                             : (j + 1) * length_ / (n_ + 1);
  }

  /// Laplacian eigenvalue mu = |kappa|^2 of the mode with flat index i
  /// (row-major over axes).
  double mu_flat(Eigen::Index i) const {
    const auto& k2 = tables_->kappa2;
    double mu = 0.0;
    for (int a = dim_ - 1; a >= 0; --a) {
      mu += k2[static_cast<int>(i % n_)];
      i /= n_;
    }
    return mu;
  }

  /// Decompose a flat index into per-axis indices.
  std::array<int, 3> unflatten(Eigen::Index i) const {
    std::array<int, 3> j{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
      j[a] = static_cast<int>(i % n_);
      i /= n_;
    }
    return j;
  }

  /// Quadrature weight of one collocation point.
  double quadrature_weight() const {
    double w = 1.0;
    const double per_axis = basis_ == Basis::TorusExponential
                                ? length_ / n_
                                : length_ / (n_ + 1);
    for (int a = 0; a < dim_; ++a) w *= per_axis;
    return w;
  }

  /// Weight of one coefficient in Parseval sums: ||f||_{L2}^2 equals
  /// mode_weight * sum_k |c_k|^2.
  double mode_weight() const {
    const double per_axis =
        basis_ == Basis::TorusExponential ? length_ : length_ / 2;
    double w = 1.0;
    for (int a = 0; a < dim_; ++a) w *= per_axis;
    return w;
  }

  /// Domain volume L^d.
  double volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= length_;
    return v;
  }

  double max_mu() const { return tables_->max_kappa2 * dim_; }

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && basis_ == o.basis_ &&
           length_ == o.length_;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

  friend Grid make_grid(int dim, int n_per_axis, Basis basis,
                        double axis_length);
  friend Grid detail_make_grid_relaxed(int dim, int n_per_axis, Basis basis,
                                       double axis_length);

 private:
  struct Tables {
    std::vector<int> k;
    std::vector<double> kappa;
    std::vector<double> kappa2;
    double max_kappa2 = 0.0;
  };

  int dim_ = 0;
  int n_ = 0;
  Basis basis_ = Basis::TorusExponential;
  double length_ = 0.0;
  Eigen::Index count_ = 0;
  std::shared_ptr<const Tables> tables_;
};

/// Build a grid, precomputing the per-axis wavenumber tables.
/// Throws std::invalid_argument on odd n, dim outside {1,2,3}, n outside
/// [4,512], or a total collocation count beyond the memory bound (2^24).
Grid make_grid(int dim, int n_per_axis, Basis basis,
               double axis_length = 0.0);

/// Default axis length of a basis: 2 pi for the torus, pi for the box.
double default_axis_length(Basis basis);

}  // namespace fwlab
