#pragma once

#include <array>
#include <vector>

#include "fwlab/field.hpp"
#include "fwlab/grid.hpp"

namespace fwlab {

/// Exponent s of (-Delta)^s, restricted to [0,1].
struct FractionalExponent {
  double s;
  explicit FractionalExponent(double value);
};

/// Discretization of the singular integral over h in R^3: radial shells
/// geometric in [h_min, h_max], a fixed direction set on the sphere.
struct IntegralQuadratureSpec {
  double h_min = 1e-3;
  double h_max = 32.0;
  int shells = 64;
  int directions = 26;

  void validate() const;
};

/// Multiply coefficient k by |kappa_k|^{2s}. The zero mode maps to zero
/// for every s, so s=0 acts as the projection off the mean.
SpectralField apply_fractional_laplacian(const SpectralField& u,
                                         FractionalExponent s);

/// (v, (-Delta)^s u) evaluated in coefficient space.
double bilinear_form_spectral(const SpectralField& v, const SpectralField& u,
                              FractionalExponent s);

/// Same pairing through the singular-integral representation
///   c * int_{R^3} int_{T^3} (v(x+h)-v(x))(u(x+h)-u(x)) / |h|^{3+2s} dx dh,
/// with the inner x-integral exact per h (spectral shift + collocation
/// quadrature) and the h-integral over the quadrature spec. Torus, dim 3.
double bilinear_form_integral(const SpectralField& v, const SpectralField& u,
                              FractionalExponent s,
                              const IntegralQuadratureSpec& q, double c);

/// Constant of the dual representation, fixed by matching the two forms
/// on the single-mode field cos(x1). The value depends only on s and the
/// quadrature spec; the optional grid just hosts the calibration mode.
double calibrate_constant(FractionalExponent s,
                          const IntegralQuadratureSpec& q);
double calibrate_constant(FractionalExponent s, const IntegralQuadratureSpec& q,
                          const Grid& grid);

/// Direction sets used by the h-quadrature. counts 6, 14 and 26 give the
/// octahedrally symmetric sets (axes / +corners / +edge midpoints); other
/// counts fall back to a Fibonacci spiral.
std::vector<std::array<double, 3>> sphere_directions(int count);

/// Radial node r and weight for int_0^inf phi(r) r^2 dr, trapezoid in
/// log r over [h_min, h_max].
struct RadialNode {
  double r;
  double weight;
};
std::vector<RadialNode> radial_log_nodes(double h_min, double h_max,
                                         int shells);

}  // namespace fwlab
