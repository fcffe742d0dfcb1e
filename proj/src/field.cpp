#include "fwlab/field.hpp"

#include <stdexcept>

namespace fwlab {

double inner_product(const SpectralField& v, const SpectralField& u) {
  if (v.grid != u.grid)
    throw std::invalid_argument("inner_product: grid mismatch");
  const double s = (v.coeffs.conjugate() * u.coeffs).real().sum();
  return v.grid.mode_weight() * s;
}

double l2_norm(const SpectralField& u) {
  return std::sqrt(u.grid.mode_weight() * u.coeffs.abs2().sum());
}

double mean(const Field& f) { return f.values.mean(); }

}  // namespace fwlab
