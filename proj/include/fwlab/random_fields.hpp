#pragma once

#include <cstdint>

#include "fwlab/field.hpp"

namespace fwlab {

/// Forcing description as it appears in configs: zero, or a seeded
/// random field supported on |k| <= band with a prescribed L2 norm.
/// `mean` adds a constant component (torus only; rejected when theta>0).
struct ForcingSpec {
  enum class Kind { Zero, Seeded };
  Kind kind = Kind::Zero;
  std::uint64_t seed = 0;
  int band = 4;
  double l2_norm = 1.0;
  double mean = 0.0;
};

/// Smooth random field with coefficients on the Euclidean ball
/// |k|_2 <= band, mean-zero, drawn in a canonical wavenumber order so
/// the same seed realizes the same continuum field on every resolution
/// that can hold the band. Coefficient magnitudes decay like 1/(1+|k|^2).
SpectralField random_band_limited_field(const Grid& grid, std::uint64_t seed,
                                        int band);

/// Same field scaled to a target L2 norm.
SpectralField random_band_limited_field(const Grid& grid, std::uint64_t seed,
                                        int band, double l2_norm);

SpectralField realize_forcing(const Grid& grid, const ForcingSpec& spec);

/// Fixed stream mixer for deriving companion seeds (e.g. the velocity
/// component of a state ensemble).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace fwlab
