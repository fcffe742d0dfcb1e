#include "fwlab/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fwlab {

namespace {

// Box-Muller over the standard mt19937_64 stream: platform-independent,
// unlike std::normal_distribution.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  double uniform() {
    // (0,1], so the log above never sees zero.
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }
  std::mt19937_64 gen_;
};

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

SpectralField random_band_limited_field(const Grid& grid, std::uint64_t seed,
                                        int band) {
  const int n = grid.n_per_axis();
  const bool torus = grid.basis() == Basis::TorusExponential;
  if (band < 1) throw std::invalid_argument("random_band_limited_field: band >= 1");
  if (torus ? band > n / 2 - 1 : band > n)
    throw std::invalid_argument(
        "random_band_limited_field: band does not fit the grid");

  SpectralField out(grid);
  NormalStream rng(seed);
  const int dim = grid.dim();
  const int lo = torus ? -band : 1;

  // Canonical lexicographic sweep over the band box, independent of the
  // grid resolution; draws are consumed in this order only.
  int k[3] = {lo, lo, lo};
  for (int a = dim; a < 3; ++a) k[a] = 0;
  while (true) {
    long k2 = 0;
    for (int a = 0; a < dim; ++a) k2 += static_cast<long>(k[a]) * k[a];
    if (k2 != 0 && k2 <= static_cast<long>(band) * band) {
      if (torus) {
        // Generate only the canonical half (first nonzero component
        // positive); the mirror mode gets the conjugate.
        int first = 0;
        for (int a = 0; a < dim; ++a)
          if (k[a] != 0) {
            first = k[a];
            break;
          }
        if (first > 0) {
          const double amp = 1.0 / (1.0 + static_cast<double>(k2));
          const std::complex<double> c(amp * rng.next(), amp * rng.next());
          Eigen::Index ip = 0, im = 0;
          for (int a = 0; a < dim; ++a) {
            ip = ip * n + (k[a] >= 0 ? k[a] : k[a] + n);
            im = im * n + (k[a] <= 0 ? -k[a] : n - k[a]);
          }
          out.coeffs[ip] = c;
          out.coeffs[im] = std::conj(c);
        }
      } else {
        const double amp = 1.0 / (1.0 + static_cast<double>(k2));
        const double c = amp * rng.next();
        Eigen::Index i = 0;
        for (int a = 0; a < dim; ++a) i = i * n + (k[a] - 1);
        out.coeffs[i] = c;
      }
    }
    // Advance the tuple.
    int a = dim - 1;
    while (a >= 0 && k[a] == band) {
      k[a] = lo;
      --a;
    }
    if (a < 0) break;
    ++k[a];
  }
  return out;
}

SpectralField random_band_limited_field(const Grid& grid, std::uint64_t seed,
                                        int band, double l2_norm) {
  SpectralField f = random_band_limited_field(grid, seed, band);
  const double cur = fwlab::l2_norm(f);
  if (cur > 0.0) f.coeffs *= l2_norm / cur;
  return f;
}

SpectralField realize_forcing(const Grid& grid, const ForcingSpec& spec) {
  if (spec.kind == ForcingSpec::Kind::Zero) {
    SpectralField g(grid);
    if (spec.mean != 0.0) {
      if (grid.basis() != Basis::TorusExponential)
        throw std::invalid_argument(
            "realize_forcing: constant forcing needs the torus basis");
      g.coeffs[0] = spec.mean;
    }
    return g;
  }
  SpectralField g =
      random_band_limited_field(grid, spec.seed, spec.band, spec.l2_norm);
  if (spec.mean != 0.0) {
    if (grid.basis() != Basis::TorusExponential)
      throw std::invalid_argument(
          "realize_forcing: constant forcing needs the torus basis");
    g.coeffs[0] = spec.mean;
  }
  return g;
}

}  // namespace fwlab
