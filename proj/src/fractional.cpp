#include "fwlab/fractional.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fwlab/transforms.hpp"

namespace fwlab {

namespace {

// Pairwise reduction in a fixed order: the canonical summation for the
// h-quadrature, deterministic regardless of any internal parallelism.
double pairwise_sum(std::vector<double>& terms, std::size_t lo,
                    std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += terms[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(terms, lo, mid) + pairwise_sum(terms, mid, hi);
}

}  // namespace

FractionalExponent::FractionalExponent(double value) : s(value) {
  if (!(value >= 0.0 && value <= 1.0))
    throw std::invalid_argument("FractionalExponent: s must lie in [0,1]");
}

void IntegralQuadratureSpec::validate() const {
  if (!(h_min > 0.0) || !(h_max > h_min))
    throw std::invalid_argument(
        "IntegralQuadratureSpec: need 0 < h_min < h_max");
  if (shells < 4)
    throw std::invalid_argument("IntegralQuadratureSpec: shells must be >= 4");
  if (directions < 6)
    throw std::invalid_argument(
        "IntegralQuadratureSpec: directions must be >= 6");
}

SpectralField apply_fractional_laplacian(const SpectralField& u,
                                         FractionalExponent s) {
  SpectralField out(u.grid);
  for (Eigen::Index i = 0; i < u.grid.count(); ++i) {
    const double mu = u.grid.mu_flat(i);
    out.coeffs[i] = mu == 0.0 ? 0.0 : std::pow(mu, s.s) * u.coeffs[i];
  }
  return out;
}

double bilinear_form_spectral(const SpectralField& v, const SpectralField& u,
                              FractionalExponent s) {
  if (v.grid != u.grid)
    throw std::invalid_argument("bilinear_form_spectral: grid mismatch");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.grid.count(); ++i) {
    const double mu = u.grid.mu_flat(i);
    if (mu == 0.0) continue;
    acc += std::pow(mu, s.s) *
           (std::conj(v.coeffs[i]) * u.coeffs[i]).real();
  }
  return acc * u.grid.mode_weight();
}

std::vector<std::array<double, 3>> sphere_directions(int count) {
  std::vector<std::array<double, 3>> dirs;
  if (count == 6 || count == 14 || count == 26) {
    for (int a = 0; a < 3; ++a)
      for (int sgn : {1, -1}) {
        std::array<double, 3> d{0, 0, 0};
        d[a] = sgn;
        dirs.push_back(d);
      }
    if (count >= 14) {
      const double c = 1.0 / std::sqrt(3.0);
      for (int s0 : {1, -1})
        for (int s1 : {1, -1})
          for (int s2 : {1, -1})
            dirs.push_back({s0 * c, s1 * c, s2 * c});
    }
    if (count == 26) {
      const double c = 1.0 / std::sqrt(2.0);
      for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3;
        for (int sa : {1, -1})
          for (int sb : {1, -1}) {
            std::array<double, 3> d{0, 0, 0};
            d[a] = sa * c;
            d[b] = sb * c;
            dirs.push_back(d);
          }
      }
    }
    return dirs;
  }

  // Fibonacci spiral for general counts.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  dirs.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    dirs.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
  }
  return dirs;
}

std::vector<RadialNode> radial_log_nodes(double h_min, double h_max,
                                         int shells) {
  std::vector<RadialNode> nodes(shells);
  const double dt = std::log(h_max / h_min) / (shells - 1);
  for (int i = 0; i < shells; ++i) {
    const double r = h_min * std::exp(dt * i);
    const double trap = (i == 0 || i == shells - 1) ? 0.5 : 1.0;
    nodes[i] = {r, trap * dt * r * r * r};  // r^2 dr = r^3 dlog r
  }
  return nodes;
}

double bilinear_form_integral(const SpectralField& v, const SpectralField& u,
                              FractionalExponent s,
                              const IntegralQuadratureSpec& q, double c) {
  q.validate();
  if (v.grid != u.grid)
    throw std::invalid_argument("bilinear_form_integral: grid mismatch");
  const Grid& g = u.grid;
  if (g.basis() != Basis::TorusExponential || g.dim() != 3)
    throw std::invalid_argument(
        "bilinear_form_integral: torus basis with dim=3 required");
  if (!(c > 0.0))
    throw std::invalid_argument("bilinear_form_integral: c must be positive");

  const bool same = &v == &u || v.coeffs.data() == u.coeffs.data();
  const Field u0 = inverse_transform(u);
  const Field v0 = same ? u0 : inverse_transform(v);

  const auto dirs = sphere_directions(q.directions);
  const auto radial = radial_log_nodes(q.h_min, q.h_max, q.shells);
  const double dir_weight = 4.0 * std::numbers::pi / dirs.size();
  const double w = g.quadrature_weight();

  std::vector<double> terms;
  terms.reserve(radial.size() * dirs.size());
  for (const auto& node : radial) {
    const double kernel = std::pow(node.r, -(3.0 + 2.0 * s.s));
    for (const auto& d : dirs) {
      const std::array<double, 3> h{node.r * d[0], node.r * d[1],
                                    node.r * d[2]};
      const Field us = eval_shifted(u, h);
      const Field vs = same ? us : eval_shifted(v, h);
      const double inner =
          w * ((vs.values - v0.values) * (us.values - u0.values)).sum();
      terms.push_back(node.weight * dir_weight * kernel * inner);
    }
  }
  return c * pairwise_sum(terms, 0, terms.size());
}

double calibrate_constant(FractionalExponent s, const IntegralQuadratureSpec& q,
                          const Grid& grid) {
  if (!(s.s > 0.0 && s.s < 1.0))
    throw std::invalid_argument("calibrate_constant: s must lie in (0,1)");
  const Field m = sample_field(grid, [](double x, double, double) {
    return std::cos(x);
  });
  const SpectralField mc = forward_transform(m);
  const double spectral = bilinear_form_spectral(mc, mc, s);
  const double integral = bilinear_form_integral(mc, mc, s, q, 1.0);
  if (!(integral > 0.0) || !std::isfinite(integral))
    throw std::runtime_error(
        "calibrate_constant: degenerate quadrature (zero or non-finite "
        "denominator)");
  return spectral / integral;
}

double calibrate_constant(FractionalExponent s,
                          const IntegralQuadratureSpec& q) {
  // cos(x1) is exactly representable on any admissible grid, so a small
  // one keeps calibration cheap.
  return calibrate_constant(s, q, make_grid(3, 8, Basis::TorusExponential));
}

}  // namespace fwlab
