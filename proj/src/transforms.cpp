#include "fwlab/transforms.hpp"

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace fwlab {

Grid detail_make_grid_relaxed(int dim, int n_per_axis, Basis basis,
                              double axis_length);

namespace {

// One cached FFTW plan with its private buffers. Plans are created once
// per (kind, dim, n) and reused; execution is serialized per entry so
// concurrent callers on distinct data are safe.
struct PlanEntry {
  fftw_plan plan = nullptr;
  double* rbuf = nullptr;
  fftw_complex* cbuf1 = nullptr;
  fftw_complex* cbuf2 = nullptr;
  std::mutex mtx;

  ~PlanEntry() {
    if (plan) fftw_destroy_plan(plan);
    if (rbuf) fftw_free(rbuf);
    if (cbuf1) fftw_free(cbuf1);
    if (cbuf2) fftw_free(cbuf2);
  }
};

enum class PlanKind { C2CForward, C2CBackward, R2C, C2R, Rodft00 };

using PlanKey = std::tuple<PlanKind, int, int>;  // kind, dim, n

std::mutex g_cache_mtx;
std::map<PlanKey, std::unique_ptr<PlanEntry>>& plan_cache() {
  static auto* cache = new std::map<PlanKey, std::unique_ptr<PlanEntry>>();
  return *cache;
}

Eigen::Index total_count(int dim, int n) {
  Eigen::Index c = 1;
  for (int a = 0; a < dim; ++a) c *= n;
  return c;
}

Eigen::Index half_count(int dim, int n) {
  Eigen::Index c = n / 2 + 1;
  for (int a = 0; a < dim - 1; ++a) c *= n;
  return c;
}

PlanEntry& get_plan(PlanKind kind, int dim, int n) {
  std::lock_guard<std::mutex> lk(g_cache_mtx);
  auto& cache = plan_cache();
  const PlanKey key{kind, dim, n};
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  auto entry = std::make_unique<PlanEntry>();
  int dims[3] = {n, n, n};
  const Eigen::Index count = total_count(dim, n);
  switch (kind) {
    case PlanKind::C2CForward:
    case PlanKind::C2CBackward: {
      entry->cbuf1 = fftw_alloc_complex(count);
      entry->cbuf2 = fftw_alloc_complex(count);
      const int sign =
          kind == PlanKind::C2CForward ? FFTW_FORWARD : FFTW_BACKWARD;
      entry->plan = fftw_plan_dft(dim, dims, entry->cbuf1, entry->cbuf2, sign,
                                  FFTW_MEASURE);
      break;
    }
    case PlanKind::R2C: {
      entry->rbuf = fftw_alloc_real(count);
      entry->cbuf1 = fftw_alloc_complex(half_count(dim, n));
      entry->plan = fftw_plan_dft_r2c(dim, dims, entry->rbuf, entry->cbuf1,
                                      FFTW_MEASURE);
      break;
    }
    case PlanKind::C2R: {
      entry->rbuf = fftw_alloc_real(count);
      entry->cbuf1 = fftw_alloc_complex(half_count(dim, n));
      entry->plan = fftw_plan_dft_c2r(dim, dims, entry->cbuf1, entry->rbuf,
                                      FFTW_MEASURE);
      break;
    }
    case PlanKind::Rodft00: {
      entry->rbuf = fftw_alloc_real(count);
      fftw_r2r_kind kinds[3] = {FFTW_RODFT00, FFTW_RODFT00, FFTW_RODFT00};
      entry->plan = fftw_plan_r2r(dim, dims, entry->rbuf, entry->rbuf, kinds,
                                  FFTW_MEASURE);
      break;
    }
  }
  if (!entry->plan) throw std::runtime_error("fftw plan creation failed");
  auto& ref = *entry;
  cache.emplace(key, std::move(entry));
  return ref;
}

void check_finite(const Eigen::ArrayXd& v, const char* what) {
  if (!v.isFinite().all())
    throw std::invalid_argument(std::string(what) + ": non-finite values");
}

// Torus conjugate-symmetry check: c(-k) == conj(c(k)) up to a relative
// tolerance. The Nyquist planes are self-conjugate, so this also forces
// their imaginary parts to ~0.
void check_torus_symmetry(const SpectralField& s) {
  const Grid& g = s.grid;
  const int n = g.n_per_axis();
  const double tol = 1e-10 * std::max(1.0, s.coeffs.abs().maxCoeff());
  for (Eigen::Index i = 0; i < g.count(); ++i) {
    const auto j = g.unflatten(i);
    Eigen::Index mi = 0;
    for (int a = 0; a < g.dim(); ++a) mi = mi * n + ((n - j[a]) % n);
    const std::complex<double> d = s.coeffs[i] - std::conj(s.coeffs[mi]);
    if (std::abs(d) > tol)
      throw std::invalid_argument(
          "inverse_transform: conjugate-symmetry violation");
  }
}

void check_sine_real(const SpectralField& s) {
  const double tol = 1e-10 * std::max(1.0, s.coeffs.abs().maxCoeff());
  if ((s.coeffs.imag().abs() > tol).any())
    throw std::invalid_argument(
        "inverse_transform: sine coefficients must be real");
}

}  // namespace

Grid make_refined_grid(const Grid& base, int m_per_axis) {
  if (m_per_axis < base.n_per_axis() || m_per_axis % 2 != 0)
    throw std::invalid_argument(
        "make_refined_grid: m_per_axis must be even and >= n_per_axis");
  if (m_per_axis == base.n_per_axis()) return base;
  return detail_make_grid_relaxed(base.dim(), m_per_axis, base.basis(),
                                  base.axis_length());
}

SpectralField forward_transform(const Field& f) {
  check_finite(f.values, "forward_transform");
  const Grid& g = f.grid;
  SpectralField out(g);
  if (g.basis() == Basis::TorusExponential) {
    auto& e = get_plan(PlanKind::C2CForward, g.dim(), g.n_per_axis());
    std::lock_guard<std::mutex> lk(e.mtx);
    for (Eigen::Index i = 0; i < g.count(); ++i) {
      e.cbuf1[i][0] = f.values[i];
      e.cbuf1[i][1] = 0.0;
    }
    fftw_execute(e.plan);
    const double scale = 1.0 / static_cast<double>(g.count());
    for (Eigen::Index i = 0; i < g.count(); ++i)
      out.coeffs[i] = std::complex<double>(e.cbuf2[i][0], e.cbuf2[i][1]) * scale;
  } else {
    auto& e = get_plan(PlanKind::Rodft00, g.dim(), g.n_per_axis());
    std::lock_guard<std::mutex> lk(e.mtx);
    for (Eigen::Index i = 0; i < g.count(); ++i) e.rbuf[i] = f.values[i];
    fftw_execute(e.plan);
    double scale = 1.0;
    for (int a = 0; a < g.dim(); ++a) scale /= (g.n_per_axis() + 1);
    for (Eigen::Index i = 0; i < g.count(); ++i)
      out.coeffs[i] = e.rbuf[i] * scale;
  }
  return out;
}

Field inverse_transform(const SpectralField& s) {
  const Grid& g = s.grid;
  Field out(g);
  if (g.basis() == Basis::TorusExponential) {
    check_torus_symmetry(s);
    auto& e = get_plan(PlanKind::C2CBackward, g.dim(), g.n_per_axis());
    std::lock_guard<std::mutex> lk(e.mtx);
    for (Eigen::Index i = 0; i < g.count(); ++i) {
      e.cbuf1[i][0] = s.coeffs[i].real();
      e.cbuf1[i][1] = s.coeffs[i].imag();
    }
    fftw_execute(e.plan);
    for (Eigen::Index i = 0; i < g.count(); ++i) out.values[i] = e.cbuf2[i][0];
  } else {
    check_sine_real(s);
    auto& e = get_plan(PlanKind::Rodft00, g.dim(), g.n_per_axis());
    std::lock_guard<std::mutex> lk(e.mtx);
    for (Eigen::Index i = 0; i < g.count(); ++i)
      e.rbuf[i] = s.coeffs[i].real();
    fftw_execute(e.plan);
    double scale = 1.0;
    for (int a = 0; a < g.dim(); ++a) scale *= 0.5;
    for (Eigen::Index i = 0; i < g.count(); ++i)
      out.values[i] = e.rbuf[i] * scale;
  }
  return out;
}

Field eval_shifted(const SpectralField& s, const std::array<double, 3>& h) {
  const Grid& g = s.grid;
  if (g.basis() != Basis::TorusExponential)
    throw std::invalid_argument(
        "eval_shifted: torus basis only (use the odd extension for sine "
        "fields)");

  // Per-axis phase tables e^{i kappa_a h_a}.
  const int n = g.n_per_axis();
  std::vector<std::array<std::complex<double>, 512>> phase(g.dim());
  for (int a = 0; a < g.dim(); ++a)
    for (int j = 0; j < n; ++j)
      phase[a][j] = std::polar(1.0, g.axis_kappa(j) * h[a]);

  auto& e = get_plan(PlanKind::C2CBackward, g.dim(), n);
  std::lock_guard<std::mutex> lk(e.mtx);
  for (Eigen::Index i = 0; i < g.count(); ++i) {
    const auto j = g.unflatten(i);
    std::complex<double> c = s.coeffs[i];
    for (int a = 0; a < g.dim(); ++a) c *= phase[a][j[a]];
    e.cbuf1[i][0] = c.real();
    e.cbuf1[i][1] = c.imag();
  }
  fftw_execute(e.plan);
  Field out(g);
  for (Eigen::Index i = 0; i < g.count(); ++i) out.values[i] = e.cbuf2[i][0];
  return out;
}

Field resample(const SpectralField& u, int m_per_axis) {
  const Grid& g = u.grid;
  const int n = g.n_per_axis();
  if (m_per_axis == n) return inverse_transform(u);
  const Grid fine = make_refined_grid(g, m_per_axis);
  const int m = m_per_axis;
  Field out(fine);

  if (g.basis() == Basis::TorusExponential) {
    // Scatter the band coefficients into the half-spectrum of the fine
    // grid, then one c2r transform. c2r assumes conjugate symmetry, so
    // only the k_last >= 0 half needs to be written.
    auto& e = get_plan(PlanKind::C2R, g.dim(), m);
    std::lock_guard<std::mutex> lk(e.mtx);
    const Eigen::Index hc = half_count(g.dim(), m);
    std::fill(&e.cbuf1[0][0], &e.cbuf1[0][0] + 2 * hc, 0.0);
    const int hlast = m / 2 + 1;
    for (Eigen::Index i = 0; i < g.count(); ++i) {
      const auto j = g.unflatten(i);
      const int klast = g.axis_wavenumber(j[g.dim() - 1]);
      if (klast < 0) continue;
      Eigen::Index t = 0;
      for (int a = 0; a < g.dim() - 1; ++a) {
        const int k = g.axis_wavenumber(j[a]);
        t = t * m + (k >= 0 ? k : k + m);
      }
      t = t * hlast + klast;
      e.cbuf1[t][0] = u.coeffs[i].real();
      e.cbuf1[t][1] = u.coeffs[i].imag();
    }
    fftw_execute(e.plan);
    for (Eigen::Index i = 0; i < fine.count(); ++i) out.values[i] = e.rbuf[i];
  } else {
    auto& e = get_plan(PlanKind::Rodft00, g.dim(), m);
    std::lock_guard<std::mutex> lk(e.mtx);
    const Eigen::Index fc = fine.count();
    std::fill(e.rbuf, e.rbuf + fc, 0.0);
    for (Eigen::Index i = 0; i < g.count(); ++i) {
      const auto j = g.unflatten(i);
      Eigen::Index t = 0;
      for (int a = 0; a < g.dim(); ++a) t = t * m + j[a];
      e.rbuf[t] = u.coeffs[i].real();
    }
    fftw_execute(e.plan);
    double scale = 1.0;
    for (int a = 0; a < g.dim(); ++a) scale *= 0.5;
    for (Eigen::Index i = 0; i < fc; ++i) out.values[i] = e.rbuf[i] * scale;
  }
  return out;
}

SpectralField forward_truncated(const Field& fine, const Grid& target) {
  const Grid& fg = fine.grid;
  if (fg.dim() != target.dim() || fg.basis() != target.basis() ||
      fg.axis_length() != target.axis_length() ||
      fg.n_per_axis() < target.n_per_axis())
    throw std::invalid_argument("forward_truncated: incompatible grids");
  if (fg.n_per_axis() == target.n_per_axis()) return forward_transform(fine);

  const int m = fg.n_per_axis();
  SpectralField out(target);

  if (fg.basis() == Basis::TorusExponential) {
    auto& e = get_plan(PlanKind::R2C, fg.dim(), m);
    std::lock_guard<std::mutex> lk(e.mtx);
    for (Eigen::Index i = 0; i < fg.count(); ++i) e.rbuf[i] = fine.values[i];
    fftw_execute(e.plan);
    const int hlast = m / 2 + 1;
    const double scale = 1.0 / static_cast<double>(fg.count());
    for (Eigen::Index i = 0; i < target.count(); ++i) {
      const auto j = target.unflatten(i);
      int k[3] = {0, 0, 0};
      for (int a = 0; a < target.dim(); ++a) k[a] = target.axis_wavenumber(j[a]);
      const int d = target.dim();
      const bool conj = k[d - 1] < 0;
      Eigen::Index t = 0;
      for (int a = 0; a < d - 1; ++a) {
        const int ka = conj ? -k[a] : k[a];
        t = t * m + (ka >= 0 ? ka : ka + m);
      }
      t = t * hlast + (conj ? -k[d - 1] : k[d - 1]);
      std::complex<double> c(e.cbuf1[t][0], e.cbuf1[t][1]);
      out.coeffs[i] = (conj ? std::conj(c) : c) * scale;
    }
  } else {
    auto& e = get_plan(PlanKind::Rodft00, fg.dim(), m);
    std::lock_guard<std::mutex> lk(e.mtx);
    for (Eigen::Index i = 0; i < fg.count(); ++i) e.rbuf[i] = fine.values[i];
    fftw_execute(e.plan);
    double scale = 1.0;
    for (int a = 0; a < fg.dim(); ++a) scale /= (m + 1);
    for (Eigen::Index i = 0; i < target.count(); ++i) {
      const auto j = target.unflatten(i);
      Eigen::Index t = 0;
      for (int a = 0; a < target.dim(); ++a) t = t * m + j[a];
      out.coeffs[i] = e.rbuf[t] * scale;
    }
  }
  return out;
}

}  // namespace fwlab
