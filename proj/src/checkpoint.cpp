#include "fwlab/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace fwlab {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

constexpr char kMagic[4] = {'F', 'W', 'L', 'B'};

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value;
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  return value;
}

// Flat index of the mode whose per-axis wavenumbers are given in
// lexicographic order position `pos` (axis values ascending from the
// basis minimum).
Eigen::Index lex_to_flat(const Grid& g, Eigen::Index pos) {
  const int n = g.n_per_axis();
  Eigen::Index flat = 0;
  // Decompose pos into per-axis lex offsets, most-significant first.
  Eigen::Index stride = 1;
  for (int a = 1; a < g.dim(); ++a) stride *= n;
  for (int a = 0; a < g.dim(); ++a) {
    const int off = static_cast<int>(pos / stride);
    pos %= stride;
    stride /= n;
    int j;
    if (g.basis() == Basis::TorusExponential) {
      const int k = -n / 2 + 1 + off;  // ascending -n/2+1 .. n/2
      j = k >= 0 ? k : k + n;
    } else {
      j = off;  // k = off + 1
    }
    flat = flat * n + j;
  }
  return flat;
}

}  // namespace

void write_checkpoint(const SimState& state, const ModelParams& params,
                      const std::string& path) {
  if (state.u.grid != state.v.grid)
    throw std::invalid_argument("write_checkpoint: u and v grids differ");
  if (!state.u.coeffs.isFinite().all() || !state.v.coeffs.isFinite().all())
    throw std::invalid_argument("write_checkpoint: non-finite coefficients");

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_checkpoint: cannot open " + path);

  const Grid& g = state.u.grid;
  os.write(kMagic, 4);
  put<std::uint16_t>(os, kCheckpointVersion);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(g.dim()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n_per_axis()));
  put<std::uint8_t>(os, static_cast<std::uint8_t>(g.basis()));
  put<double>(os, params.gamma);
  put<double>(os, params.theta);
  put<double>(os, state.t);

  for (const auto* field : {&state.u, &state.v})
    for (Eigen::Index pos = 0; pos < g.count(); ++pos) {
      const auto c = field->coeffs[lex_to_flat(g, pos)];
      put<double>(os, c.real());
      put<double>(os, c.imag());
    }
  if (!os) throw std::runtime_error("write_checkpoint: write failed");
}

CheckpointContents read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_checkpoint: cannot open " + path);

  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("read_checkpoint: bad magic bytes");
  const auto version = get<std::uint16_t>(is);
  if (version != kCheckpointVersion)
    throw std::runtime_error("read_checkpoint: unsupported format version " +
                             std::to_string(version));
  const int dim = get<std::uint8_t>(is);
  const int n = static_cast<int>(get<std::uint32_t>(is));
  const auto basis_raw = get<std::uint8_t>(is);
  if (basis_raw > 1)
    throw std::runtime_error("read_checkpoint: bad basis tag");
  const Basis basis = static_cast<Basis>(basis_raw);

  CheckpointContents out;
  out.params.gamma = get<double>(is);
  out.params.theta = get<double>(is);
  const double t = get<double>(is);

  const Grid grid = make_grid(dim, n, basis);
  out.state = SimState(grid);
  out.state.t = t;
  out.params.nonlinearity.reset();
  out.params.forcing = SpectralField();

  for (auto* field : {&out.state.u, &out.state.v})
    for (Eigen::Index pos = 0; pos < grid.count(); ++pos) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      if (!std::isfinite(re) || !std::isfinite(im))
        throw std::runtime_error("read_checkpoint: non-finite coefficient");
      field->coeffs[lex_to_flat(grid, pos)] = {re, im};
    }
  // Exactly at the end: any trailing byte means a format mismatch.
  is.peek();
  if (!is.eof())
    throw std::runtime_error("read_checkpoint: trailing bytes after payload");
  return out;
}

CheckpointInfo checkpoint_info(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint_info: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("checkpoint_info: bad magic bytes");
  CheckpointInfo info;
  info.version = get<std::uint16_t>(is);
  info.dim = get<std::uint8_t>(is);
  info.n_per_axis = static_cast<int>(get<std::uint32_t>(is));
  const auto basis_raw = get<std::uint8_t>(is);
  if (basis_raw > 1) throw std::runtime_error("checkpoint_info: bad basis tag");
  info.basis = static_cast<Basis>(basis_raw);
  info.gamma = get<double>(is);
  info.theta = get<double>(is);
  info.t = get<double>(is);
  return info;
}

}  // namespace fwlab
