#pragma once

#include <string>

#include "fwlab/integrator.hpp"

namespace fwlab {

/// Binary checkpoint, little-endian throughout:
///   magic "FWLB", format version u16, dim u8, n_per_axis u32, basis u8,
///   gamma f64, theta f64, t f64, then the u coefficients and the v
///   coefficients as interleaved (re, im) f64 in lexicographic
///   wavenumber order (torus axes -n/2+1..n/2, sine axes 1..n).
/// The nonlinearity and forcing are not stored; resuming a run takes
/// them from the config.
inline constexpr std::uint16_t kCheckpointVersion = 1;

void write_checkpoint(const SimState& state, const ModelParams& params,
                      const std::string& path);

struct CheckpointContents {
  SimState state;
  ModelParams params;  // gamma and theta only; f = 0, g = 0
};

CheckpointContents read_checkpoint(const std::string& path);

/// Header summary without loading the coefficient payload.
struct CheckpointInfo {
  std::uint16_t version = 0;
  int dim = 0;
  int n_per_axis = 0;
  Basis basis = Basis::TorusExponential;
  double gamma = 0.0;
  double theta = 0.0;
  double t = 0.0;
};

CheckpointInfo checkpoint_info(const std::string& path);

}  // namespace fwlab
