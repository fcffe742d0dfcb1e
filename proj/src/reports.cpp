#include "fwlab/reports.hpp"

namespace fwlab {

using nlohmann::json;

json to_json(const RegimeReport& r) {
  return json{{"theta", r.theta},
              {"gamma", r.gamma},
              {"semigroup", to_string(r.semigroup)},
              {"smoothing", to_string(r.smoothing)},
              {"max_regularity", r.max_regularity},
              {"indicators",
               {{"sup_re_lambda", r.sup_re_lambda},
                {"sector_ratio", r.sector_ratio},
                {"bounded_branch", r.bounded_branch},
                {"repeated_root_seen", r.repeated_root_seen}}},
              {"note",
               "classes assigned by the declared numerical surrogate rules"}};
}

json to_json(const WellposednessRange& r) {
  json j{{"theta", r.theta},
         {"known", r.known},
         {"extended_to_quintic", r.extended_to_quintic},
         {"note", r.note}};
  if (r.known) {
    j["q_lo"] = r.q_lo;
    j["q_hi"] = r.q_hi;
    j["lo_closed"] = r.lo_closed;
    j["hi_closed"] = r.hi_closed;
  }
  return j;
}

json to_json(const ExperimentSpec& spec) {
  json j{{"kind", to_string(spec.kind)},
         {"gamma", spec.problem.gamma},
         {"theta", spec.problem.theta},
         {"grid_dim", spec.grid.dim()},
         {"grid_n", spec.grid.n_per_axis()},
         {"dt", spec.dt},
         {"horizon", spec.horizon},
         {"snapshot_stride", spec.snapshot_stride},
         {"data_band", spec.data_band},
         {"seeds", spec.seeds},
         {"amplitudes", spec.amplitudes}};
  if (spec.problem.nonlinearity) {
    const auto& nl = *spec.problem.nonlinearity;
    j["nonlinearity"] = {{"growth_q", nl.growth_q}, {"coeff_a", nl.coeff_a}};
  } else {
    j["nonlinearity"] = nullptr;
  }
  j["forcing"] = {{"kind", spec.problem.forcing.kind == ForcingSpec::Kind::Zero
                              ? "zero"
                              : "seeded"},
                  {"seed", spec.problem.forcing.seed},
                  {"band", spec.problem.forcing.band},
                  {"l2_norm", spec.problem.forcing.l2_norm}};
  if (!spec.resolutions.empty()) j["resolutions"] = spec.resolutions;
  return j;
}

json to_json(const DissipativityReport& r) {
  json trajectories = json::array();
  for (const auto& t : r.trajectories)
    trajectories.push_back({{"seed", t.seed},
                            {"amplitude", t.amplitude},
                            {"blew_up", t.blew_up},
                            {"snapshots", t.records.size()}});
  return json{{"verdict", to_string(r.verdict)},
              {"detail", r.detail},
              {"alpha", r.alpha},
              {"absorbing_level", r.absorbing_level},
              {"tail_spread", r.tail_spread},
              {"entered_ball_times", r.entered_ball_times},
              {"trajectories", trajectories}};
}

json to_json(const GalerkinReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n_coarse", row.n_coarse},
                    {"n_fine", row.n_fine},
                    {"l2_difference", row.l2_difference},
                    {"coarse_blowup", row.coarse_blowup}});
  return json{
      {"verdict", to_string(r.verdict)}, {"detail", r.detail}, {"rows", rows}};
}

json to_json(const AttractorProbeReport& r) {
  json seeds = json::array();
  for (const auto& s : r.seeds)
    seeds.push_back({{"seed", s.seed},
                     {"tail_max", s.tail_max},
                     {"tail_slope", s.tail_slope},
                     {"slope_stderr", s.slope_stderr}});
  return json{
      {"verdict", to_string(r.verdict)}, {"detail", r.detail}, {"seeds", seeds}};
}

json to_json(const StrichartzReport& r) {
  json histories = json::array();
  for (std::size_t i = 0; i < r.window_histories.size(); ++i) {
    json windows = json::array();
    for (const auto& w : r.window_histories[i])
      windows.push_back({{"t_start", w.t_start}, {"value", w.value}});
    histories.push_back({{"amplitude", r.trajectories[i].amplitude},
                         {"windows", windows}});
  }
  return json{{"verdict", to_string(r.verdict)},
              {"detail", r.detail},
              {"q", r.q},
              {"tail_spread", r.tail_spread},
              {"window_histories", histories}};
}

json to_json(const SeparationReport& r) {
  return json{{"verdict", to_string(r.verdict)},
              {"detail", r.detail},
              {"rate", r.rate},
              {"rate_refined", r.rate_refined},
              {"t", r.t},
              {"separation", r.separation}};
}

}  // namespace fwlab
