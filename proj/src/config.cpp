#include "fwlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace fwlab {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out = "config invalid:";
  for (const auto& s : v) out += "\n  - " + s;
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Parsed document: section -> key -> value, plus consumption tracking so
// unknown keys can be reported with their path.
struct Document {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::map<std::string, std::vector<std::string>> consumed;
};

Document read_document(std::istream& in, std::vector<std::string>& problems) {
  Document doc;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        problems.push_back("line " + std::to_string(lineno) +
                           ": malformed section header '" + line + "'");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      doc.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(lineno) +
                         ": expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      problems.push_back("line " + std::to_string(lineno) + ": key '" + key +
                         "' outside any [section]");
      continue;
    }
    if (doc.sections[section].count(key))
      problems.push_back(section + "." + key + ": duplicate key");
    doc.sections[section][key] = value;
  }
  return doc;
}

class Reader {
 public:
  Reader(Document& doc, std::vector<std::string>& problems)
      : doc_(doc), problems_(problems) {}

  bool has(const std::string& sec, const std::string& key) {
    auto it = doc_.sections.find(sec);
    return it != doc_.sections.end() && it->second.count(key) > 0;
  }

  std::optional<std::string> raw(const std::string& sec,
                                 const std::string& key) {
    if (!has(sec, key)) return std::nullopt;
    doc_.consumed[sec].push_back(key);
    return doc_.sections[sec][key];
  }

  double number(const std::string& sec, const std::string& key, double dflt) {
    const auto v = raw(sec, key);
    if (!v) return dflt;
    try {
      std::size_t pos = 0;
      const double x = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return x;
    } catch (...) {
      problems_.push_back(sec + "." + key + ": not a number: '" + *v + "'");
      return dflt;
    }
  }

  long integer(const std::string& sec, const std::string& key, long dflt) {
    const auto v = raw(sec, key);
    if (!v) return dflt;
    try {
      std::size_t pos = 0;
      const long x = std::stol(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return x;
    } catch (...) {
      problems_.push_back(sec + "." + key + ": not an integer: '" + *v + "'");
      return dflt;
    }
  }

  std::string word(const std::string& sec, const std::string& key,
                   const std::string& dflt) {
    const auto v = raw(sec, key);
    return v ? *v : dflt;
  }

  template <typename T>
  std::vector<T> list(const std::string& sec, const std::string& key) {
    std::vector<T> out;
    const auto v = raw(sec, key);
    if (!v) return out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      try {
        if constexpr (std::is_integral_v<T>)
          out.push_back(static_cast<T>(std::stoll(item)));
        else
          out.push_back(static_cast<T>(std::stod(item)));
      } catch (...) {
        problems_.push_back(sec + "." + key + ": bad list item '" + item + "'");
      }
    }
    return out;
  }

  void fail(const std::string& path, const std::string& why) {
    problems_.push_back(path + ": " + why);
  }

  // Anything present but never consumed is an unknown key.
  void report_unknown(const std::vector<std::string>& known_sections) {
    for (const auto& [sec, kv] : doc_.sections) {
      if (std::find(known_sections.begin(), known_sections.end(), sec) ==
          known_sections.end()) {
        problems_.push_back("[" + sec + "]: unknown section");
        continue;
      }
      for (const auto& [key, _] : kv) {
        const auto& used = doc_.consumed[sec];
        if (std::find(used.begin(), used.end(), key) == used.end())
          problems_.push_back(sec + "." + key + ": unknown key");
      }
    }
  }

 private:
  Document& doc_;
  std::vector<std::string>& problems_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

IntegratorConfig RunConfig::integrator_config() const {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.dealias = dealias;
  cfg.t_end = t_end;
  cfg.snapshot_stride = snapshot_stride;
  return cfg;
}

RunConfig parse_config(std::istream& in) {
  std::vector<std::string> problems;
  Document doc = read_document(in, problems);
  Reader r(doc, problems);
  RunConfig cfg;

  // [grid]
  const long dim = r.integer("grid", "dim", 3);
  const long n = r.integer("grid", "n", 32);
  const std::string basis_word = r.word("grid", "basis", "torus");
  Basis basis = Basis::TorusExponential;
  if (basis_word == "torus")
    basis = Basis::TorusExponential;
  else if (basis_word == "dirichlet" || basis_word == "sine")
    basis = Basis::DirichletSine;
  else
    r.fail("grid.basis", "must be 'torus' or 'dirichlet', got '" + basis_word +
                             "'");
  const double axis_length = r.number("grid", "axis_length", 0.0);
  try {
    cfg.grid = make_grid(static_cast<int>(dim), static_cast<int>(n), basis,
                         axis_length);
  } catch (const std::exception& e) {
    r.fail("grid", e.what());
  }

  // [model]
  cfg.problem.gamma = r.number("model", "gamma", 1.0);
  if (!(cfg.problem.gamma > 0.0)) r.fail("model.gamma", "gamma must be positive");
  cfg.problem.theta = r.number("model", "theta", 0.5);
  if (cfg.problem.theta < 0.0 || cfg.problem.theta > 1.0)
    r.fail("model.theta", "theta must lie in [0,1]");

  const std::string nl = r.word("model", "nonlinearity", "quintic");
  const double a = r.number("model", "coeff_a", 1.0);
  const double growth_q = r.number("model", "growth_q", -1.0);
  try {
    if (nl == "none") {
      cfg.problem.nonlinearity.reset();
    } else if (nl == "cubic") {
      cfg.problem.nonlinearity = NonlinearitySpec::cubic(a);
    } else if (nl == "quintic") {
      cfg.problem.nonlinearity = NonlinearitySpec::quintic(a);
    } else if (nl == "power_odd") {
      cfg.problem.nonlinearity =
          NonlinearitySpec::power_odd(growth_q < 0.0 ? 4.0 : growth_q, a);
    } else if (nl == "custom") {
      const std::string path = r.word("model", "custom_table", "");
      if (path.empty()) {
        r.fail("model.custom_table", "required for nonlinearity = custom");
      } else {
        std::ifstream f(path);
        if (!f) {
          r.fail("model.custom_table", "cannot open '" + path + "'");
        } else {
          std::vector<double> us, fs;
          double uu, ff;
          char comma;
          while (f >> uu >> comma >> ff) {
            us.push_back(uu);
            fs.push_back(ff);
          }
          cfg.problem.nonlinearity = NonlinearitySpec::custom(
              Eigen::Map<Eigen::ArrayXd>(us.data(), us.size()),
              Eigen::Map<Eigen::ArrayXd>(fs.data(), fs.size()),
              growth_q < 0.0 ? 4.0 : growth_q);
        }
      }
    } else {
      r.fail("model.nonlinearity",
             "must be none|cubic|quintic|power_odd|custom, got '" + nl + "'");
    }
  } catch (const std::exception& e) {
    r.fail("model.nonlinearity", e.what());
  }
  if (nl != "custom" && r.raw("model", "custom_table"))
    r.fail("model.custom_table", "only valid with nonlinearity = custom");

  const std::string forcing = r.word("model", "forcing", "zero");
  if (forcing == "zero") {
    cfg.problem.forcing.kind = ForcingSpec::Kind::Zero;
  } else if (forcing == "seeded") {
    cfg.problem.forcing.kind = ForcingSpec::Kind::Seeded;
  } else {
    r.fail("model.forcing", "must be 'zero' or 'seeded', got '" + forcing + "'");
  }
  cfg.problem.forcing.seed =
      static_cast<std::uint64_t>(r.integer("model", "forcing_seed", 1));
  cfg.problem.forcing.band =
      static_cast<int>(r.integer("model", "forcing_band", 4));
  cfg.problem.forcing.l2_norm = r.number("model", "forcing_norm", 1.0);
  cfg.problem.forcing.mean = r.number("model", "forcing_mean", 0.0);

  // Cross-field rule: theta > 0 leaves the mean mode undamped, so the
  // forcing must be mean-free there.
  if (cfg.problem.theta > 0.0 && cfg.problem.forcing.mean != 0.0)
    r.fail("model.forcing_mean",
           "theta > 0 requires mean-zero forcing (undamped mean mode)");
  if (basis == Basis::DirichletSine && cfg.problem.forcing.mean != 0.0)
    r.fail("model.forcing_mean", "sine basis has no constant mode");
  if (basis == Basis::DirichletSine && cfg.problem.nonlinearity &&
      !cfg.problem.nonlinearity->is_odd())
    r.fail("model.nonlinearity",
           "Dirichlet basis requires an odd nonlinearity (odd extension)");

  // [integrator]
  cfg.dt = r.number("integrator", "dt", 1e-2);
  if (!(cfg.dt > 0.0)) r.fail("integrator.dt", "dt must be positive");
  const std::string dealias = r.word("integrator", "dealias", "zero_pad_triple");
  if (dealias == "zero_pad_triple")
    cfg.dealias = Dealias::ZeroPadTriple;
  else if (dealias == "two_thirds")
    cfg.dealias = Dealias::TwoThirds;
  else if (dealias == "none")
    cfg.dealias = Dealias::None;
  else
    r.fail("integrator.dealias",
           "must be zero_pad_triple|two_thirds|none, got '" + dealias + "'");
  cfg.t_end = r.number("integrator", "t_end", 1.0);
  if (cfg.t_end < 0.0) r.fail("integrator.t_end", "t_end must be >= 0");
  cfg.snapshot_stride =
      static_cast<int>(r.integer("integrator", "snapshot_stride", 10));
  if (cfg.snapshot_stride < 1)
    r.fail("integrator.snapshot_stride", "must be >= 1");

  // [initial] (optional; defaults to a seeded unit-amplitude state)
  if (doc.sections.count("initial")) {
    const std::string kind = r.word("initial", "kind", "seeded");
    if (kind == "zero")
      cfg.initial.kind = InitialSpec::Kind::Zero;
    else if (kind == "seeded")
      cfg.initial.kind = InitialSpec::Kind::Seeded;
    else if (kind == "checkpoint")
      cfg.initial.kind = InitialSpec::Kind::Checkpoint;
    else
      r.fail("initial.kind", "must be zero|seeded|checkpoint, got '" + kind +
                                 "'");
    cfg.initial.seed =
        static_cast<std::uint64_t>(r.integer("initial", "seed", 1));
    cfg.initial.band = static_cast<int>(r.integer("initial", "band", 4));
    cfg.initial.amplitude = r.number("initial", "amplitude", 1.0);
    cfg.initial.checkpoint_path = r.word("initial", "checkpoint_path", "");
    if (cfg.initial.kind == InitialSpec::Kind::Checkpoint &&
        cfg.initial.checkpoint_path.empty())
      r.fail("initial.checkpoint_path", "required for kind = checkpoint");
    if (cfg.initial.band < 1) r.fail("initial.band", "must be >= 1");
    if (cfg.initial.amplitude < 0.0)
      r.fail("initial.amplitude", "must be >= 0");
  }

  // [experiment] (optional)
  if (doc.sections.count("experiment")) {
    ExperimentSpec ex;
    ex.problem = cfg.problem;
    ex.grid = cfg.grid;
    ex.dt = cfg.dt;
    ex.dealias = cfg.dealias;
    ex.snapshot_stride = cfg.snapshot_stride;

    const std::string kind = r.word("experiment", "kind", "");
    if (kind == "dissipativity")
      ex.kind = ExperimentKind::Dissipativity;
    else if (kind == "galerkin")
      ex.kind = ExperimentKind::GalerkinConvergence;
    else if (kind == "attractor")
      ex.kind = ExperimentKind::AttractorRegularity;
    else if (kind == "strichartz")
      ex.kind = ExperimentKind::StrichartzProbe;
    else if (kind == "separation")
      ex.kind = ExperimentKind::SeparationProbe;
    else
      r.fail("experiment.kind",
             "must be dissipativity|galerkin|attractor|strichartz|separation, "
             "got '" +
                 kind + "'");

    auto seeds = r.list<long>("experiment", "seeds");
    if (!seeds.empty()) {
      ex.seeds.clear();
      for (long s : seeds) ex.seeds.push_back(static_cast<std::uint64_t>(s));
    }
    auto amps = r.list<double>("experiment", "amplitudes");
    if (!amps.empty()) ex.amplitudes = amps;
    ex.horizon = r.number("experiment", "horizon", 50.0);
    ex.data_band = static_cast<int>(r.integer("experiment", "data_band", 4));
    auto res = r.list<long>("experiment", "resolutions");
    for (long x : res) ex.resolutions.push_back(static_cast<int>(x));
    ex.delta0 = r.number("experiment", "delta0", 1e-8);

    if (ex.horizon < 10.0) r.fail("experiment.horizon", "must be >= 10");
    if (ex.kind == ExperimentKind::Dissipativity && ex.amplitudes.size() < 3)
      r.fail("experiment.amplitudes",
             "dissipativity needs at least 3 amplitudes");
    if (ex.kind == ExperimentKind::StrichartzProbe &&
        cfg.problem.theta != 0.0)
      r.fail("experiment.kind", "strichartz probe requires theta = 0");
    if (ex.kind == ExperimentKind::GalerkinConvergence) {
      if (ex.resolutions.size() < 2)
        r.fail("experiment.resolutions", "need >= 2 increasing resolutions");
      for (std::size_t i = 0; i + 1 < ex.resolutions.size(); ++i)
        if (ex.resolutions[i + 1] <= ex.resolutions[i])
          r.fail("experiment.resolutions", "must be strictly increasing");
      for (int x : ex.resolutions)
        if (x % 2 != 0 || x < 4)
          r.fail("experiment.resolutions", "entries must be even and >= 4");
    }
    if (ex.kind == ExperimentKind::SeparationProbe) {
      const double amp = ex.amplitudes.empty() ? 1.0 : ex.amplitudes[0];
      if (!(ex.delta0 > 0.0) || ex.delta0 > 1e-6 * amp)
        r.fail("experiment.delta0",
               "must be positive and <= 1e-6 relative to the data norm");
    }
    cfg.experiment = std::move(ex);
  }

  // [output] (optional)
  cfg.output_directory = r.word("output", "directory", "out");
  r.raw("output", "formats");  // accepted for compatibility; csv+json always

  r.report_unknown(
      {"grid", "model", "integrator", "initial", "experiment", "output"});
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

RunConfig parse_config(const std::string& text) {
  std::istringstream ss(text);
  return parse_config(ss);
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError({"cannot open config file '" + path + "'"});
  return parse_config(f);
}

}  // namespace fwlab
