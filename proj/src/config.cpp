#include "fermi/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fermi/errors.hpp"

namespace fermi {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> schema = {
    {"detector_a", {"x", "y", "z", "t0", "sigma", "lam", "eta", "gap", "profile", "init", "theta", "phi"}},
    {"detector_b", {"x", "y", "z", "t0", "sigma", "lam", "eta", "gap", "profile", "init", "theta", "phi"}},
    {"field", {"state", "beta", "backend", "box_length", "n_max", "mass"}},
    {"sweep", {"axis", "start", "stop", "steps"}},
    {"measurement", {"measure_alice", "outcome", "bob_in_future"}},
    {"tolerances", {"quadrature_abs", "quadrature_rel", "geometry", "oracle", "compare"}},
    {"output", {"csv", "json"}},
    {"run", {"seed", "jobs"}},
    {"oracle", {"source", "n_max", "g_a", "g_b", "omega", "random_modes", "max_coupling",
                "start_cutoff", "max_cutoff", "max_modes"}},
};

template <class T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '.'));
  if (!node) return fallback;
  const std::string raw = boost::trim_copy(node->data());
  std::istringstream is(raw);
  T value{};
  is >> value;
  if (is.fail() || !(is >> std::ws).eof())
    throw ConfigError("config key '" + key + "': cannot parse '" + raw + "'");
  return value;
}

template <>
std::string get(const pt::ptree& tree, const std::string& key, std::string fallback) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '.'));
  return node ? boost::trim_copy(node->data()) : fallback;
}

template <>
bool get(const pt::ptree& tree, const std::string& key, bool fallback) {
  const std::string raw = boost::to_lower_copy(get<std::string>(tree, key, ""));
  if (raw.empty()) return fallback;
  if (raw == "true" || raw == "yes" || raw == "1") return true;
  if (raw == "false" || raw == "no" || raw == "0") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + raw + "'");
}

template <class E>
E choice(const pt::ptree& tree, const std::string& key, E fallback,
         const std::map<std::string, E>& options) {
  const std::string raw = boost::to_lower_copy(get<std::string>(tree, key, ""));
  if (raw.empty()) return fallback;
  const auto it = options.find(raw);
  if (it == options.end()) {
    std::string allowed;
    for (const auto& [name, _] : options) allowed += (allowed.empty() ? "" : "|") + name;
    throw ConfigError("config key '" + key + "': '" + raw + "' is not one of " + allowed);
  }
  return it->second;
}

std::vector<Complex> complex_list(const pt::ptree& tree, const std::string& key) {
  std::vector<Complex> out;
  const std::string raw = get<std::string>(tree, key, "");
  if (raw.empty()) return out;
  std::vector<std::string> items;
  boost::split(items, raw, boost::is_any_of(","));
  for (const auto& item : items) {
    std::istringstream is(item);
    double re = 0.0, im = 0.0;
    if (!(is >> re)) throw ConfigError("config key '" + key + "': bad entry '" + item + "'");
    if (!(is >> im)) im = 0.0;
    out.emplace_back(re, im);
  }
  return out;
}

std::vector<double> real_list(const pt::ptree& tree, const std::string& key) {
  std::vector<double> out;
  for (const Complex& z : complex_list(tree, key)) {
    if (z.imag() != 0.0) throw ConfigError("config key '" + key + "': values must be real");
    out.push_back(z.real());
  }
  return out;
}

DetectorSpec detector(const pt::ptree& tree, const std::string& s, DetectorSpec d) {
  d.center = {get(tree, s + ".x", d.center[0]), get(tree, s + ".y", d.center[1]),
              get(tree, s + ".z", d.center[2])};
  d.t0 = get(tree, s + ".t0", d.t0);
  d.sigma = get(tree, s + ".sigma", d.sigma);
  d.lam = get(tree, s + ".lam", d.lam);
  d.eta = get(tree, s + ".eta", d.eta);
  d.gap = get(tree, s + ".gap", d.gap);
  d.profile = choice<Profile>(tree, s + ".profile", d.profile,
                              {{"gaussian", Profile::gaussian}, {"bump", Profile::bump}});
  const std::string init = boost::to_lower_copy(get<std::string>(tree, s + ".init", "ground"));
  if (init == "ground")
    d.init = QubitInit::ground();
  else if (init == "excited")
    d.init = QubitInit::excited();
  else if (init == "plus")
    d.init = QubitInit::plus();
  else if (init == "bloch")
    d.init = QubitInit::bloch(get(tree, s + ".theta", 0.0), get(tree, s + ".phi", 0.0));
  else
    throw ConfigError("config key '" + s + ".init': expected ground|excited|plus|bloch");
  return d;
}

void positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be finite and > 0");
}

nlohmann::json detector_json(const DetectorSpec& d) {
  std::string init = "ground";
  if (d.init.kind == QubitInit::Kind::excited) init = "excited";
  if (d.init.kind == QubitInit::Kind::bloch) init = "bloch";
  return {{"center", d.center}, {"t0", d.t0},       {"sigma", d.sigma},
          {"lam", d.lam},       {"eta", d.eta},     {"gap", d.gap},
          {"profile", to_string(d.profile)},        {"init", init},
          {"theta", d.init.theta},                  {"phi", d.init.phi}};
}

}  // namespace

std::vector<double> SweepConfig::values() const {
  if (steps <= 1) return {start};
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i)
    v[static_cast<std::size_t>(i)] = start + (stop - start) * i / (steps - 1);
  return v;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::none:
      return "none";
    case SweepAxis::separation:
      return "separation";
    case SweepAxis::time_gap:
      return "time_gap";
    case SweepAxis::lambda_a:
      return "lambdaA";
    case SweepAxis::sigma_a:
      return "sigmaA";
  }
  return "unknown";
}

std::string to_string(Backend b) { return b == Backend::box ? "box" : "continuum"; }

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto it = schema.find(section);
    if (it == schema.end()) {
      if (body.empty())
        throw ConfigError("config: key '" + section + "' outside any section");
      throw ConfigError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, _] : body)
      if (!it->second.count(key))
        throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
  }

  ExperimentConfig cfg;
  DetectorSpec a_default;
  DetectorSpec b_default;
  b_default.center = {10.0, 0.0, 0.0};
  cfg.a = detector(tree, "detector_a", a_default);
  cfg.b = detector(tree, "detector_b", b_default);

  FieldConfig& f = cfg.field;
  f.state = choice<StateKind>(tree, "field.state", f.state,
                              {{"vacuum", StateKind::vacuum}, {"thermal", StateKind::thermal}});
  f.beta = get(tree, "field.beta", f.beta);
  f.backend = choice<Backend>(tree, "field.backend", f.backend,
                              {{"continuum", Backend::continuum}, {"box", Backend::box}});
  f.box_length = get(tree, "field.box_length", f.box_length);
  f.n_max = get(tree, "field.n_max", f.n_max);
  f.mass = get(tree, "field.mass", f.mass);

  SweepConfig& s = cfg.sweep;
  s.axis = choice<SweepAxis>(tree, "sweep.axis", s.axis,
                             {{"none", SweepAxis::none},
                              {"separation", SweepAxis::separation},
                              {"time_gap", SweepAxis::time_gap},
                              {"lambdaa", SweepAxis::lambda_a},
                              {"sigmaa", SweepAxis::sigma_a}});
  s.start = get(tree, "sweep.start", s.start);
  s.stop = get(tree, "sweep.stop", s.start);
  s.steps = get(tree, "sweep.steps", s.steps);

  MeasurementConfig& m = cfg.measurement;
  m.measure_alice = get(tree, "measurement.measure_alice", m.measure_alice);
  m.outcome = choice<OutcomeMode>(tree, "measurement.outcome", m.outcome,
                                  {{"ground", OutcomeMode::ground},
                                   {"excited", OutcomeMode::excited},
                                   {"average", OutcomeMode::average}});
  m.bob_in_future = choice<FutureFlag>(tree, "measurement.bob_in_future", m.bob_in_future,
                                       {{"auto", FutureFlag::automatic},
                                        {"true", FutureFlag::yes},
                                        {"false", FutureFlag::no}});

  ToleranceConfig& t = cfg.tolerances;
  t.quadrature_abs = get(tree, "tolerances.quadrature_abs", t.quadrature_abs);
  t.quadrature_rel = get(tree, "tolerances.quadrature_rel", t.quadrature_rel);
  t.geometry = get(tree, "tolerances.geometry", t.geometry);
  t.oracle = get(tree, "tolerances.oracle", t.oracle);
  t.compare = get(tree, "tolerances.compare", t.compare);

  cfg.output.csv = get<std::string>(tree, "output.csv", "");
  cfg.output.json = get<std::string>(tree, "output.json", "");

  cfg.seed = get<std::uint64_t>(tree, "run.seed", cfg.seed);
  cfg.jobs = get(tree, "run.jobs", cfg.jobs);

  OracleConfig& o = cfg.oracle;
  o.source = choice<OracleSource>(tree, "oracle.source", o.source,
                                  {{"box", OracleSource::box},
                                   {"explicit", OracleSource::explicit_modes},
                                   {"random", OracleSource::random}});
  o.n_max = get(tree, "oracle.n_max", o.n_max);
  o.g_a = complex_list(tree, "oracle.g_a");
  o.g_b = complex_list(tree, "oracle.g_b");
  o.omega = real_list(tree, "oracle.omega");
  o.random_modes = get(tree, "oracle.random_modes", o.random_modes);
  o.max_coupling = get(tree, "oracle.max_coupling", o.max_coupling);
  o.start_cutoff = get(tree, "oracle.start_cutoff", o.start_cutoff);
  o.max_cutoff = get(tree, "oracle.max_cutoff", o.max_cutoff);
  o.max_modes = get(tree, "oracle.max_modes", o.max_modes);

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void ExperimentConfig::validate() const {
  for (const auto* d : {&a, &b}) {
    try {
      d->validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string(d == &a ? "detector_a: " : "detector_b: ") + e.what());
    }
  }
  if (field.state == StateKind::thermal) {
    positive(field.beta, "field.beta");
    if (field.backend == Backend::continuum)
      throw ConfigError("thermal states need the box backend (field.backend = box)");
  }
  if (field.backend == Backend::continuum && field.mass != 0.0)
    throw ConfigError("massive fields need the box backend (field.backend = box)");
  if (field.backend == Backend::box) {
    positive(field.box_length, "field.box_length");
    if (field.n_max < 1) throw ConfigError("field.n_max must be >= 1");
    if (!(field.mass >= 0.0) || !std::isfinite(field.mass))
      throw ConfigError("field.mass must be finite and >= 0");
  }
  if (sweep.steps < 1) throw ConfigError("sweep.steps must be >= 1");
  if (!std::isfinite(sweep.start) || !std::isfinite(sweep.stop))
    throw ConfigError("sweep range must be finite");
  if (sweep.stop < sweep.start) throw ConfigError("sweep range must be ordered (start <= stop)");
  if (sweep.axis == SweepAxis::none && sweep.steps != 1)
    throw ConfigError("sweep.steps > 1 needs a sweep axis");
  if (sweep.axis == SweepAxis::sigma_a && !(sweep.start > 0.0))
    throw ConfigError("sigmaA sweep values must be > 0");
  if (sweep.axis == SweepAxis::separation && sweep.start < 0.0)
    throw ConfigError("separation sweep values must be >= 0");
  positive(tolerances.quadrature_abs, "tolerances.quadrature_abs");
  positive(tolerances.quadrature_rel, "tolerances.quadrature_rel");
  positive(tolerances.geometry, "tolerances.geometry");
  positive(tolerances.oracle, "tolerances.oracle");
  positive(tolerances.compare, "tolerances.compare");
  if (jobs < 1) throw ConfigError("run.jobs must be >= 1");
  if (measurement.measure_alice && a.init.kind != QubitInit::Kind::excited)
    throw ConfigError("measurement scenarios need detector_a.init = excited");
  if (oracle.source == OracleSource::explicit_modes) {
    if (oracle.omega.empty()) throw ConfigError("oracle.omega must list at least one mode");
    if (oracle.g_a.size() != oracle.omega.size() || oracle.g_b.size() != oracle.omega.size())
      throw ConfigError("oracle.g_a, oracle.g_b and oracle.omega need equal lengths");
    for (double w : oracle.omega) positive(w, "oracle.omega entries");
  }
  if (oracle.source == OracleSource::random) {
    if (oracle.random_modes < 1) throw ConfigError("oracle.random_modes must be >= 1");
    positive(oracle.max_coupling, "oracle.max_coupling");
  }
  if (oracle.n_max < 1) throw ConfigError("oracle.n_max must be >= 1");
  if (oracle.start_cutoff < 2 || oracle.max_cutoff < oracle.start_cutoff)
    throw ConfigError("oracle cutoffs must satisfy 2 <= start_cutoff <= max_cutoff");
  if (oracle.max_modes < 1) throw ConfigError("oracle.max_modes must be >= 1");
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["detector_a"] = detector_json(a);
  j["detector_b"] = detector_json(b);
  j["field"] = {{"state", fermi::to_string(field.state)}, {"beta", field.beta},
                {"backend", fermi::to_string(field.backend)}, {"box_length", field.box_length},
                {"n_max", field.n_max}, {"mass", field.mass}};
  j["sweep"] = {{"axis", fermi::to_string(sweep.axis)}, {"start", sweep.start},
                {"stop", sweep.stop}, {"steps", sweep.steps}};
  const char* outcomes[] = {"ground", "excited", "average"};
  const char* flags[] = {"auto", "true", "false"};
  j["measurement"] = {{"measure_alice", measurement.measure_alice},
                      {"outcome", outcomes[static_cast<int>(measurement.outcome)]},
                      {"bob_in_future", flags[static_cast<int>(measurement.bob_in_future)]}};
  j["tolerances"] = {{"quadrature_abs", tolerances.quadrature_abs},
                     {"quadrature_rel", tolerances.quadrature_rel},
                     {"geometry", tolerances.geometry},
                     {"oracle", tolerances.oracle},
                     {"compare", tolerances.compare}};
  j["output"] = {{"csv", output.csv}, {"json", output.json}};
  j["run"] = {{"seed", seed}, {"jobs", jobs}};
  return j;
}

}  // namespace fermi
