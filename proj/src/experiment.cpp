#include "fermi/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "fermi/errors.hpp"
#include "fermi/measurement.hpp"

namespace fermi {

namespace {

constexpr SmearingIndex f_a{0};
constexpr SmearingIndex f_b{1};
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

Monopole monopole(const DetectorSpec& d) { return {d.gap, d.t0}; }

nlohmann::json pair_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json choi_json(const Matrix4c& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < 4; ++k) row.push_back(pair_json(c(r, k)));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json deltas(const QubitChannel& x, const QubitChannel& y) {
  return {{"a", pair_json(x.a - y.a)},
          {"b", pair_json(x.b - y.b)},
          {"c_plus", pair_json(x.c_plus - y.c_plus)},
          {"c_minus", pair_json(x.c_minus - y.c_minus)}};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += (c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

const char* approximate_warning =
    "Gaussian profiles have no compact support; the causal relation uses a 5 sigma effective radius";

}  // namespace

Pipeline build_pipeline(const ExperimentConfig& cfg) {
  cfg.validate();
  const CausalRelation rel = causal_relation(cfg.a, cfg.b);
  if (cfg.b.t0 <= cfg.a.t0 && rel != CausalRelation::spacelike)
    throw ConfigError("time ordering: detector_b must couple after detector_a unless the pair is spacelike");

  if (cfg.field.backend == Backend::continuum) {
    GeometryOptions go;
    go.quad.abs_tol = cfg.tolerances.quadrature_abs;
    go.quad.rel_tol = cfg.tolerances.quadrature_rel;
    go.tolerance = cfg.tolerances.geometry;
    const GeometryResult g = geometry_result(cfg.a, cfg.b, go);
    return {cfg, QuasifreeState(g.to_bilinear(f_a, f_b), StateKind::vacuum), rel,
            causal_relation_is_approximate(cfg.a, cfg.b), g.quadrature_error};
  }
  const DetectorSpec dets[2] = {cfg.a, cfg.b};
  const ModeCouplings mc = box_modes(cfg.field.box_length, cfg.field.n_max, cfg.field.mass, dets,
                                     {f_a.id, f_b.id});
  QuasifreeState st = cfg.field.state == StateKind::thermal
                          ? thermal_from_modes(mc, cfg.field.beta)
                          : vacuum_from_modes(mc);
  return {cfg, std::move(st), rel, causal_relation_is_approximate(cfg.a, cfg.b), 0.0};
}

ExperimentConfig at_axis_value(const ExperimentConfig& cfg, double value) {
  ExperimentConfig c = cfg;
  switch (cfg.sweep.axis) {
    case SweepAxis::none:
      break;
    case SweepAxis::separation:
      c.b.center = {c.a.center[0] + value, c.a.center[1], c.a.center[2]};
      break;
    case SweepAxis::time_gap:
      c.b.t0 = c.a.t0 + value;
      break;
    case SweepAxis::lambda_a:
      c.a.lam = value;
      break;
    case SweepAxis::sigma_a:
      c.a.sigma = value;
      break;
  }
  return c;
}

PointResult run_point(const ExperimentConfig& cfg) {
  const Pipeline p = build_pipeline(cfg);
  const QuasifreeState& st = p.state;
  const QubitState rho_a = QubitState::from_init(cfg.a.init);
  const QubitState rho_b = QubitState::from_init(cfg.b.init);
  const Monopole mu_a = monopole(cfg.a);
  const Monopole mu_b = monopole(cfg.b);
  const double al = alpha(rho_a, mu_a);

  const QubitChannel ch = general_channel(gamma_tensor(st, f_a, f_b), al, mu_b);
  const double nu_b = nu_factor(st, f_b);
  const double e_ab = st.data().e(f_a, f_b);
  const QubitChannel closed = quasifree_channel(nu_b, e_ab, mu_b, al);
  const double gap = coefficient_distance(ch, closed);
  if (gap > 1e-10)
    throw ConsistencyError("general and closed-form channels disagree by " + std::to_string(gap));

  PointResult out;
  ResultRow& r = out.row;
  r.d = distance(cfg.a.center, cfg.b.center);
  r.dt = cfg.b.t0 - cfg.a.t0;
  r.e_ab = e_ab;
  r.w_bb = st.data().w(f_b, f_b).real();
  r.nu_b = nu_b;
  r.channel = ch;
  r.p_exc = excitation_probability(ch, rho_b);
  r.causal = p.causal;
  r.causal_approximate = p.causal_approximate;
  r.quadrature_error = p.quadrature_error;

  out.channel_json = channel_to_json(ch, nu_b, e_ab);
  out.channel_json["W_BB"] = r.w_bb;
  out.channel_json["alpha"] = al;
  out.channel_json["p_exc"] = r.p_exc;
  out.channel_json["causal_relation"] = to_string(p.causal);
  out.channel_json["causal_approximate"] = p.causal_approximate;
  out.channel_json["quadrature_error"] = p.quadrature_error;
  out.channel_json["backend"] = to_string(cfg.field.backend);
  out.channel_json["field_state"] = to_string(cfg.field.state);
  if (p.causal_approximate) out.channel_json["warning"] = approximate_warning;
  return out;
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  const std::vector<double> values = cfg.sweep.values();
  std::vector<ResultRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      ResultRow& row = rows[i];
      try {
        row = run_point(at_axis_value(cfg, values[i])).row;
      } catch (const std::exception& e) {
        row = ResultRow{};
        row.d = row.dt = row.e_ab = row.w_bb = row.nu_b = row.p_exc = nan;
        row.quadrature_error = nan;
        row.channel.a = row.channel.b = row.channel.c_plus = row.channel.c_minus = Complex(nan, nan);
        row.error = e.what();
        row.exit_code = exit_code_for(e);
      }
      row.axis_value = values[i];
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string csv_header() {
  return "axis_value,d,dt,E_AB,W_BB,nu_B,a_re,a_im,b_re,b_im,c_plus_re,c_plus_im,c_minus_re,"
         "c_minus_im,p_exc,causal_flag,causal_approximate,quadrature_error,error";
}

std::string csv_row(const ResultRow& r) {
  std::string s;
  for (double v : {r.axis_value, r.d, r.dt, r.e_ab, r.w_bb, r.nu_b, r.channel.a.real(),
                   r.channel.a.imag(), r.channel.b.real(), r.channel.b.imag(),
                   r.channel.c_plus.real(), r.channel.c_plus.imag(), r.channel.c_minus.real(),
                   r.channel.c_minus.imag(), r.p_exc})
    s += fmt(v) + ",";
  s += (r.error.empty() ? to_string(r.causal) : std::string("error")) + ",";
  s += std::string(r.causal_approximate ? "1" : "0") + ",";
  s += fmt(r.quadrature_error) + ",";
  s += csv_quote(r.error);
  return s;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << csv_header() << '\n';
  for (const auto& r : rows) out << csv_row(r) << '\n';
}

nlohmann::json run_measurement_scenario(const ExperimentConfig& cfg) {
  if (!cfg.measurement.measure_alice)
    throw ConfigError("measurement scenario needs measurement.measure_alice = true");
  const Pipeline p = build_pipeline(cfg);
  const QuasifreeState& st = p.state;
  const Monopole mu_a = monopole(cfg.a);
  const Monopole mu_b = monopole(cfg.b);
  const QubitState rho_b = QubitState::from_init(cfg.b.init);
  const double al = alpha(QubitState::from_init(cfg.a.init), mu_a);
  const double nu_b = nu_factor(st, f_b);
  const double e_ab = st.data().e(f_a, f_b);

  bool in_future = p.causal == CausalRelation::future;
  if (cfg.measurement.bob_in_future == FutureFlag::yes) in_future = true;
  if (cfg.measurement.bob_in_future == FutureFlag::no) in_future = false;

  const auto [pg, pe] = outcome_probability(st, f_a);
  const QubitChannel unmeasured = general_channel(gamma_tensor(st, f_a, f_b), al, mu_b);

  nlohmann::json j;
  j["probabilities"] = {{"ground", pg.probability}, {"excited", pe.probability}};
  j["probability_sum"] = pg.probability + pe.probability;
  j["causal_relation"] = to_string(p.causal);
  j["causal_approximate"] = p.causal_approximate;
  if (p.causal_approximate) j["warning"] = approximate_warning;
  j["bob_in_future"] = in_future;
  j["E_AB"] = e_ab;
  j["nu_B"] = nu_b;
  j["unmeasured_channel"] = channel_to_json(unmeasured, nu_b, e_ab);

  const MixtureCheck mix = mixture_check(st, f_a, f_b, mu_b);
  j["mixture_residual"] = mix.residual;

  switch (cfg.measurement.outcome) {
    case OutcomeMode::ground:
    case OutcomeMode::excited: {
      UpdatedState ust;
      ust.base = &st;
      ust.conditioned_on = f_a;
      ust.outcome = cfg.measurement.outcome == OutcomeMode::ground ? Outcome::ground
                                                                   : Outcome::excited;
      ust.in_causal_future = in_future;
      QubitChannel tilde;
      try {
        tilde = tilde_channel(ust, f_b, mu_b);
      } catch (const NullEventError& e) {
        throw ConfigError(std::string("measurement: ") + e.what());
      }
      j["outcome"] = to_string(ust.outcome);
      j["tilde_channel"] = channel_to_json(tilde, nu_b, e_ab);
      j["tilde_cptp_min_eigenvalue"] = cptp_report(tilde.choi()).min_eigenvalue;
      j["coefficient_deltas"] = deltas(tilde, unmeasured);
      j["channel_distance"] = coefficient_distance(tilde, unmeasured);
      j["channel_changed"] = coefficient_distance(tilde, unmeasured) > 1e-12;
      j["p_exc_tilde"] = excitation_probability(tilde, rho_b);
      break;
    }
    case OutcomeMode::average:
      j["outcome"] = "average";
      j["averaged_channel"] = channel_to_json(mix.averaged, nu_b, e_ab);
      j["averaged_vs_unmeasured"] = coefficient_distance(mix.averaged, unmeasured);
      break;
  }
  return j;
}

ModeCouplings oracle_modes(const ExperimentConfig& cfg) {
  const OracleConfig& o = cfg.oracle;
  ModeCouplings mc;
  mc.labels = {f_a.id, f_b.id};
  switch (o.source) {
    case OracleSource::box: {
      const DetectorSpec dets[2] = {cfg.a, cfg.b};
      return box_modes(cfg.field.box_length, o.n_max, cfg.field.mass, dets, mc.labels);
    }
    case OracleSource::explicit_modes: {
      const auto n = static_cast<Eigen::Index>(o.omega.size());
      mc.g.resize(2, n);
      mc.omega.resize(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        mc.g(0, k) = o.g_a[static_cast<std::size_t>(k)];
        mc.g(1, k) = o.g_b[static_cast<std::size_t>(k)];
        mc.omega(k) = o.omega[static_cast<std::size_t>(k)];
      }
      break;
    }
    case OracleSource::random: {
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      mc.g.resize(2, o.random_modes);
      mc.omega.resize(o.random_modes);
      for (int k = 0; k < o.random_modes; ++k) {
        for (int j = 0; j < 2; ++j)
          mc.g(j, k) = std::polar(o.max_coupling * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
        mc.omega(k) = 0.5 + 2.5 * u(rng);
      }
      break;
    }
  }
  mc.validate();
  return mc;
}

nlohmann::json run_oracle_check(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModeCouplings mc = oracle_modes(cfg);
  const StateKind kind = cfg.field.state;
  const QuasifreeState st =
      kind == StateKind::thermal ? thermal_from_modes(mc, cfg.field.beta) : vacuum_from_modes(mc);
  const QubitState rho_a = QubitState::from_init(cfg.a.init);
  const Monopole mu_a = monopole(cfg.a);
  const Monopole mu_b = monopole(cfg.b);
  const QubitChannel ch = general_channel(gamma_tensor(st, f_a, f_b), alpha(rho_a, mu_a), mu_b);
  const Matrix4c analytic = ch.choi();

  OracleOptions oo;
  oo.tolerance = cfg.tolerances.oracle;
  oo.start_cutoff = cfg.oracle.start_cutoff;
  oo.max_cutoff = cfg.oracle.max_cutoff;
  oo.max_modes = cfg.oracle.max_modes;
  const OracleReport rep = oracle_channel(mc, kind, cfg.field.beta, rho_a, mu_a, mu_b, oo);
  const double diff = (rep.choi - analytic).cwiseAbs().maxCoeff();

  nlohmann::json j;
  j["oracle"] = rep.to_json();
  j["oracle_cptp"] = {{"min_eigenvalue", cptp_report(rep.choi).min_eigenvalue},
                      {"tp_residual", cptp_report(rep.choi).tp_residual}};
  j["analytic_choi"] = choi_json(analytic);
  j["modes"] = mc.mode_count();
  j["field_state"] = to_string(kind);
  j["max_difference"] = diff;
  j["tolerance"] = cfg.tolerances.compare;
  j["agrees"] = diff <= cfg.tolerances.compare;
  return j;
}

}  // namespace fermi
