// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fermi/channel.hpp"
#include "fermi/config.hpp"
#include "fermi/experiment.hpp"
#include "fermi/fock_oracle.hpp"
#include "fermi/geometry.hpp"
#include "fermi/measurement.hpp"
#include "fermi/quasifree.hpp"
#include "fermi/weyl.hpp"

using namespace fermi;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

DetectorSpec bump(Vec3 c, double t, double lam = 1.0) {
  DetectorSpec d;
  d.center = c;
  d.t0 = t;
  d.lam = lam;
  d.profile = Profile::bump;
  return d;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

CombinedSmearing f(int id, int n = 1) { return CombinedSmearing::single({id}, n); }

Verdict causality() {
  ExperimentConfig base;
  base.a = bump({0, 0, 0}, 0.0);
  base.b = bump({4, 0, 0}, 0.0);
  Verdict v;
  QubitChannel ref;
  bool first = true;
  double worst_coeff = 0.0, worst_p = 0.0;
  for (double lam : {0.0, 0.1, 0.5, 1.0})
    for (double gap : {0.5, 2.0})
      for (QubitInit init : {QubitInit::ground(), QubitInit::excited(), QubitInit::plus()}) {
        ExperimentConfig cfg = base;
        cfg.a.lam = lam;
        cfg.a.gap = gap;
        cfg.a.init = init;
        const auto row = run_point(cfg).row;
        if (first) {
          ref = row.channel;
          first = false;
        }
        worst_coeff = std::max(worst_coeff, coefficient_distance(row.channel, ref));
        worst_p = std::max(worst_p, std::abs(row.p_exc - 0.5 * (1 - row.nu_b)));
      }
  v.pass = worst_coeff <= 1e-12 && worst_p <= 1e-10;
  v.detail = "24 runs, max coefficient spread " + fmt("%.2e", worst_coeff) +
             ", max |p_exc - (1-nu_B)/2| " + fmt("%.2e", worst_p);
  return v;
}

Verdict algebra() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI), u(0.05, 1.5), r(-0.9, 0.9);
  std::uniform_int_distribution<int> coef(-3, 3), kind(0, 1);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const double e = angle(rng);
    const double waa = u(rng) + std::abs(e), wbb = u(rng) + std::abs(e);
    Eigen::MatrixXcd w(2, 2);
    const Complex wab(r(rng) * std::sqrt(waa * wbb), 0.5 * e);
    w << waa, wab, std::conj(wab), wbb;
    const auto d = BilinearData::from_wightman({0, 1}, w);
    const int n1 = coef(rng), n2 = coef(rng), n3 = coef(rng), n4 = coef(rng);
    const auto h1 = f(0, n1) + f(1, n2);
    const auto h2 = f(0, n3) + f(1, n4);
    const Trig k1 = kind(rng) ? Trig::sin : Trig::cos;
    const Trig k2 = kind(rng) ? Trig::sin : Trig::cos;
    if (!(reduce_product(k1, h1, k2, h2, d) == trig_to_weyl({{k1, h1}, {k2, h2}}, d)))
      ++mismatches;
  }

  // E = 0: the twisted identities collapse to the classical ones.
  Eigen::MatrixXcd w(2, 2);
  w << 0.4, 0.2, 0.2, 0.6;
  const auto d0 = BilinearData::from_wightman({0, 1}, w);
  const auto p = f(0) + f(1), m = f(0) - f(1);
  double worst = 0.0;
  auto dev = [&](const WeylCombination& x, const CombinedSmearing& h, Complex c) {
    worst = std::max(worst, std::abs(x.coefficient(h) - c));
  };
  // 2 cos a cos b = cos(a+b) + cos(a-b), 2 sin a sin b = cos(a-b) - cos(a+b)
  const auto cc = reduce_product(Trig::cos, f(0), Trig::cos, f(1), d0);
  dev(cc, p, 0.25), dev(cc, -p, 0.25), dev(cc, m, 0.25), dev(cc, -m, 0.25);
  const auto ss = reduce_product(Trig::sin, f(0), Trig::sin, f(1), d0);
  dev(ss, p, -0.25), dev(ss, -p, -0.25), dev(ss, m, 0.25), dev(ss, -m, 0.25);
  // 2 sin a cos b = sin(a+b) + sin(a-b), 2 cos a sin b = sin(a+b) - sin(a-b)
  const auto sc = reduce_product(Trig::sin, f(0), Trig::cos, f(1), d0);
  dev(sc, p, Complex(0, -0.25)), dev(sc, m, Complex(0, -0.25));
  const auto cs = reduce_product(Trig::cos, f(0), Trig::sin, f(1), d0);
  dev(cs, p, Complex(0, -0.25)), dev(cs, m, Complex(0, 0.25));

  Verdict v;
  v.pass = mismatches == 0 && worst <= 1e-14;
  v.detail = std::to_string(mismatches) + "/1000 reductions differ from the full expansion; " +
             "E=0 classical identity deviation " + fmt("%.1e", worst);
  return v;
}

Verdict closed_form() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> nu_d(0.01, 1.0), e_d(-M_PI, M_PI), al_d(-1, 1),
      extra(0.0, 1.0), tau(0.0, 3.0);
  double worst = 0.0, min_eig = 1.0, tp = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double nu = nu_d(rng), e = e_d(rng), al = al_d(rng);
    const double wbb = -0.5 * std::log(nu);
    // W_AA large enough that |E| <= 2 sqrt(W_AA W_BB).
    const double waa = e * e / (4 * std::max(wbb, 1e-300)) + extra(rng) + 1e-3;
    Eigen::MatrixXcd w(2, 2);
    const Complex wab(0.3 * extra(rng) * std::sqrt(waa * wbb), 0.5 * e);
    w << waa, wab, std::conj(wab), wbb;
    const QuasifreeState st(BilinearData::from_wightman({0, 1}, w));
    const Monopole mu{1.0, tau(rng)};
    const auto closed = quasifree_channel(nu, e, mu, al);
    const auto general = general_channel(gamma_tensor(st, {0}, {1}), al, mu);
    worst = std::max(worst, coefficient_distance(closed, general));
    for (const auto* ch : {&closed, &general}) {
      const auto rep = choi_and_cptp(*ch).second;
      min_eig = std::min(min_eig, rep.min_eigenvalue);
      tp = std::max(tp, rep.tp_residual);
    }
  }
  Verdict v;
  v.pass = worst <= 1e-12 && min_eig >= -1e-10 && tp <= 1e-12;
  v.detail = "200 (nu_B, E_AB, alpha) triples, max coefficient difference " + fmt("%.2e", worst) +
             ", min Choi eigenvalue " + fmt("%.2e", min_eig) + ", trace residual " +
             fmt("%.1e", tp);
  return v;
}

Verdict oracle() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  OracleOptions opts;
  opts.max_cutoff = 32;
  opts.tolerance = 1e-7;
  double worst = 0.0, slowest = 0.0;
  int max_cut = 0, failures = 0, instances = 0;
  std::string failure;
  for (int inst = 0; inst < 4; ++inst) {
    ModeCouplings mc;
    mc.labels = {0, 1};
    mc.g.resize(2, 2);
    mc.omega.resize(2);
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 2; ++j) mc.g(j, k) = std::polar(0.8 * std::sqrt(u(rng)), 2 * M_PI * u(rng));
      mc.omega(k) = 0.5 + 1.5 * u(rng);
    }
    const auto rho_a = QubitState::bloch(M_PI * u(rng), 2 * M_PI * u(rng));
    const Monopole mu_a{1.0, u(rng)}, mu_b{1.0, 1.0 + u(rng)};
    const double omega_min = mc.omega.minCoeff();
    struct Case {
      StateKind kind;
      double beta;
    };
    // beta * omega reaches the stated value on the softest mode.
    for (Case c : {Case{StateKind::vacuum, 0.0}, Case{StateKind::thermal, 1.0 / omega_min},
                   Case{StateKind::thermal, 3.0 / omega_min}}) {
      ++instances;
      const QuasifreeState st =
          c.kind == StateKind::vacuum ? vacuum_from_modes(mc) : thermal_from_modes(mc, c.beta);
      const Matrix4c analytic =
          general_channel(gamma_tensor(st, {0}, {1}), alpha(rho_a, mu_a), mu_b).choi();
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const auto rep = oracle_channel(mc, c.kind, c.beta, rho_a, mu_a, mu_b, opts);
        worst = std::max(worst, (rep.choi - analytic).cwiseAbs().maxCoeff());
        max_cut = std::max(max_cut, rep.cutoff_used);
      } catch (const std::exception& e) {
        ++failures;
        failure = e.what();
      }
      slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
  }
  Verdict v;
  v.pass = failures == 0 && worst <= 1e-6 && slowest < 60.0;
  v.detail = std::to_string(instances) + " instances (vacuum, beta*omega = 1, 3), max |J_oracle - J| " +
             fmt("%.2e", worst) + ", largest cutoff " + std::to_string(max_cut) + ", slowest " +
             fmt("%.2f s", slowest);
  if (failures) v.detail += "; " + std::to_string(failures) + " did not converge: " + failure;
  return v;
}

Verdict geometry() {
  Verdict v;
  // (a) Im W = E/2 on random Gaussian pairs, W through the radial quadrature route.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-5, 5), width(0.5, 2.0), lam(0.2, 2.0);
  GeometryOptions radial;
  radial.force_radial = true;
  double worst_a = 0.0, worst_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    DetectorSpec a, b;
    a.center = {pos(rng), pos(rng), pos(rng)};
    b.center = {pos(rng), pos(rng), pos(rng)};
    a.t0 = pos(rng);
    b.t0 = pos(rng);
    a.sigma = width(rng);
    b.sigma = width(rng);
    a.lam = lam(rng);
    b.lam = lam(rng);
    double err_w = 0.0, err_e = 0.0;
    const Complex w = smeared_wightman(a, b, radial, &err_w);
    const double e = causal_propagator(a, b, {}, &err_e);
    worst_a = std::max(worst_a, std::abs(w.imag() - 0.5 * e));
    worst_err = std::max(worst_err, err_w + err_e);
  }
  const bool pass_a = worst_a <= 1e-10 && worst_err <= 1e-10;

  // (b) bump pair at d = 10 sigma, scanned over the time gap.
  const double d = 10.0, step = 0.1;
  const auto a = bump({0, 0, 0}, 0.0);
  std::vector<double> ts, es;
  for (int i = 0; i <= 200; ++i) {
    const double t = i * step;
    ts.push_back(t);
    es.push_back(std::abs(causal_propagator(a, bump({d, 0, 0}, t))));
  }
  std::size_t imax = 0;
  for (std::size_t i = 1; i < es.size(); ++i)
    if (es[i] > es[imax]) imax = i;
  const double peak = es[imax];
  double tail = 0.0;
  for (std::size_t i = 0; i < es.size(); ++i)
    if (std::abs(ts[i] - d) > 5.0) tail = std::max(tail, es[i]);
  const bool pass_b = std::abs(ts[imax] - d) <= step + 1e-12 && tail < 1e-9 * peak;

  v.pass = pass_a && pass_b;
  v.detail = "(a) 50 Gaussian pairs, max |Im W - E/2| " + fmt("%.1e", worst_a) +
             ", max quadrature error " + fmt("%.1e", worst_err) + "; (b) bump peak at dt = " +
             fmt("%.2f", ts[imax]) + ", off-cone max/peak " + fmt("%.1e", tail / peak);
  return v;
}

Verdict measurement() {
  // Spacelike pair: averaging over Alice's outcomes reproduces Bob's channel.
  ExperimentConfig sp;
  sp.a = bump({0, 0, 0}, 0.0);
  sp.a.init = QubitInit::excited();
  sp.b = bump({4, 0, 0}, 0.0);
  sp.measurement.measure_alice = true;
  sp.measurement.outcome = OutcomeMode::average;
  const auto js = run_measurement_scenario(sp);
  const double residual = js["mixture_residual"].get<double>();

  // Reference config: Bob inside Alice's future, deep enough that E_AB = 0.
  ExperimentConfig ref;
  ref.a = bump({0, 0, 0}, 0.0, 0.3);
  ref.a.init = QubitInit::excited();
  ref.b = bump({0, 0, 0}, 2.05, 2.2);
  ref.measurement.measure_alice = true;
  ref.measurement.outcome = OutcomeMode::ground;
  const auto jr = run_measurement_scenario(ref);
  const double dist = jr["channel_distance"].get<double>();
  const double e_ab = jr["E_AB"].get<double>();
  const double psum = std::max(std::abs(js["probability_sum"].get<double>() - 1.0),
                               std::abs(jr["probability_sum"].get<double>() - 1.0));
  ref.measurement.outcome = OutcomeMode::excited;
  const auto je = run_measurement_scenario(ref);
  const double min_eig = std::min(jr["tilde_cptp_min_eigenvalue"].get<double>(),
                                  je["tilde_cptp_min_eigenvalue"].get<double>());

  Verdict v;
  v.pass = residual < 1e-12 && e_ab == 0.0 && jr["causal_relation"] == "future" && dist > 1e-3 &&
           min_eig >= -1e-10 && psum <= 1e-12;
  v.detail = "spacelike mixture residual " + fmt("%.1e", residual) + "; reference E_AB = " +
             fmt("%g", e_ab) + ", |Phi~ - Phi| = " + fmt("%.3e", dist) +
             ", min Choi eigenvalue " + fmt("%.1e", min_eig) + ", |sum Pr - 1| " + fmt("%.1e", psum);
  return v;
}

Verdict box() {
  const double length = 40.0;
  DetectorSpec a;
  a.center = {20, 20, 20};
  a.profile = Profile::gaussian;
  const std::vector<DetectorSpec> dets{a};
  const auto t0 = std::chrono::steady_clock::now();
  const auto st = vacuum_from_modes(box_modes(length, 30, 0.0, dets));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double box_w = st.data().w({0}, {0}).real();
  const double cont = smeared_wightman(a, a).real();
  const double rel = std::abs(box_w - cont) / cont;
  Verdict v;
  v.pass = rel < 0.01;
  v.detail = "L = 40 sigma, n_max = 30: W_AA relative error " + fmt("%.2e", rel) + " (" +
             fmt("%.1f s", secs) + ")";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {"1 causality", causality},           {"2 algebra", algebra},
      {"3 closed form", closed_form},       {"4 oracle", oracle},
      {"5 geometry", geometry},             {"6 measurement", measurement},
      {"7 box convergence", box},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (!v.pass) ++failed;
    std::printf("%s  %-18s %s\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
