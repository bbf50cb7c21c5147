#include "fermi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_dawson.h>
#include <gsl/gsl_sf_expint.h>

#include "fermi/errors.hpp"

namespace fermi {

namespace {

using std::numbers::pi;

constexpr double gaussian_truncation = 12.0;  // radial cut, in sigma, for the radial route
constexpr double gaussian_effective = 5.0;

struct GslQuiet {
  GslQuiet() { gsl_set_error_handler_off(); }
};
const GslQuiet gsl_quiet;

double bump_shape(double x) {
  if (x >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

// int_0^1 x^2 exp(-1/(1-x^2)) dx
double bump_norm() {
  static const double c = [] {
    QuadratureOptions q;
    q.abs_tol = 0.0;
    q.rel_tol = 1e-14;
    return integrate([](double x) { return x * x * bump_shape(x); }, 0.0, 1.0, q).value;
  }();
  return c;
}

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

double distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

// Radial profile with its truncation radius and H(u) = int_0^u r F(r) dr.
struct Radial {
  Profile profile;
  double sigma;
  double radius;

  double density(double r) const { return profile_density(profile, sigma, r); }

  double cumulative(double u) const {
    if (u <= 0.0) return 0.0;
    if (profile == Profile::gaussian) {
      const double s2 = sigma * sigma;
      return std::pow(2.0 * pi * s2, -1.5) * s2 * -std::expm1(-u * u / (2.0 * s2));
    }
    // x e^{-1/(1-x^2)} integrates to (E2(1) - E2(Z)/Z)/2 with Z = 1/(1-x^2).
    const double x = u / sigma;
    static const double e2_one = gsl_sf_expint_En(2, 1.0);
    double inner = 0.5 * e2_one;
    if (x < 1.0) {
      const double z = 1.0 / (1.0 - x * x);
      inner = 0.5 * (e2_one - gsl_sf_expint_En(2, z) / z);
    }
    return inner / (4.0 * pi * sigma * bump_norm());
  }
};

Radial radial_of(const DetectorSpec& d) {
  const double r = d.profile == Profile::bump ? d.sigma : gaussian_truncation * d.sigma;
  return {d.profile, d.sigma, r};
}

// Order a pair so that every symmetric quantity is computed identically for (a, b) and (b, a).
bool canonical_first(const DetectorSpec& a, const DetectorSpec& b) {
  if (a.profile != b.profile) return a.profile < b.profile;
  return a.sigma <= b.sigma;
}

struct Convolution {
  Radial a;
  Radial b;
  QuadratureOptions inner;
  double peak = 1.0;  // G(0), the maximum of G
  mutable double worst_error = 0.0;  // largest inner error estimate relative to the peak

  double reach() const { return a.radius + b.radius; }

  // G(rho): overlap of the two centred profiles at separation rho.
  double operator()(double rho) const {
    if (rho >= reach()) return 0.0;
    const double small = 1e-4 * std::min(a.sigma, b.sigma);
    if (rho < small) return at_origin();
    const double lo = std::max(0.0, rho - b.radius);
    const double hi = std::min(a.radius, rho + b.radius);
    if (hi <= lo) return 0.0;
    auto f = [&](double r) {
      return r * a.density(r) * (b.cumulative(rho + r) - b.cumulative(std::abs(rho - r)));
    };
    return 2.0 * pi / rho * run(f, lo, hi, 2.0 * pi / rho);
  }

  double at_origin() const {
    auto f = [&](double r) { return r * r * a.density(r) * b.density(r); };
    return 4.0 * pi * run(f, 0.0, std::min(a.radius, b.radius), 4.0 * pi);
  }

  double run(const std::function<double(double)>& f, double lo, double hi, double scale) const {
    const auto res = integrate(f, lo, hi, inner);
    worst_error = std::max(worst_error, scale * res.error / peak);
    return res.value;
  }

  // Bound on the integral error from inexact G, for an integral of G against a weight.
  double propagated(double value) const { return worst_error * std::abs(value); }
};

Convolution make_convolution(const DetectorSpec& a, const DetectorSpec& b) {
  const bool keep = canonical_first(a, b);
  QuadratureOptions inner;
  inner.abs_tol = 0.0;
  inner.rel_tol = 1e-13;
  Convolution g = keep ? Convolution{radial_of(a), radial_of(b), inner}
                       : Convolution{radial_of(b), radial_of(a), inner};
  g.peak = g.at_origin();
  g.worst_error = 0.0;
  // Tails far below the peak need no relative accuracy.
  g.inner.abs_tol = 1e-16 * g.peak;
  return g;
}

std::vector<double> breakpoints(double lo, double hi, std::initializer_list<double> interior) {
  std::vector<double> pts{lo, hi};
  for (double p : interior)
    if (p > lo && p < hi) pts.push_back(p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Quadrature options whose absolute tolerance applies after multiplying by `scale`.
QuadratureOptions scaled_options(const GeometryOptions& opts, double scale) {
  QuadratureOptions q = opts.quad;
  if (scale != 0.0) q.abs_tol /= std::abs(scale);
  return q;
}

// Error estimate of scale * integral; throws if above tolerance.
double check(const QuadratureResult& r, double extra, double scale, const GeometryOptions& opts,
             const char* what, double* error) {
  const double est = std::abs(scale) * (r.error + extra);
  const double value = scale * r.value;
  if (error) *error = est;
  if (!std::isfinite(value) || est > opts.tolerance * std::max(1.0, std::abs(value)))
    throw AccuracyError(std::string("geometry quadrature did not converge: ") + what, est);
  return value;
}

// --- both Gaussian: closed forms ------------------------------------------

double gaussian_re_w(double pref, double s, double d, double delta) {
  const double u = std::sqrt(2.0) * s;
  const double c = std::sqrt(2.0) / s;
  if (d >= 1e-3 * s) {
    auto I = [&](double x) { return c * gsl_sf_dawson(x / u); };
    return pref / (2.0 * d) * (I(d + delta) + I(d - delta));
  }
  // I(delta + d) - I(delta - d) expanded in d; Daw^(n+1) = -2n Daw^(n-1) - 2y Daw^(n).
  const double y = delta / u;
  const double d0 = gsl_sf_dawson(y);
  const double d1 = 1.0 - 2.0 * y * d0;
  const double d2 = -2.0 * d0 - 2.0 * y * d1;
  const double d3 = -4.0 * d1 - 2.0 * y * d2;
  const double d4 = -6.0 * d2 - 2.0 * y * d3;
  const double d5 = -8.0 * d3 - 2.0 * y * d4;
  const double i1 = c * d1 / u;
  const double i3 = c * d3 / (u * u * u);
  const double i5 = c * d5 / (u * u * u * u * u);
  return pref * (i1 + d * d / 6.0 * i3 + d * d * d * d / 120.0 * i5);
}

// Magnitude of E for t_a > t_b; E itself is -sgn(t_a - t_b) times this.
double gaussian_e_magnitude(double coupling, double s, double d, double t) {
  const double s2 = s * s;
  const double base = coupling * std::pow(2.0 * pi, -1.5) / (2.0 * s);
  const double gauss = std::exp(-(t - d) * (t - d) / (2.0 * s2));
  if (d == 0.0) return base * gauss * 2.0 * t / s2;
  return base / d * gauss * -std::expm1(-2.0 * t * d / s2);
}

// --- radial position-space route -------------------------------------------

double radial_e_magnitude(const Convolution& g, double coupling, double d, double t,
                          const GeometryOptions& opts, double* error) {
  if (t == 0.0) {
    if (error) *error = 0.0;
    return 0.0;
  }
  if (d <= 1e-12 * g.reach()) {
    if (error) *error = 0.0;
    return coupling * t * g(t);
  }
  const double lo = std::abs(t - d);
  const double hi = std::min(t + d, g.reach());
  if (lo >= hi) {
    if (error) *error = 0.0;
    return 0.0;
  }
  const double scale = coupling / (2.0 * d);
  const auto res = integrate([&](double rho) { return rho * g(rho); }, lo, hi,
                             scaled_options(opts, scale));
  return check(res, g.propagated(res.value), scale, opts, "causal propagator", error);
}

double radial_re_w(const Convolution& g, double coupling, double d, double t,
                   const GeometryOptions& opts, double* error) {
  const double reach = g.reach();
  QuadratureResult res;
  double tail = 0.0;
  if (d > 1e-12 * reach) {
    auto f = [&](double rho) {
      const double a = (rho + d - t) * (rho + d + t);
      const double b = (rho - d - t) * (rho - d + t);
      if (a == 0.0 || b == 0.0) return 0.0;
      const double ratio_log = ((a > 0.0) == (b > 0.0)) ? std::log1p(4.0 * rho * d / b)
                                                         : std::log(std::abs(a) / std::abs(b));
      return rho * g(rho) * ratio_log;
    };
    const double scale = coupling / (4.0 * pi * d);
    const auto pts = breakpoints(0.0, reach, {t - d, d - t, d + t});
    res = integrate(f, pts, scaled_options(opts, scale));
    return check(res, g.propagated(res.value), scale, opts, "wightman function", error);
  }
  const double scale = coupling / pi;
  const QuadratureOptions q = scaled_options(opts, scale);
  if (t == 0.0) {
    res = integrate([&](double rho) { return g(rho); }, 0.0, reach, q);
  } else if (t >= reach) {
    res = integrate([&](double rho) { return rho * rho * g(rho) / (rho * rho - t * t); }, 0.0,
                    reach, q);
  } else {
    // P int rho^2 G/(rho^2 - t^2) with the pole at t subtracted.
    const double gt = g(t);
    auto f = [&](double rho) {
      return g(rho) + 0.5 * t * ((g(rho) - gt) / (rho - t) - g(rho) / (rho + t));
    };
    const double pts[3] = {0.0, t, reach};
    res = integrate(f, std::span<const double>(pts, 3), q);
    tail = 0.5 * t * gt * std::log((reach - t) / t);
  }
  return check(res, g.propagated(res.value), scale, opts, "wightman function", error) +
         scale * tail;
}

bool use_radial(const DetectorSpec& a, const DetectorSpec& b, const GeometryOptions& opts) {
  return opts.force_radial || a.profile != Profile::gaussian || b.profile != Profile::gaussian;
}

double e_magnitude(const DetectorSpec& a, const DetectorSpec& b, const GeometryOptions& opts,
                   double* error) {
  const double coupling = a.lam * b.lam * a.eta * b.eta;
  const double d = distance(a.center, b.center);
  const double t = std::abs(a.t0 - b.t0);
  if (!use_radial(a, b, opts)) {
    if (error) *error = 0.0;
    if (t == 0.0) return 0.0;
    const double s = std::sqrt(a.sigma * a.sigma + b.sigma * b.sigma);
    return gaussian_e_magnitude(coupling, s, d, t);
  }
  return radial_e_magnitude(make_convolution(a, b), coupling, d, t, opts, error);
}

}  // namespace

void DetectorSpec::validate() const {
  for (double c : center)
    if (!std::isfinite(c)) throw DomainError("detector: non-finite centre");
  if (!std::isfinite(t0)) throw DomainError("detector: non-finite switching time");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("detector: sigma must be > 0");
  if (!std::isfinite(lam)) throw DomainError("detector: non-finite coupling");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("detector: eta must be > 0");
  if (!std::isfinite(gap)) throw DomainError("detector: non-finite gap");
  if (init.kind == QubitInit::Kind::bloch && (!std::isfinite(init.theta) || !std::isfinite(init.phi)))
    throw DomainError("detector: non-finite Bloch angles");
}

double DetectorSpec::support_radius() const {
  return profile == Profile::bump ? sigma : gaussian_effective * sigma;
}

std::string to_string(Profile p) { return p == Profile::bump ? "bump" : "gaussian"; }

double profile_density(Profile p, double sigma, double r) {
  if (p == Profile::gaussian) {
    const double s2 = sigma * sigma;
    return std::pow(2.0 * pi * s2, -1.5) * std::exp(-r * r / (2.0 * s2));
  }
  return bump_shape(r / sigma) / (4.0 * pi * sigma * sigma * sigma * bump_norm());
}

double profile_fourier(Profile p, double sigma, double k) {
  if (p == Profile::gaussian) return std::exp(-0.5 * k * k * sigma * sigma);
  const double ks = k * sigma;
  if (ks == 0.0) return 1.0;
  QuadratureOptions q;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-13;
  auto f = [&](double x) {
    const double kx = ks * x;
    const double sinc = kx < 1e-8 ? 1.0 - kx * kx / 6.0 : std::sin(kx) / kx;
    return x * x * bump_shape(x) * sinc;
  };
  // Roughly one breakpoint per half period keeps the oscillation resolved.
  std::vector<double> pts{0.0};
  const int pieces = std::max(1, static_cast<int>(std::ceil(ks / pi)));
  for (int i = 1; i <= pieces; ++i) pts.push_back(static_cast<double>(i) / pieces);
  return integrate(f, pts, q).value / bump_norm();
}

BilinearData GeometryResult::to_bilinear(SmearingIndex a, SmearingIndex b) const {
  Eigen::MatrixXcd w(2, 2);
  w << w_aa, w_ab, std::conj(w_ab), w_bb;
  Eigen::MatrixXd e(2, 2);
  e << 0.0, e_ab, -e_ab, 0.0;
  return BilinearData({a.id, b.id}, std::move(w), std::move(e));
}

double causal_propagator(const DetectorSpec& a, const DetectorSpec& b,
                         const GeometryOptions& opts, double* error) {
  a.validate();
  b.validate();
  // Adding 0.0 turns an exact -0 into +0.
  return -sgn(a.t0 - b.t0) * e_magnitude(a, b, opts, error) + 0.0;
}

Complex smeared_wightman(const DetectorSpec& a, const DetectorSpec& b,
                         const GeometryOptions& opts, double* error) {
  a.validate();
  b.validate();
  const double coupling = a.lam * b.lam * a.eta * b.eta;
  const double d = distance(a.center, b.center);
  const double t = std::abs(a.t0 - b.t0);
  double err_re = 0.0;
  double err_e = 0.0;
  double re = 0.0;
  if (!use_radial(a, b, opts)) {
    const double s = std::sqrt(a.sigma * a.sigma + b.sigma * b.sigma);
    // Re W is even in the time difference; feed |dt| so (a, b) and (b, a) agree bitwise.
    re = gaussian_re_w(coupling / (4.0 * pi * pi), s, d, t);
  } else {
    re = radial_re_w(make_convolution(a, b), coupling, d, t, opts, &err_re);
  }
  const double e = -sgn(a.t0 - b.t0) * e_magnitude(a, b, opts, &err_e);
  if (error) *error = err_re + 0.5 * err_e;
  return {re, 0.5 * e};
}

GeometryResult geometry_result(const DetectorSpec& a, const DetectorSpec& b,
                               const GeometryOptions& opts) {
  GeometryResult r;
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  r.w_ab = smeared_wightman(a, b, opts, &e1);
  r.w_aa = smeared_wightman(a, a, opts, &e2);
  r.w_bb = smeared_wightman(b, b, opts, &e3);
  r.e_ab = 2.0 * r.w_ab.imag() + 0.0;
  r.quadrature_error = e1 + e2 + e3;
  return r;
}

std::string to_string(CausalRelation r) {
  switch (r) {
    case CausalRelation::spacelike:
      return "spacelike";
    case CausalRelation::future:
      return "future";
    case CausalRelation::past:
      return "past";
    case CausalRelation::partial:
      return "partial";
  }
  return "unknown";
}

CausalRelation causal_relation(const DetectorSpec& a, const DetectorSpec& b) {
  const double d = distance(a.center, b.center);
  const double ra = a.support_radius();
  const double rb = b.support_radius();
  const double dt = b.t0 - a.t0;
  if (std::abs(dt) < d - ra - rb) return CausalRelation::spacelike;
  // Every point of B must be reachable from some point of A: the farthest
  // point of B sits d + rb from A's centre, i.e. d + rb - ra from A's ball.
  if (dt > 0.0 && dt >= std::max(0.0, d + rb - ra)) return CausalRelation::future;
  if (dt < 0.0 && -dt >= std::max(0.0, d + ra - rb)) return CausalRelation::past;
  return CausalRelation::partial;
}

bool causal_relation_is_approximate(const DetectorSpec& a, const DetectorSpec& b) {
  return a.profile == Profile::gaussian || b.profile == Profile::gaussian;
}

}  // namespace fermi
