#include "fermi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fermi {

namespace {

struct Segment {
  double a;
  double b;
  double value;
  double error;
  friend bool operator<(const Segment& x, const Segment& y) { return x.error < y.error; }
};

Segment gk21(const std::function<double(double)>& f, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  static const auto& kx = Kronrod::abscissa();
  static const auto& kw = Kronrod::weights();
  static const auto& gw = Gauss::weights();

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  // Kronrod abscissae: kx[0] = 0, odd indices are the Gauss-10 nodes.
  std::vector<double> fv(kx.size() * 2);
  const double f0 = f(center);
  double kronrod = f0 * kw[0];
  double gauss = 0.0;  // the 10-point rule has no node at 0
  double abs_sum = std::abs(f0) * kw[0];
  for (std::size_t i = 1; i < kx.size(); ++i) {
    const double dx = half * kx[i];
    const double fp = f(center + dx);
    const double fm = f(center - dx);
    fv[2 * i] = fp;
    fv[2 * i + 1] = fm;
    kronrod += kw[i] * (fp + fm);
    abs_sum += kw[i] * (std::abs(fp) + std::abs(fm));
    if (i % 2 == 1) gauss += gw[i / 2] * (fp + fm);
  }

  const double mean = 0.5 * kronrod;
  double asc = kw[0] * std::abs(f0 - mean);
  for (std::size_t i = 1; i < kx.size(); ++i)
    asc += kw[i] * (std::abs(fv[2 * i] - mean) + std::abs(fv[2 * i + 1] - mean));

  double err = std::abs((kronrod - gauss) * half);
  const double resasc = asc * std::abs(half);
  const double resabs = abs_sum * std::abs(half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = 2.220446049250313e-16;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * resabs, err);
  return {a, b, kronrod * half, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  const double pts[2] = {a, b};
  return integrate(f, std::span<const double>(pts, 2), opts);
}

QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& opts) {
  QuadratureResult res;
  if (breakpoints.size() < 2) return res;
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] == breakpoints[i]) continue;
    Segment s = gk21(f, breakpoints[i], breakpoints[i + 1]);
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }
  int count = static_cast<int>(heap.size());
  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  while (!heap.empty() && total_err > target() && count < opts.max_intervals) {
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted in double precision
    heap.pop();
    Segment left = gk21(f, worst.a, mid);
    Segment right = gk21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to drop accumulated update rounding.
  double value = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = value;
  res.error = err;
  res.intervals = count;
  res.converged = err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
  return res;
}

}  // namespace fermi
