#include <cmath>
#include <map>
#include <numbers>

#include "fermi/errors.hpp"
#include "fermi/geometry.hpp"

namespace fermi {

namespace {

using std::numbers::pi;

constexpr double max_leakage = 1e-10;

}  // namespace

double box_leakage(const DetectorSpec& d, double length) {
  if (d.profile == Profile::bump) {
    for (double c : d.center)
      if (c - d.sigma < 0.0 || c + d.sigma > length) return 1.0;
    return 0.0;
  }
  // log of the inside mass, summed over axes, to keep tiny leaks resolvable
  double log_inside = 0.0;
  const double u = std::sqrt(2.0) * d.sigma;
  for (double c : d.center) {
    const double out = 0.5 * std::erfc(c / u) + 0.5 * std::erfc((length - c) / u);
    log_inside += std::log1p(-std::min(out, 1.0));
  }
  return -std::expm1(log_inside);
}

std::size_t box_mode_index(const std::array<int, 3>& n, int n_max) {
  return static_cast<std::size_t>(((n[0] - 1) * n_max + (n[1] - 1)) * n_max + (n[2] - 1));
}

ModeCouplings box_modes(double length, int n_max, double mass,
                        std::span<const DetectorSpec> detectors, std::vector<int> labels) {
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("box: length must be > 0");
  if (n_max < 1) throw DomainError("box: n_max must be >= 1");
  if (!(mass >= 0.0) || !std::isfinite(mass)) throw DomainError("box: mass must be >= 0");
  if (labels.empty())
    for (std::size_t j = 0; j < detectors.size(); ++j) labels.push_back(static_cast<int>(j));
  if (labels.size() != detectors.size())
    throw DomainError("box: one label per detector required");

  for (std::size_t j = 0; j < detectors.size(); ++j) {
    detectors[j].validate();
    const double leak = box_leakage(detectors[j], length);
    if (leak > max_leakage)
      throw DomainError("box: profile of detector " + std::to_string(labels[j]) +
                        " leaks outside the box (fraction " + std::to_string(leak) + ")");
  }

  const std::size_t modes = static_cast<std::size_t>(n_max) * n_max * n_max;
  ModeCouplings mc;
  mc.labels = labels;
  mc.g = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(detectors.size()),
                                static_cast<Eigen::Index>(modes));
  mc.omega.resize(static_cast<Eigen::Index>(modes));

  const double norm = std::pow(2.0 / length, 1.5);
  // Form factors depend only on |n|^2; cache per detector.
  std::vector<std::map<int, double>> form(detectors.size());

  for (int nx = 1; nx <= n_max; ++nx)
    for (int ny = 1; ny <= n_max; ++ny)
      for (int nz = 1; nz <= n_max; ++nz) {
        const std::array<int, 3> n{nx, ny, nz};
        const auto col = static_cast<Eigen::Index>(box_mode_index(n, n_max));
        const int n2 = nx * nx + ny * ny + nz * nz;
        const double k = pi * std::sqrt(static_cast<double>(n2)) / length;
        const double omega = std::sqrt(k * k + mass * mass);
        mc.omega(col) = omega;
        for (std::size_t j = 0; j < detectors.size(); ++j) {
          const DetectorSpec& d = detectors[j];
          auto it = form[j].find(n2);
          if (it == form[j].end())
            it = form[j].emplace(n2, profile_fourier(d.profile, d.sigma, k)).first;
          double spatial = norm * it->second;
          for (int ax = 0; ax < 3; ++ax) spatial *= std::sin(n[ax] * pi * d.center[ax] / length);
          const double phase = -omega * d.t0;
          mc.g(static_cast<Eigen::Index>(j), col) =
              d.lam * d.eta * spatial / std::sqrt(2.0 * omega) *
              Complex(std::cos(phase), std::sin(phase));
        }
      }
  return mc;
}

KgProducts box_kg_products(double length, double mass, const std::array<int, 3>& n,
                           const std::array<int, 3>& m, int grid) {
  if (grid < 2) throw DomainError("kg products: grid must have at least 2 intervals");
  auto omega = [&](const std::array<int, 3>& q) {
    const double k2 = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]) * pi * pi / (length * length);
    return std::sqrt(k2 + mass * mass);
  };
  const double wn = omega(n);
  const double wm = omega(m);
  // Spatial overlap int phi_n phi_m d^3x factorizes over axes; trapezoid rule
  // on a uniform grid (endpoints vanish under Dirichlet conditions).
  double overlap = 1.0;
  const double h = length / grid;
  for (int ax = 0; ax < 3; ++ax) {
    double sum = 0.0;
    for (int i = 1; i < grid; ++i) {
      const double x = i * h;
      sum += std::sin(n[ax] * pi * x / length) * std::sin(m[ax] * pi * x / length);
    }
    overlap *= (2.0 / length) * h * sum;
  }
  // (u_n, u_m) = i int (u_n* d_t u_m - u_m d_t u_n*) at t = 0.
  const double scale = overlap / (2.0 * std::sqrt(wn * wm));
  KgProducts out;
  out.with_mode = Complex(0.0, 1.0) * scale * Complex(0.0, -(wm + wn));
  // (u_n, u_m*) = i int (u_n* d_t u_m* - u_m* d_t u_n*)
  out.with_conjugate = Complex(0.0, 1.0) * scale * Complex(0.0, wm - wn);
  return out;
}

}  // namespace fermi
