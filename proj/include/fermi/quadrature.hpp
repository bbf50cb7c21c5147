#pragma once

#include <functional>
#include <span>

namespace fermi {

struct QuadratureOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = true;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature on [a, b].
///
/// Bisects the subinterval with the largest error estimate until the summed
/// estimate is below max(abs_tol, rel_tol * |value|) or max_intervals is hit.
/// Error estimates use the QUADPACK scaling of |K21 - G10|.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Same, with the initial partition given by sorted breakpoints (first and
/// last are the limits). Interior integrable singularities belong there.
QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& opts = {});

}  // namespace fermi
