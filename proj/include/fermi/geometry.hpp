#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "fermi/bilinear_data.hpp"
#include "fermi/quadrature.hpp"
#include "fermi/quasifree.hpp"

namespace fermi {

using Vec3 = std::array<double, 3>;

enum class Profile { gaussian, bump };

/// Initial qubit state of a detector, in the {|g>, |e>} basis.
struct QubitInit {
  enum class Kind { ground, excited, bloch };
  Kind kind = Kind::ground;
  double theta = 0.0;  // polar angle from |g>
  double phi = 0.0;

  static QubitInit ground() { return {Kind::ground}; }
  static QubitInit excited() { return {Kind::excited}; }
  /// (|g> + |e>)/sqrt(2).
  static QubitInit plus() { return {Kind::bloch, 1.5707963267948966, 0.0}; }
  static QubitInit bloch(double theta, double phi) { return {Kind::bloch, theta, phi}; }
};

/// One delta-coupled detector at rest: f(x) = lam * eta * delta(t - t0) * F(x - center).
///
/// Gaussian profiles are normalized 3D Gaussians with per-axis standard
/// deviation sigma. Bump profiles are the mollifier exp(-1/(1 - r^2/sigma^2))
/// on r < sigma, normalized numerically. All lengths share one unit.
struct DetectorSpec {
  Vec3 center{0.0, 0.0, 0.0};
  double t0 = 0.0;
  double sigma = 1.0;
  double lam = 1.0;
  double eta = 1.0;
  double gap = 1.0;
  Profile profile = Profile::gaussian;
  QubitInit init;

  void validate() const;
  /// Exact support radius for bump profiles; 5 sigma effective support for Gaussians.
  double support_radius() const;
};

std::string to_string(Profile p);

/// Normalized radial density F(r) with integral over R^3 equal to 1.
double profile_density(Profile p, double sigma, double r);
/// Fourier transform of the normalized profile at wavenumber k, F~(0) = 1.
double profile_fourier(Profile p, double sigma, double k);

struct GeometryOptions {
  QuadratureOptions quad;
  /// Largest acceptable absolute error estimate before an AccuracyError is thrown.
  double tolerance = 1e-10;
  /// Force the radial position-space route even for two Gaussians (used for cross-checks).
  bool force_radial = false;
};

struct GeometryResult {
  Complex w_ab;
  Complex w_aa;
  Complex w_bb;
  double e_ab = 0.0;
  double quadrature_error = 0.0;

  /// Two-smearing bilinear data with labels {a, b}.
  BilinearData to_bilinear(SmearingIndex a = {0}, SmearingIndex b = {1}) const;
};

/// W(f_a, f_b) for the massless vacuum in 3+1 Minkowski spacetime.
/// `error` receives the quadrature error estimate (0 for closed forms).
Complex smeared_wightman(const DetectorSpec& a, const DetectorSpec& b,
                         const GeometryOptions& opts = {}, double* error = nullptr);

/// E(f_a, f_b) with [phi(f), phi(g)] = i E(f, g). Antisymmetric in (a, b) exactly.
double causal_propagator(const DetectorSpec& a, const DetectorSpec& b,
                         const GeometryOptions& opts = {}, double* error = nullptr);

GeometryResult geometry_result(const DetectorSpec& a, const DetectorSpec& b,
                               const GeometryOptions& opts = {});

/// Where B's support lies relative to A's: entirely spacelike, entirely inside
/// the causal future J+(supp A), entirely inside the causal past, or none of these.
enum class CausalRelation { spacelike, future, past, partial };

std::string to_string(CausalRelation r);

CausalRelation causal_relation(const DetectorSpec& a, const DetectorSpec& b);

/// True when either profile is Gaussian, so supports are only effective (5 sigma).
bool causal_relation_is_approximate(const DetectorSpec& a, const DetectorSpec& b);

/// Dirichlet box [0, L]^3 modes with omega_n = sqrt(|k_n|^2 + mass^2), n_d = 1..n_max.
/// Couplings g_jn = lam_j eta_j * integral F_j(x) u_n(t_j, x) d^3x with KG-normalized
/// u_n = exp(-i omega t) / sqrt(2 omega) * prod_d sqrt(2/L) sin(n_d pi x_d / L).
ModeCouplings box_modes(double length, int n_max, double mass,
                        std::span<const DetectorSpec> detectors,
                        std::vector<int> labels = {});

/// Fraction of a Gaussian profile's mass outside [0, L]^3. Bump profiles give 0
/// when their ball lies inside the box and 1 otherwise.
double box_leakage(const DetectorSpec& d, double length);

/// Mode index for (nx, ny, nz), each in 1..n_max.
std::size_t box_mode_index(const std::array<int, 3>& n, int n_max);

struct KgProducts {
  Complex with_mode;       // (u_n, u_m)_KG
  Complex with_conjugate;  // (u_n, u_m*)_KG
};

/// Klein-Gordon products of two box modes evaluated on the t = 0 slice by
/// trapezoidal grid quadrature with `grid` intervals per axis.
KgProducts box_kg_products(double length, double mass, const std::array<int, 3>& n,
                           const std::array<int, 3>& m, int grid = 256);

}  // namespace fermi
