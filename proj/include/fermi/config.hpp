#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fermi/geometry.hpp"
#include "fermi/quasifree.hpp"

namespace fermi {

enum class Backend { continuum, box };

struct FieldConfig {
  StateKind state = StateKind::vacuum;
  double beta = 0.0;
  Backend backend = Backend::continuum;
  double box_length = 40.0;
  int n_max = 10;
  double mass = 0.0;
};

enum class SweepAxis { none, separation, time_gap, lambda_a, sigma_a };

/// `separation` moves B along +x away from A; `time_gap` sets t_B = t_A + value.
struct SweepConfig {
  SweepAxis axis = SweepAxis::none;
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;

  /// Evenly spaced grid from start to stop inclusive (a single point when steps == 1).
  std::vector<double> values() const;
};

enum class OutcomeMode { ground, excited, average };
enum class FutureFlag { automatic, yes, no };

struct MeasurementConfig {
  bool measure_alice = false;
  OutcomeMode outcome = OutcomeMode::ground;
  FutureFlag bob_in_future = FutureFlag::automatic;
};

struct ToleranceConfig {
  double quadrature_abs = 1e-12;
  double quadrature_rel = 1e-12;
  double geometry = 1e-10;  // accepted quadrature error, relative to max(1, |value|)
  double oracle = 1e-8;     // Choi change between successive cutoffs
  double compare = 1e-6;    // oracle versus analytic Choi
};

struct OutputConfig {
  std::string csv;
  std::string json;
};

/// Mode source for oracle-check: box modes from [field], explicit couplings, or
/// random couplings drawn from the run seed.
enum class OracleSource { box, explicit_modes, random };

struct OracleConfig {
  OracleSource source = OracleSource::box;
  int n_max = 1;
  std::vector<Complex> g_a;
  std::vector<Complex> g_b;
  std::vector<double> omega;
  int random_modes = 2;
  double max_coupling = 0.8;
  int start_cutoff = 8;
  int max_cutoff = 64;
  int max_modes = 3;
};

struct ExperimentConfig {
  DetectorSpec a;
  DetectorSpec b;
  FieldConfig field;
  SweepConfig sweep;
  MeasurementConfig measurement;
  ToleranceConfig tolerances;
  OutputConfig output;
  OracleConfig oracle;
  std::uint64_t seed = 0;
  int jobs = 1;

  /// Throws ConfigError on any inconsistency.
  void validate() const;
  nlohmann::json to_json() const;
};

/// INI-style text: [section] headers and key = value lines, '#' or ';' comments.
/// Unknown sections or keys are rejected.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

std::string to_string(SweepAxis axis);
std::string to_string(Backend b);

}  // namespace fermi
