#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fermi/channel.hpp"
#include "fermi/config.hpp"
#include "fermi/fock_oracle.hpp"

namespace fermi {

/// One evaluated configuration. `error` is empty on success; on failure the
/// numeric fields are NaN and `exit_code` carries the failure family.
struct ResultRow {
  double axis_value = 0.0;
  double d = 0.0;
  double dt = 0.0;  // t_B - t_A
  double e_ab = 0.0;
  double w_bb = 0.0;
  double nu_b = 0.0;
  QubitChannel channel;
  double p_exc = 0.0;
  CausalRelation causal = CausalRelation::partial;
  bool causal_approximate = false;
  double quadrature_error = 0.0;
  std::string error;
  int exit_code = 0;
};

struct PointResult {
  ResultRow row;
  nlohmann::json channel_json;
};

/// Everything needed downstream of geometry: the field state and both detectors.
struct Pipeline {
  ExperimentConfig cfg;
  QuasifreeState state;
  CausalRelation causal;
  bool causal_approximate;
  double quadrature_error;
};

/// Geometry (continuum or box) -> BilinearData -> quasifree state, plus the
/// time-ordering check: t_B <= t_A is a ConfigError unless the pair is spacelike.
Pipeline build_pipeline(const ExperimentConfig& cfg);

/// Copy of cfg with the sweep axis set to `value`.
ExperimentConfig at_axis_value(const ExperimentConfig& cfg, double value);

PointResult run_point(const ExperimentConfig& cfg);

/// One row per sweep value, in axis order, evaluated on `jobs` threads.
/// Failures are captured per row.
std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg, int jobs);

/// Fixed CSV column contract.
std::string csv_header();
std::string csv_row(const ResultRow& row);
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

nlohmann::json run_measurement_scenario(const ExperimentConfig& cfg);

/// Mode couplings used by oracle-check, per the [oracle] section.
ModeCouplings oracle_modes(const ExperimentConfig& cfg);

/// Oracle Choi against the analytic channel for the same modes and state.
nlohmann::json run_oracle_check(const ExperimentConfig& cfg);

}  // namespace fermi
