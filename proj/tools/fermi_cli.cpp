// Command-line front end: channel, sweep, measure, oracle-check, validate-config.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fermi/config.hpp"
#include "fermi/errors.hpp"
#include "fermi/experiment.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

fermi::ExperimentConfig load(const Flags& f) {
  if (f.config.empty()) throw fermi::ConfigError("--config is required (or set FERMI_CONFIG)");
  fermi::ExperimentConfig cfg = fermi::load_config(f.config);
  if (f.tol) {
    cfg.tolerances.geometry = *f.tol;
    cfg.tolerances.oracle = *f.tol;
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.jobs) cfg.jobs = *f.jobs;
  cfg.validate();
  return cfg;
}

// --out wins, then the config's output path, then stdout.
void emit(const std::string& text, const std::string& flag_path, const std::string& cfg_path) {
  const std::string path = !flag_path.empty() ? flag_path : cfg_path;
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw fermi::ConfigError("cannot write output file '" + path + "'");
  out << text;
}

int cmd_channel(const Flags& f) {
  const auto cfg = load(f);
  const auto res = fermi::run_point(cfg);
  emit(res.channel_json.dump(2) + "\n", f.out, cfg.output.json);
  return fermi::exit_code::success;
}

int cmd_sweep(const Flags& f) {
  const auto cfg = load(f);
  const auto rows = fermi::run_sweep(cfg, cfg.jobs);
  std::ostringstream os;
  fermi::write_csv(os, rows);
  emit(os.str(), f.out, cfg.output.csv);
  for (const auto& r : rows)
    if (r.exit_code != 0) {
      std::cerr << "sweep: row " << r.axis_value << " failed: " << r.error << "\n";
      return r.exit_code;
    }
  return fermi::exit_code::success;
}

int cmd_measure(const Flags& f) {
  const auto cfg = load(f);
  const auto j = fermi::run_measurement_scenario(cfg);
  emit(j.dump(2) + "\n", f.out, cfg.output.json);
  return fermi::exit_code::success;
}

int cmd_oracle(const Flags& f) {
  const auto cfg = load(f);
  const auto j = fermi::run_oracle_check(cfg);
  emit(j.dump(2) + "\n", f.out, cfg.output.json);
  if (!j["agrees"].get<bool>()) {
    std::cerr << "oracle-check: oracle and analytic Choi differ by " << j["max_difference"]
              << "\n";
    return fermi::exit_code::consistency;
  }
  return fermi::exit_code::success;
}

int cmd_validate(const Flags& f) {
  const auto cfg = load(f);
  emit(cfg.to_json().dump(2) + "\n", f.out, "");
  return fermi::exit_code::success;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delta-coupled two-detector channels in a quasifree scalar field"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "experiment config file")->envname("FERMI_CONFIG");
    sub->add_option("--out", flags.out, "output path ('-' for stdout)")->envname("FERMI_OUT");
    sub->add_option("--tol", flags.tol, "geometry and oracle tolerance")->envname("FERMI_TOL");
    sub->add_option("--seed", flags.seed, "seed for random oracle couplings")->envname("FERMI_SEED");
    sub->add_option("--jobs", flags.jobs, "sweep worker threads")->envname("FERMI_JOBS");
  };

  int code = 0;
  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const Flags&);
  };
  const Sub subs[] = {
      {"channel", "evaluate Bob's channel for one configuration (JSON)", cmd_channel},
      {"sweep", "sweep one axis and write a CSV table", cmd_sweep},
      {"measure", "run the measurement-update scenario (JSON)", cmd_measure},
      {"oracle-check", "compare the truncated Fock oracle with the analytic channel", cmd_oracle},
      {"validate-config", "parse and validate a config, print it normalized", cmd_validate},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    sub->callback([&flags, &code, fn = s.fn] {
      try {
        code = fn(flags);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = fermi::exit_code_for(e);
      }
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fermi::exit_code::config;
  }
  return code;
}
