#pragma once

#include "mwassoc/scans.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mwassoc::cli {

/// Everything one run needs. Keys in the config file are the field names.
struct RunConfig {
  // data files, relative to model_dir
  std::string model_dir;
  std::string a_potential;
  std::string x_potential;
  std::string a_dipole;
  std::string x_dipole;
  std::vector<std::string> excited;      // excited-state potentials
  std::vector<std::string> excited_to_a; // transition dipoles, same order
  std::vector<std::string> excited_to_x;

  // system
  double mass1_amu = 0.0;
  double mass2_amu = 0.0;
  double trap_kHz = 200.0;
  double intensity_Wcm2 = 1e4;
  double angular_C = 1.0;
  double phase_step = default_phase_step;
  std::optional<double> r_min;
  std::optional<double> r_max;

  // levels
  std::string potential; // PATH | flat | morse:De_cm1,Re,a
  int ell = 0;
  std::optional<double> e_max_cm1; // relative to the asymptote
  int max_states = 500;

  // scans
  std::string state = "a";
  int from_top = 0;
  std::optional<int> initial_v;
  double detuning_MHz = 0.0;
  std::optional<double> linewidth_MHz;
  std::vector<double> freqs_kHz{50, 100, 200, 400, 800};
  double target_Eb_cm1 = -1.0;
  double window_min_cm1 = 0.1;
  double window_max_cm1 = 10.0;

  // output
  std::string format = "csv";
  std::string output; // empty: standard output

  bool operator==(const RunConfig&) const = default;
};

/// Register every RunConfig field as an option "--<field>" on `app`.
void bind_options(CLI::App& app, RunConfig& cfg);

/// Config-file text that parses back to `cfg`.
std::string to_config_text(const RunConfig& cfg);

/// Parse config-file text alone (no command line). Throws ConfigError.
RunConfig parse_config_text(const std::string& text);

/// Range and consistency checks that need no files. Throws ConfigError.
void check(const RunConfig& cfg);

/// Anchor relative model_dir at `base` (the config file's directory).
void anchor_model_dir(RunConfig& cfg, const std::filesystem::path& base);

/// Resolve a data path against model_dir.
std::filesystem::path resolve(const RunConfig& cfg, const std::string& path);

LowerState lower_state(const RunConfig& cfg);

/// Load every configured curve into a SystemConfig; labels referenced by the
/// dipoles must match the curves they are attached to.
SystemConfig load_system(const RunConfig& cfg);

/// Channel curve for `levels`: the `potential` key, else the selected state.
PotentialCurve levels_curve(const RunConfig& cfg);

} // namespace mwassoc::cli
