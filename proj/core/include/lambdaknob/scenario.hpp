#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lambdaknob/model.hpp"
#include "lambdaknob/pulse.hpp"
#include "lambdaknob/response.hpp"

namespace lambdaknob {

struct PulseConfig {
  double spectral_width = 0.0;  ///< Gamma (rad/s)
  double length = 0.0;          ///< m
  double center = 0.0;          ///< s
  int samples = 4096;
  double band_half_width_in_widths = 6.0;

  pulse::PulseSpec to_spec(const SystemParams& params) const;
  pulse::GridOptions grid() const { return {samples, band_half_width_in_widths}; }
};

/// A fully resolved run description: validated parameters, drive fields,
/// probe grid and the optional Doppler / pulse / knob sections.
struct Scenario {
  std::string name;
  SystemParams params;
  DriveFields drives;
  ProbeSpec probe;
  std::optional<DopplerSpec> doppler;
  std::optional<PulseConfig> pulse;
  std::vector<double> knob_omega;  ///< empty when no knob section is configured
};

/// Names of the bundled scenarios.
std::vector<std::string> preset_names();

/// Raw config JSON of a bundled scenario.  Throws ValidationError for an
/// unknown name.
std::string preset_config_json(const std::string& name);

/// Parses and resolves a config document.  All numbers are SI (rad/s, m, s)
/// unless the key carries the `_in_gamma` suffix, in which case the value is
/// multiplied by gamma1.  A document containing a top-level "config" object
/// (a run manifest) is unwrapped first, so manifests feed back as configs.
Scenario resolve_config(const std::string& json_text, const std::string& name);

Scenario load_config_file(const std::filesystem::path& path, const std::string& name);

/// Applies dotted-path overrides ("drives.Omega_in_gamma" -> "7") onto a raw
/// config document and returns the updated JSON.
std::string apply_config_overrides(const std::string& json_text,
                                   const std::vector<std::pair<std::string, std::string>>& overrides);

/// The scenario re-serialized as resolved SI config JSON; feeding this back
/// through resolve_config reproduces the scenario exactly.
std::string resolved_config_json(const Scenario& scenario);

/// Run manifest: resolved config plus tool version, subcommand and timing.
std::string manifest_json(const Scenario& scenario, const std::string& subcommand,
                          double timing_seconds);

}  // namespace lambdaknob
