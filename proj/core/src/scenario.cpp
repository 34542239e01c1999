#include "lambdaknob/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "lambdaknob/errors.hpp"
#include "lambdaknob/version.hpp"

namespace lambdaknob {

namespace {

using nlohmann::json;

constexpr double kGammaRb = 3.0 * constants::pi * 1e6;   // rad/s
constexpr double kGammaPb = 4.75e7;                      // rad/s

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(std::string(key) + " must be a number");
  return v.get<double>();
}

/// Reads `key` (SI) or `key_in_gamma` (multiples of gamma1); rejects both at once.
double get_scaled(const json& obj, const std::string& key, double gamma, double fallback) {
  const std::string suffixed = key + "_in_gamma";
  const bool has_si = obj.contains(key);
  const bool has_scaled = obj.contains(suffixed);
  if (has_si && has_scaled)
    throw ValidationError(key + " given both in SI units and in units of gamma");
  if (has_scaled) return get_number(obj, suffixed.c_str(), 0.0) * gamma;
  if (has_si) return get_number(obj, key.c_str(), 0.0);
  return fallback;
}

int get_int(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(std::string(key) + " must be an integer");
  return v.get<int>();
}

json parse(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("config is not valid JSON");
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  // A manifest wraps the config; unwrap so manifests round-trip as configs.
  if (doc.contains("config")) doc = doc.at("config");
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  return doc;
}

}  // namespace

pulse::PulseSpec PulseConfig::to_spec(const SystemParams& params) const {
  pulse::PulseSpec spec = pulse::from_spectral_width(spectral_width, params.omega13(), length);
  spec.center = center;
  return spec;
}

std::vector<std::string> preset_names() {
  return {"rb-fig1b", "rb-fig1c", "rb-fig1d", "rb-fig2ab", "pb-fig2c"};
}

std::string preset_config_json(const std::string& name) {
  json atom_rb = {
      {"gamma", kGammaRb},   {"Gamma12", 0.0},          {"Gamma13", 0.0}, {"Gamma23", 0.0},
      {"lambda13", 780e-9},  {"density_per_cc", 2e12},
  };
  json atom_pb = {
      {"gamma", kGammaPb},   {"Gamma12", 0.0},          {"Gamma13", 0.0}, {"Gamma23", 0.0},
      {"lambda13", 283e-9},  {"density_per_cc", 2e14},
  };

  json doc;
  if (name == "rb-fig1b") {
    doc = {{"atom", atom_rb},
           {"drives", {{"G_in_gamma", 10.0}, {"Omega_in_gamma", 5.0}, {"Delta2", 0.0}, {"Delta3", 0.0}}},
           {"probe", {{"delta1_min_in_gamma", -3.0}, {"delta1_max_in_gamma", 3.0}, {"points", 601}}}};
  } else if (name == "rb-fig1c") {
    doc = {{"atom", atom_rb},
           {"drives", {{"G_in_gamma", 10.0}, {"Omega_in_gamma", 0.0}, {"Delta2", 0.0}, {"Delta3", 0.0}}},
           {"probe", {{"delta1_min_in_gamma", -3.0}, {"delta1_max_in_gamma", 3.0}, {"points", 601}}},
           {"knob", {{"omega_min_in_gamma", 0.0}, {"omega_max_in_gamma", 20.0}, {"points", 81}}}};
  } else if (name == "rb-fig1d") {
    doc = {{"atom", atom_rb},
           {"drives", {{"G_in_gamma", 10.0}, {"Omega_in_gamma", 5.0}, {"Delta2", 0.0}, {"Delta3", 0.0}}},
           {"probe", {{"delta1_min_in_gamma", -3.0}, {"delta1_max_in_gamma", 3.0}, {"points", 601}}},
           {"pulse",
            {{"spectral_width", constants::two_pi * 120e3},
             {"length", 0.06},
             {"samples", 4096},
             {"band_half_width_in_widths", 6.0}}}};
  } else if (name == "rb-fig2ab") {
    doc = {{"atom", atom_rb},
           {"drives", {{"G_in_gamma", 200.0}, {"Omega_in_gamma", 0.0}, {"Delta2", 0.0}, {"Delta3", 0.0}}},
           {"probe", {{"delta1_min_in_gamma", -3.0}, {"delta1_max_in_gamma", 3.0}, {"points", 601}}},
           {"doppler", {{"delta", 1.33e9}, {"nodes", 64}}},
           {"knob", {{"omega_min_in_gamma", 0.0}, {"omega_max_in_gamma", 300.0}, {"points", 61}}}};
  } else if (name == "pb-fig2c") {
    doc = {{"atom", atom_pb},
           {"drives", {{"G_in_gamma", 297.0}, {"Omega_in_gamma", 0.0}, {"Delta2", 0.0}, {"Delta3", 0.0}}},
           {"probe", {{"delta1_min_in_gamma", -3.0}, {"delta1_max_in_gamma", 3.0}, {"points", 601}}},
           {"doppler", {{"delta_in_gamma", 25.0}, {"nodes", 64}}},
           {"knob", {{"omega_min_in_gamma", 0.0}, {"omega_max_in_gamma", 450.0}, {"points", 61}}}};
  } else {
    throw ValidationError("unknown preset: " + name);
  }
  return doc.dump(2);
}

Scenario resolve_config(const std::string& json_text, const std::string& name) {
  const json doc = parse(json_text);

  Scenario scenario;
  scenario.name = name;

  const json atom = doc.value("atom", json::object());
  SystemParams raw;
  if (atom.contains("gamma")) {
    if (atom.contains("gamma1") || atom.contains("gamma2"))
      throw ValidationError("give either gamma or gamma1/gamma2, not both");
    raw.gamma1 = raw.gamma2 = get_number(atom, "gamma", 0.0);
  } else {
    raw.gamma1 = get_number(atom, "gamma1", 0.0);
    raw.gamma2 = get_number(atom, "gamma2", raw.gamma1);
  }
  raw.Gamma12 = get_number(atom, "Gamma12", 0.0);
  raw.Gamma13 = get_number(atom, "Gamma13", 0.0);
  raw.Gamma23 = get_number(atom, "Gamma23", 0.0);
  raw.lambda13 = get_number(atom, "lambda13", 780e-9);
  raw.density_per_cc = get_number(atom, "density_per_cc", 0.0);
  raw.doppler_delta = 0.0;
  if (atom.contains("prefactor_eta")) raw.prefactor_eta = get_number(atom, "prefactor_eta", 0.0);
  scenario.params = validate_params(raw);
  const double gamma = scenario.params.gamma_ref();

  const json drives = doc.value("drives", json::object());
  scenario.drives.control_G = get_scaled(drives, "G", gamma, 0.0);
  scenario.drives.coupling_Omega = get_scaled(drives, "Omega", gamma, 0.0);
  scenario.drives.delta2 = get_scaled(drives, "Delta2", gamma, 0.0);
  scenario.drives.delta3 = get_scaled(drives, "Delta3", gamma, 0.0);
  validate_drives(scenario.drives);

  const json probe = doc.value("probe", json::object());
  if (probe.contains("delta1") || probe.contains("delta1_in_gamma")) {
    scenario.probe = ProbeSpec{{get_scaled(probe, "delta1", gamma, 0.0)}};
  } else {
    const double lo = get_scaled(probe, "delta1_min", gamma, -3.0 * gamma);
    const double hi = get_scaled(probe, "delta1_max", gamma, 3.0 * gamma);
    scenario.probe = make_probe_grid(lo, hi, get_int(probe, "points", 601));
  }
  validate_probe(scenario.probe);

  if (doc.contains("doppler")) {
    const json dop = doc.at("doppler");
    DopplerSpec spec;
    spec.delta = get_scaled(dop, "delta", gamma, 0.0);
    spec.nodes = get_int(dop, "nodes", 64);
    if (spec.delta < 0.0) throw ValidationError("doppler delta must be nonnegative");
    if (spec.nodes < 1) throw ValidationError("doppler nodes must be >= 1");
    scenario.doppler = spec;
    scenario.params.doppler_delta = spec.delta;
  }

  if (doc.contains("pulse")) {
    const json pl = doc.at("pulse");
    PulseConfig cfg;
    cfg.spectral_width = get_scaled(pl, "spectral_width", gamma, 0.0);
    if (pl.contains("duration")) {
      const double tau = get_number(pl, "duration", 0.0);
      if (cfg.spectral_width > 0.0 && std::abs(cfg.spectral_width * tau - 2.0) > 1e-12 * 2.0)
        throw ValidationError("pulse spectral_width and duration are inconsistent with Gamma*tau=2");
      if (cfg.spectral_width <= 0.0) {
        if (!(tau > 0.0)) throw ValidationError("pulse duration must be positive");
        cfg.spectral_width = 2.0 / tau;
      }
    }
    cfg.length = get_number(pl, "length", 0.0);
    cfg.center = get_number(pl, "center", 0.0);
    cfg.samples = get_int(pl, "samples", 4096);
    cfg.band_half_width_in_widths = get_number(pl, "band_half_width_in_widths", 6.0);
    pulse::validate_pulse(cfg.to_spec(scenario.params));
    scenario.pulse = cfg;
  }

  if (doc.contains("knob")) {
    const json knob = doc.at("knob");
    const double lo = get_scaled(knob, "omega_min", gamma, 0.0);
    const double hi = get_scaled(knob, "omega_max", gamma, 20.0 * gamma);
    const int points = get_int(knob, "points", 81);
    if (points < 1) throw ValidationError("knob points must be >= 1");
    if (points > 1 && !(hi > lo)) throw ValidationError("knob grid must be increasing");
    scenario.knob_omega.resize(points);
    for (int i = 0; i < points; ++i)
      scenario.knob_omega[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  }
  return scenario;
}

Scenario load_config_file(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return resolve_config(buf.str(), name);
}

std::string apply_config_overrides(
    const std::string& json_text,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  json doc = parse(json_text);
  for (const auto& [path, value] : overrides) {
    json parsed_value = json::parse(value, nullptr, false);
    if (parsed_value.is_discarded()) parsed_value = value;  // fall back to string

    json* node = &doc;
    std::string rest = path;
    for (std::size_t dot = rest.find('.'); dot != std::string::npos; dot = rest.find('.')) {
      const std::string head = rest.substr(0, dot);
      rest = rest.substr(dot + 1);
      if (head.empty()) throw ValidationError("bad override key: " + path);
      node = &(*node)[head];
    }
    if (rest.empty()) throw ValidationError("bad override key: " + path);
    (*node)[rest] = parsed_value;
  }
  return doc.dump(2);
}

namespace {

json scenario_to_json(const Scenario& s) {
  json atom = {{"gamma1", s.params.gamma1},   {"gamma2", s.params.gamma2},
               {"Gamma12", s.params.Gamma12}, {"Gamma13", s.params.Gamma13},
               {"Gamma23", s.params.Gamma23}, {"lambda13", s.params.lambda13},
               {"density_per_cc", s.params.density_per_cc},
               {"prefactor_eta", s.params.eta()}};
  json drives = {{"G", s.drives.control_G.real()},
                 {"Omega", s.drives.coupling_Omega.real()},
                 {"Delta2", s.drives.delta2},
                 {"Delta3", s.drives.delta3}};
  json probe;
  if (s.probe.delta1.size() == 1) {
    probe = {{"delta1", s.probe.delta1.front()}};
  } else {
    probe = {{"delta1_min", s.probe.delta1.front()},
             {"delta1_max", s.probe.delta1.back()},
             {"points", static_cast<int>(s.probe.delta1.size())}};
  }
  json doc = {{"atom", atom}, {"drives", drives}, {"probe", probe}};
  if (s.doppler)
    doc["doppler"] = {{"delta", s.doppler->delta}, {"nodes", s.doppler->nodes}};
  if (s.pulse)
    doc["pulse"] = {{"spectral_width", s.pulse->spectral_width},
                    {"length", s.pulse->length},
                    {"center", s.pulse->center},
                    {"samples", s.pulse->samples},
                    {"band_half_width_in_widths", s.pulse->band_half_width_in_widths}};
  if (!s.knob_omega.empty())
    doc["knob"] = {{"omega_min", s.knob_omega.front()},
                   {"omega_max", s.knob_omega.back()},
                   {"points", static_cast<int>(s.knob_omega.size())}};
  return doc;
}

}  // namespace

std::string resolved_config_json(const Scenario& scenario) {
  return scenario_to_json(scenario).dump(2);
}

std::string manifest_json(const Scenario& scenario, const std::string& subcommand,
                          double timing_seconds) {
  json doc = {{"tool", "lambda-knob"},
              {"version", version},
              {"subcommand", subcommand},
              {"scenario", scenario.name},
              {"timing_seconds", timing_seconds},
              {"config", scenario_to_json(scenario)}};
  return doc.dump(2);
}

}  // namespace lambdaknob
