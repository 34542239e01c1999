// Scenario runner for the three-level Lambda medium: susceptibility scans,
// group-index evaluation, knob scans over the lower-level coupling, weak-pulse
// propagation and the time-domain cross-check of the perturbative solver.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lambdaknob/errors.hpp"
#include "lambdaknob/io.hpp"
#include "lambdaknob/liouville.hpp"
#include "lambdaknob/model.hpp"
#include "lambdaknob/oracle.hpp"
#include "lambdaknob/pulse.hpp"
#include "lambdaknob/response.hpp"
#include "lambdaknob/scenario.hpp"
#include "lambdaknob/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lambdaknob;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::string out_dir = ".";
  int nodes = 0;        // 0 = keep configured value
  bool no_doppler = false;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "config JSON file (or a run manifest)");
  cmd->add_option("--preset", args.preset, "bundled scenario name (see `lambda-knob presets`)");
  cmd->add_option("--out", args.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--nodes", args.nodes, "override Doppler quadrature node count");
  cmd->add_flag("--no-doppler", args.no_doppler, "drop the Doppler section for this run");
  cmd->allow_extras();  // trailing --section.key value pairs override config entries
}

std::vector<std::pair<std::string, std::string>> collect_overrides(const CLI::App* cmd) {
  std::vector<std::string> extras = cmd->remaining();
  std::vector<std::pair<std::string, std::string>> overrides;
  for (std::size_t i = 0; i < extras.size(); i += 2) {
    std::string key = extras[i];
    if (key.rfind("--", 0) != 0 || i + 1 >= extras.size())
      throw ValidationError("overrides must come as --section.key value pairs (got '" + key + "')");
    overrides.emplace_back(key.substr(2), extras[i + 1]);
  }
  return overrides;
}

Scenario build_scenario(const CLI::App* cmd, const CommonArgs& args) {
  std::string config_text;
  std::string name;
  if (!args.preset.empty() && !args.config_path.empty())
    throw ValidationError("give either --config or --preset, not both");
  if (!args.preset.empty()) {
    config_text = preset_config_json(args.preset);
    name = args.preset;
  } else if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw ValidationError("cannot read config file " + args.config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    config_text = buf.str();
    name = fs::path(args.config_path).stem().string();
  } else {
    throw ValidationError("need --config FILE or --preset NAME");
  }

  const auto overrides = collect_overrides(cmd);
  if (!overrides.empty()) config_text = apply_config_overrides(config_text, overrides);

  Scenario scenario = resolve_config(config_text, name);
  if (args.nodes > 0) {
    if (!scenario.doppler) scenario.doppler = DopplerSpec{};
    scenario.doppler->nodes = args.nodes;
  }
  if (args.no_doppler) {
    scenario.doppler.reset();
    scenario.params.doppler_delta = 0.0;
  }
  return scenario;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_manifest(const Scenario& scenario, const std::string& subcommand, double seconds,
                    const fs::path& out_dir, const json& results = {}) {
  json doc = json::parse(manifest_json(scenario, subcommand, seconds));
  if (!results.is_null()) doc["results"] = results;
  io::write_file_atomic(out_dir / (scenario.name + "_" + subcommand + "_manifest.json"),
                        doc.dump(2) + "\n");
}

const DopplerSpec* active_doppler(const Scenario& scenario) {
  if (scenario.doppler && scenario.doppler->delta > 0.0) return &*scenario.doppler;
  return nullptr;
}

int run_susceptibility(const CLI::App* cmd, const CommonArgs& args) {
  Stopwatch watch;
  const Scenario scenario = build_scenario(cmd, args);
  const double gamma = scenario.params.gamma_ref();

  const auto samples = susceptibility_scan(scenario.params, scenario.drives,
                                           scenario.probe.delta1, active_doppler(scenario));
  io::CsvTable table;
  table.columns = {"Delta1_over_gamma", "Re_chi_norm", "Im_chi_norm"};
  table.rows.reserve(samples.size());
  for (const auto& s : samples)
    table.rows.push_back({s.delta1 / gamma, s.chi_norm.real(), s.chi_norm.imag()});

  const fs::path out_dir(args.out_dir);
  io::write_csv(out_dir / (scenario.name + "_susceptibility.csv"), table);
  write_manifest(scenario, "susceptibility", watch.seconds(), out_dir,
                 {{"rows", samples.size()}, {"doppler_averaged", active_doppler(scenario) != nullptr}});
  return 0;
}

int run_group_index(const CLI::App* cmd, const CommonArgs& args, double delta1_in_gamma) {
  Stopwatch watch;
  const Scenario scenario = build_scenario(cmd, args);
  const double gamma = scenario.params.gamma_ref();
  std::optional<DopplerSpec> doppler;
  if (const DopplerSpec* d = active_doppler(scenario)) doppler = *d;

  const GroupIndexResult result =
      group_index(scenario.params, scenario.drives, delta1_in_gamma * gamma, doppler);

  json summary = {{"delta1_over_gamma", delta1_in_gamma},
                  {"n_g", result.n_g},
                  {"n_g_half_step", result.n_g_half_step},
                  {"derivative_converged", result.derivative_converged},
                  {"im_ratio", result.im_ratio},
                  {"doppler_averaged", doppler.has_value()}};
  const fs::path out_dir(args.out_dir);
  io::write_file_atomic(out_dir / (scenario.name + "_group_index.json"), summary.dump(2) + "\n");
  write_manifest(scenario, "group-index", watch.seconds(), out_dir, summary);
  if (!result.derivative_converged)
    std::cerr << "warning: derivative did not converge at h vs h/2 within 1%\n";
  std::cout << "n_g = " << result.n_g << "\n";
  return 0;
}

json crossovers_json(const KnobScan& scan, double gamma) {
  json arr = json::array();
  for (const auto& [lo, hi] : scan.crossovers)
    arr.push_back({{"omega_lo_over_gamma", lo / gamma}, {"omega_hi_over_gamma", hi / gamma}});
  return arr;
}

int run_knob_scan(const CLI::App* cmd, const CommonArgs& args) {
  Stopwatch watch;
  const Scenario scenario = build_scenario(cmd, args);
  if (scenario.knob_omega.empty())
    throw ValidationError("knob-scan needs a knob section (omega grid) in the config");
  const double gamma = scenario.params.gamma_ref();

  io::CsvTable table;
  table.columns = {"Omega_over_gamma", "n_g", "doppler_flag"};
  json results;

  const KnobScan plain =
      knob_scan(scenario.params, scenario.drives, scenario.knob_omega, std::nullopt);
  for (std::size_t i = 0; i < plain.omega.size(); ++i)
    table.rows.push_back({plain.omega[i] / gamma, plain.n_g[i], 0.0});
  results["crossovers_unaveraged"] = crossovers_json(plain, gamma);
  results["skipped_unaveraged"] = plain.skipped;

  if (const DopplerSpec* doppler = active_doppler(scenario)) {
    const KnobScan averaged =
        knob_scan(scenario.params, scenario.drives, scenario.knob_omega, *doppler);
    for (std::size_t i = 0; i < averaged.omega.size(); ++i)
      table.rows.push_back({averaged.omega[i] / gamma, averaged.n_g[i], 1.0});
    results["crossovers_averaged"] = crossovers_json(averaged, gamma);
    results["skipped_averaged"] = averaged.skipped;
  }

  const fs::path out_dir(args.out_dir);
  io::write_csv(out_dir / (scenario.name + "_knob_scan.csv"), table);
  write_manifest(scenario, "knob-scan", watch.seconds(), out_dir, results);
  return 0;
}

int run_pulse(const CLI::App* cmd, const CommonArgs& args) {
  Stopwatch watch;
  const Scenario scenario = build_scenario(cmd, args);
  if (!scenario.pulse) throw ValidationError("pulse run needs a pulse section in the config");

  std::optional<DopplerSpec> doppler;
  if (const DopplerSpec* d = active_doppler(scenario)) doppler = *d;

  const pulse::PulseSpec spec = scenario.pulse->to_spec(scenario.params);
  const pulse::PulseTrace trace = pulse::propagate(spec, scenario.params, scenario.drives,
                                                   doppler, scenario.pulse->grid());
  const GroupIndexResult carrier =
      group_index(scenario.params, scenario.drives, 0.0, doppler);

  io::CsvTable table;
  table.columns = {"t_microseconds", "vacuum_intensity", "medium_intensity"};
  table.rows.reserve(trace.time.size());
  for (std::size_t i = 0; i < trace.time.size(); ++i)
    table.rows.push_back({trace.time[i] * 1e6, trace.vacuum_intensity[i], trace.medium_intensity[i]});

  json summary = {{"peak_delay_us", trace.peak_delay * 1e6},
                  {"distortion", trace.distortion},
                  {"n_g_narrowband", carrier.n_g}};
  const fs::path out_dir(args.out_dir);
  io::write_csv(out_dir / (scenario.name + "_pulse.csv"), table);
  io::write_file_atomic(out_dir / (scenario.name + "_pulse_summary.json"), summary.dump(2) + "\n");
  write_manifest(scenario, "pulse", watch.seconds(), out_dir, summary);
  std::cout << "peak delay " << trace.peak_delay * 1e6 << " us, distortion " << trace.distortion
            << "\n";
  return 0;
}

int run_oracle_check(const CLI::App* cmd, const CommonArgs& args, int draws, unsigned seed,
                     double probe_g_in_gamma, bool dump_trajectories) {
  Stopwatch watch;
  const Scenario scenario = build_scenario(cmd, args);
  const SystemParams& params = scenario.params;
  const double gamma = params.gamma_ref();

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> delta1_dist(-5.0, 5.0);
  std::uniform_real_distribution<double> omega_dist(0.0, 10.0);
  std::uniform_real_distribution<double> g_dist(5.0, 200.0);

  io::CsvTable table;
  table.columns = {"Delta1_over_gamma", "G_over_gamma",     "Omega_over_gamma",
                   "Re_sigma13_alg",    "Im_sigma13_alg",   "Re_sigma13_oracle",
                   "Im_sigma13_oracle", "rel_error"};

  const fs::path out_dir(args.out_dir);
  double max_rel = 0.0;
  int compared = 0;
  for (int draw = 0; draw < draws; ++draw) {
    DriveFields drives = scenario.drives;
    const double delta1 = delta1_dist(rng) * gamma;
    drives.control_G = g_dist(rng) * gamma;
    drives.coupling_Omega = omega_dist(rng) * gamma;
    const double d4 = delta4(delta1, drives);

    ResponseProblem problem(params, drives);
    const Complex algebraic = problem.chi_norm(d4);

    const double probe_g = probe_g_in_gamma * gamma;
    const double fastest = std::max({std::abs(drives.control_G), std::abs(drives.coupling_Omega),
                                     gamma, std::abs(d4)});
    const double dt = 1.0 / (100.0 * fastest);
    // near-resonant draws need a longer run so the demodulation window still
    // covers a full beat period
    const double t_end =
        d4 == 0.0 ? 100.0 / gamma
                  : std::max(100.0 / gamma, 4.5 * constants::pi / std::abs(d4));
    const auto traj = oracle::integrate(params, drives, probe_g, d4, t_end, dt);
    const Complex measured = oracle::demodulate(traj, d4);

    double rel = std::numeric_limits<double>::quiet_NaN();
    if (std::abs(measured) >= 1e-8) {  // skip numerically empty responses
      rel = std::abs(measured - algebraic) / std::abs(measured);
      max_rel = std::max(max_rel, rel);
      ++compared;
    }
    table.rows.push_back({delta1 / gamma, drives.control_G.real() / gamma,
                          drives.coupling_Omega.real() / gamma, algebraic.real(), algebraic.imag(),
                          measured.real(), measured.imag(), rel});

    if (dump_trajectories) {
      io::CsvTable dump;
      dump.columns = {"t_seconds", "Re_sigma13", "Im_sigma13", "trace_drift"};
      for (std::size_t i = 0; i < traj.time.size(); ++i) {
        const Complex s13 = traj.states[i](k13);
        dump.rows.push_back({traj.time[i], s13.real(), s13.imag(), traj.trace_drift});
      }
      io::write_csv(out_dir / (scenario.name + "_trajectory_" + std::to_string(draw) + ".csv"),
                    dump);
    }
  }

  io::write_csv(out_dir / (scenario.name + "_oracle_check.csv"), table);
  const bool ok = max_rel <= 1e-4;
  json results = {{"draws", draws},
                  {"compared", compared},
                  {"max_rel_error", max_rel},
                  {"tolerance", 1e-4},
                  {"ok", ok}};
  write_manifest(scenario, "oracle-check", watch.seconds(), out_dir, results);
  std::cout << "oracle check: " << compared << "/" << draws << " compared, max rel error "
            << max_rel << (ok ? " (ok)\n" : " (FAIL)\n");
  if (!ok) throw NumericalError("oracle disagreement above 1e-4");
  return 0;
}

int run_presets(const std::string& preset) {
  if (preset.empty()) {
    for (const auto& name : preset_names()) std::cout << name << "\n";
  } else {
    std::cout << preset_config_json(preset) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-level Lambda medium: susceptibility, group index, knob scans and "
               "weak-pulse propagation"};
  app.set_version_flag("--version", std::string(lambdaknob::version));
  app.require_subcommand(1);

  CommonArgs args;

  auto* susc = app.add_subcommand("susceptibility", "probe susceptibility scan over Delta1");
  add_common_options(susc, args);

  auto* gidx = app.add_subcommand("group-index", "group index at one probe detuning");
  add_common_options(gidx, args);
  double delta1_in_gamma = 0.0;
  gidx->add_option("--delta1-in-gamma", delta1_in_gamma, "probe detuning in units of gamma")
      ->capture_default_str();

  auto* knob = app.add_subcommand("knob-scan", "group index versus lower-level coupling Omega");
  add_common_options(knob, args);

  auto* pul = app.add_subcommand("pulse", "weak Gaussian pulse propagation through the medium");
  add_common_options(pul, args);

  auto* oracle_cmd = app.add_subcommand(
      "oracle-check", "compare the algebraic response against direct time integration");
  add_common_options(oracle_cmd, args);
  int draws = 10;
  unsigned seed = 20010401;
  double probe_g_in_gamma = 1e-3;
  bool dump_trajectories = false;
  oracle_cmd->add_option("--draws", draws, "number of random parameter draws")
      ->capture_default_str();
  oracle_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
  oracle_cmd->add_option("--probe-g-in-gamma", probe_g_in_gamma, "probe coupling in gamma units")
      ->capture_default_str();
  oracle_cmd->add_flag("--dump-trajectory", dump_trajectories,
                       "write per-draw trajectory CSV files");

  auto* presets_cmd = app.add_subcommand("presets", "list bundled scenarios (or print one)");
  std::string preset_to_print;
  presets_cmd->add_option("--preset", preset_to_print, "print this preset's config JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (susc->parsed()) return run_susceptibility(susc, args);
    if (gidx->parsed()) return run_group_index(gidx, args, delta1_in_gamma);
    if (knob->parsed()) return run_knob_scan(knob, args);
    if (pul->parsed()) return run_pulse(pul, args);
    if (oracle_cmd->parsed())
      return run_oracle_check(oracle_cmd, args, draws, seed, probe_g_in_gamma, dump_trajectories);
    if (presets_cmd->parsed()) return run_presets(preset_to_print);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
