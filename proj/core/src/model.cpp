#include "lambdaknob/model.hpp"

#include <cmath>

#include "lambdaknob/errors.hpp"

namespace lambdaknob {

namespace {

void require_finite(double value, const char* field) {
  if (!std::isfinite(value)) throw ValidationError(std::string(field) + " must be finite");
}

void require_nonnegative(double value, const char* field) {
  require_finite(value, field);
  if (value < 0.0) throw ValidationError(std::string(field) + " must be nonnegative");
}

}  // namespace

SystemParams validate_params(SystemParams raw) {
  require_nonnegative(raw.gamma1, "gamma1");
  require_nonnegative(raw.gamma2, "gamma2");
  require_nonnegative(raw.Gamma12, "Gamma12");
  require_nonnegative(raw.Gamma13, "Gamma13");
  require_nonnegative(raw.Gamma23, "Gamma23");
  require_finite(raw.lambda13, "lambda13");
  if (raw.lambda13 <= 0.0) throw ValidationError("lambda13 must be positive");
  require_nonnegative(raw.density_per_cc, "density");
  require_nonnegative(raw.doppler_delta, "doppler_delta");
  if (raw.prefactor_eta) require_nonnegative(*raw.prefactor_eta, "prefactor_eta");

  SystemParams out = raw;
  out.notes.clear();
  if (!out.prefactor_eta)
    out.prefactor_eta = dipole_prefactor(out.lambda13, out.gamma1, out.density_per_cc);
  if (out.gamma1 != out.gamma2)
    out.notes.push_back("gamma1 != gamma2: equal-decay simplification violated; "
                        "response normalization uses gamma1");
  return out;
}

void validate_drives(const DriveFields& drives) {
  if (!std::isfinite(drives.control_G.real()) || !std::isfinite(drives.control_G.imag()))
    throw ValidationError("G must be finite");
  if (!std::isfinite(drives.coupling_Omega.real()) || !std::isfinite(drives.coupling_Omega.imag()))
    throw ValidationError("Omega must be finite");
  require_finite(drives.delta2, "Delta2");
  require_finite(drives.delta3, "Delta3");
}

void validate_probe(const ProbeSpec& probe) {
  if (probe.delta1.empty()) throw ValidationError("probe grid must be non-empty");
  for (std::size_t i = 0; i < probe.delta1.size(); ++i) {
    require_finite(probe.delta1[i], "Delta1");
    if (i > 0 && probe.delta1[i] <= probe.delta1[i - 1])
      throw ValidationError("probe grid must be strictly increasing");
  }
}

double dipole_prefactor(double lambda13, double gamma1, double density_per_cc) {
  if (!(lambda13 > 0.0)) throw ValidationError("lambda13 must be positive");
  if (!(gamma1 > 0.0)) throw ValidationError("gamma1 must be positive");
  if (!(density_per_cc >= 0.0)) throw ValidationError("density must be nonnegative");
  const double density_per_m3 = density_per_cc * 1e6;
  const double pi3 = constants::pi * constants::pi * constants::pi;
  return 3.0 * density_per_m3 * lambda13 * lambda13 * lambda13 / (16.0 * pi3);
}

double magnetic_field_for_rabi(double omega, double mu_eff) {
  if (!(mu_eff > 0.0)) throw ValidationError("mu_eff must be positive");
  if (!(omega >= 0.0)) throw ValidationError("Omega must be nonnegative");
  return constants::tesla_to_gauss * constants::hbar * omega / mu_eff;
}

double doppler_width_from_temperature(double temperature, double mass_kg, double omega1) {
  if (!(temperature >= 0.0)) throw ValidationError("temperature must be nonnegative");
  if (!(mass_kg > 0.0)) throw ValidationError("mass must be positive");
  if (!(omega1 > 0.0)) throw ValidationError("omega1 must be positive");
  const double c = constants::speed_of_light;
  return std::sqrt(constants::boltzmann * temperature * omega1 * omega1 / (mass_kg * c * c));
}

ProbeSpec make_probe_grid(double delta1_min, double delta1_max, int points) {
  if (points < 1) throw ValidationError("probe grid needs at least one point");
  if (points > 1 && !(delta1_max > delta1_min))
    throw ValidationError("probe grid must be strictly increasing");
  ProbeSpec probe;
  probe.delta1.resize(points);
  if (points == 1) {
    probe.delta1[0] = delta1_min;
  } else {
    const double step = (delta1_max - delta1_min) / (points - 1);
    for (int i = 0; i < points; ++i) probe.delta1[i] = delta1_min + i * step;
  }
  validate_probe(probe);
  return probe;
}

}  // namespace lambdaknob
