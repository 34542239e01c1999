#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "lambdaknob/constants.hpp"

namespace lambdaknob {

/// Atomic constants of the three-level Lambda system.  All rates and
/// frequencies are angular (rad/s).  Level order: |1> excited, |2> and |3>
/// metastable lower levels; the probe acts on |1><->|3>.
struct SystemParams {
  double gamma1 = 0.0;  ///< half population decay rate |1> -> |3> (decay 2*gamma1)
  double gamma2 = 0.0;  ///< half population decay rate |1> -> |2> (decay 2*gamma2)
  double Gamma12 = 0.0;  ///< collisional dephasing of the 1-2 coherence
  double Gamma13 = 0.0;  ///< collisional dephasing of the 1-3 coherence
  double Gamma23 = 0.0;  ///< collisional dephasing of the 2-3 coherence
  double lambda13 = 780e-9;    ///< probe transition wavelength (m)
  double density_per_cc = 0.0;  ///< atom number density N (cm^-3)
  double doppler_delta = 0.0;   ///< Doppler width delta (rad/s); 0 = cold medium

  /// Dimensionless susceptibility prefactor eta = N |d13|^2 / (hbar*gamma).
  /// Left unset it is derived from (lambda13, gamma1, density) during
  /// validation; an explicit value overrides the derived one exactly.
  std::optional<double> prefactor_eta;

  /// Non-fatal conditions noticed during validation (e.g. gamma1 != gamma2,
  /// which breaks the equal-decay simplification the response normalization
  /// assumes).
  std::vector<std::string> notes;

  /// Rate used to normalize the probe expansion and the susceptibility.
  double gamma_ref() const { return gamma1; }

  /// Probe transition angular frequency 2*pi*c / lambda13.
  double omega13() const { return constants::two_pi * constants::speed_of_light / lambda13; }

  /// Validated prefactor; only meaningful after validate_params().
  double eta() const { return prefactor_eta.value(); }
};

/// Classical drive fields: control on |1><->|2>, lower-level coupling on
/// |2><->|3>.  Rabi frequencies are 2G and 2Omega.
struct DriveFields {
  std::complex<double> control_G;      ///< G (rad/s)
  std::complex<double> coupling_Omega; ///< Omega (rad/s)
  double delta2 = 0.0;  ///< control detuning (rad/s)
  double delta3 = 0.0;  ///< lower-level coupling detuning (rad/s)
};

/// Probe detuning grid (rad/s), strictly increasing.
struct ProbeSpec {
  std::vector<double> delta1;
};

/// Four-photon detuning Delta4 = Delta1 - Delta2 - Delta3.
inline double delta4(double delta1, const DriveFields& drives) {
  return delta1 - drives.delta2 - drives.delta3;
}

/// Checks ranges, fills the derived prefactor_eta when absent and records
/// non-fatal notes.  Throws ValidationError naming the offending field.
/// Idempotent: validating an already validated value returns it unchanged.
SystemParams validate_params(SystemParams raw);

/// Throws ValidationError if any drive entry is non-finite.
void validate_drives(const DriveFields& drives);

/// Throws ValidationError unless the grid is non-empty, finite and strictly
/// increasing.
void validate_probe(const ProbeSpec& probe);

/// eta = 3 N lambda^3 / (16 pi^3): the dipole matrix element is eliminated
/// through the spontaneous-emission rate 2*gamma1 = 4 w13^3 |d13|^2 / (3 hbar c^3)
/// (Gaussian units), so eta is independent of gamma1 once the normalization
/// rate is taken equal to gamma1.
double dipole_prefactor(double lambda13, double gamma1, double density_per_cc);

/// Effective magnetic moment that maps Omega = 100 * (3 pi MHz) to 99.3 G,
/// about 1.08 Bohr magnetons.
inline constexpr double default_mu_eff =
    constants::tesla_to_gauss * constants::hbar * (100.0 * 3.0 * constants::pi * 1e6) / 99.3;

/// Static field (Gauss) required for a lower-level coupling of Rabi
/// frequency Omega (rad/s) through a magnetic moment mu_eff (J/T): B = hbar*Omega/mu_eff.
double magnetic_field_for_rabi(double omega, double mu_eff = default_mu_eff);

/// delta = sqrt(kB T w1^2 / (M c^2)) for temperature T (K), atomic mass M (kg)
/// and probe frequency w1 (rad/s).
double doppler_width_from_temperature(double temperature, double mass_kg, double omega1);

ProbeSpec make_probe_grid(double delta1_min, double delta1_max, int points);

}  // namespace lambdaknob
