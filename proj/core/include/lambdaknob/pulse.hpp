#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "lambdaknob/model.hpp"
#include "lambdaknob/response.hpp"

namespace lambdaknob {
namespace pulse {

/// Gaussian probe pulse: E(t) ~ E0 exp[-(t - center)^2 / tau^2] with spectrum
/// E(w) = E0 / sqrt(pi Gamma^2) exp[-(w - carrier)^2 / Gamma^2] and
/// Gamma * tau = 2 enforced.
struct PulseSpec {
  double amplitude = 1.0;       ///< E0, arbitrary units
  double spectral_width = 0.0;  ///< Gamma (rad/s)
  double duration = 0.0;        ///< tau (s)
  double carrier = 0.0;         ///< w0 (rad/s); probe resonance in scenarios
  double length = 0.0;          ///< medium length L (m)
  double center = 0.0;          ///< input pulse center time (s)
};

PulseSpec from_spectral_width(double gamma_spectral, double carrier, double length,
                              double amplitude = 1.0);
PulseSpec from_duration(double tau, double carrier, double length, double amplitude = 1.0);

/// Throws ValidationError unless widths are positive, length/carrier valid
/// and Gamma * tau = 2 within 1e-12 relative.
void validate_pulse(const PulseSpec& spec);

struct GridOptions {
  int samples = 4096;              ///< uniform spectral samples (power of two)
  double half_width_in_widths = 6.0;  ///< grid half width in units of Gamma
};

struct PulseTrace {
  std::vector<double> time;              ///< s, uniform, ascending
  std::vector<double> vacuum_intensity;  ///< peak-normalized |E|^2 through vacuum
  std::vector<double> medium_intensity;  ///< peak-normalized |E|^2 through the medium
  double peak_delay = 0.0;   ///< s; negative = advancement
  double distortion = 0.0;   ///< RMS of peak-aligned, peak-normalized difference
  double max_transfer = 0.0; ///< max |transfer| over the grid (diagnostic)
};

/// Sampled spectrum on the given angular-frequency grid.  Throws
/// ValidationError when the grid leaves 0.1% or more of the spectral mass
/// outside its span.
std::vector<std::complex<double>> spectrum(const PulseSpec& spec, std::span<const double> omega);

/// Propagates the pulse through length L of the medium using the spectral
/// transfer function exp[i (w/c) (1 + 2 pi chi_phys(w)) L]; the vacuum
/// reference uses chi = 0.  Throws NumericalError("medium unstable over
/// band") when the output spectral amplitude anywhere exceeds 1e3 times the
/// input peak.  Peak positions are located by 3-point quadratic
/// interpolation of the sampled intensity.
PulseTrace propagate(const PulseSpec& spec, const SystemParams& params,
                     const DriveFields& drives, const std::optional<DopplerSpec>& doppler = {},
                     const GridOptions& grid = {});

}  // namespace pulse
}  // namespace lambdaknob
