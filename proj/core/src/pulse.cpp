#include "lambdaknob/pulse.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

#include "lambdaknob/errors.hpp"
#include "lambdaknob/threading.hpp"

namespace lambdaknob {
namespace pulse {

namespace {

using std::complex;

struct Peak {
  double location;
  double value;
};

// 3-point quadratic interpolation around the discrete maximum.
Peak locate_peak(std::span<const double> time, std::span<const double> intensity) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < intensity.size(); ++i)
    if (intensity[i] > intensity[k]) k = i;
  if (k == 0 || k + 1 == intensity.size()) return {time[k], intensity[k]};

  const double ym = intensity[k - 1], y0 = intensity[k], yp = intensity[k + 1];
  const double denom = ym - 2.0 * y0 + yp;
  if (denom >= 0.0) return {time[k], y0};  // flat or degenerate, keep the sample
  const double dt = time[k + 1] - time[k];
  const double shift = 0.5 * (ym - yp) / denom;
  return {time[k] + shift * dt, y0 - 0.25 * (ym - yp) * shift};
}

double interpolate(std::span<const double> time, std::span<const double> values, double t) {
  if (t <= time.front()) return values.front();
  if (t >= time.back()) return values.back();
  const double dt = time[1] - time[0];
  const auto k = static_cast<std::size_t>((t - time.front()) / dt);
  const std::size_t k1 = std::min(k + 1, time.size() - 1);
  const double f = (t - time[k]) / dt;
  return (1.0 - f) * values[k] + f * values[k1];
}

}  // namespace

PulseSpec from_spectral_width(double gamma_spectral, double carrier, double length,
                              double amplitude) {
  PulseSpec spec;
  spec.amplitude = amplitude;
  spec.spectral_width = gamma_spectral;
  spec.duration = 2.0 / gamma_spectral;
  spec.carrier = carrier;
  spec.length = length;
  validate_pulse(spec);
  return spec;
}

PulseSpec from_duration(double tau, double carrier, double length, double amplitude) {
  PulseSpec spec;
  spec.amplitude = amplitude;
  spec.duration = tau;
  spec.spectral_width = 2.0 / tau;
  spec.carrier = carrier;
  spec.length = length;
  validate_pulse(spec);
  return spec;
}

void validate_pulse(const PulseSpec& spec) {
  if (!(spec.spectral_width > 0.0)) throw ValidationError("pulse spectral width must be positive");
  if (!(spec.duration > 0.0)) throw ValidationError("pulse duration must be positive");
  if (!(spec.carrier > 0.0)) throw ValidationError("pulse carrier must be positive");
  if (!(spec.length > 0.0)) throw ValidationError("medium length must be positive");
  if (!std::isfinite(spec.amplitude) || !std::isfinite(spec.center))
    throw ValidationError("pulse amplitude and center must be finite");
  const double product = spec.spectral_width * spec.duration;
  if (std::abs(product - 2.0) > 1e-12 * 2.0)
    throw ValidationError("pulse requires Gamma * tau = 2");
}

std::vector<complex<double>> spectrum(const PulseSpec& spec, std::span<const double> omega) {
  if (omega.size() < 2) throw ValidationError("spectral grid needs at least two points");
  const double gamma_s = spec.spectral_width;

  // Fraction of |S|^2 mass outside the grid span, per Gaussian tail integral.
  const double lo = spec.carrier - omega.front();
  const double hi = omega.back() - spec.carrier;
  const double outside =
      0.5 * (std::erfc(std::sqrt(2.0) * lo / gamma_s) + std::erfc(std::sqrt(2.0) * hi / gamma_s));
  if (!(outside < 1e-3))
    throw ValidationError("spectral grid too narrow: 0.1% or more of the pulse mass lies outside");

  const double peak = spec.amplitude / std::sqrt(constants::pi * gamma_s * gamma_s);
  std::vector<complex<double>> out(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double nu = omega[i] - spec.carrier;
    out[i] = peak * std::exp(-nu * nu / (gamma_s * gamma_s)) *
             std::exp(complex<double>(0.0, nu * spec.center));
  }
  return out;
}

PulseTrace propagate(const PulseSpec& spec, const SystemParams& params,
                     const DriveFields& drives, const std::optional<DopplerSpec>& doppler,
                     const GridOptions& grid) {
  validate_pulse(spec);
  if (grid.samples < 16 || (grid.samples & (grid.samples - 1)) != 0)
    throw ValidationError("spectral samples must be a power of two, at least 16");
  if (!(grid.half_width_in_widths > 0.0)) throw ValidationError("grid half width must be positive");

  const int n = grid.samples;
  const double half_width = grid.half_width_in_widths * spec.spectral_width;
  const double dnu = 2.0 * half_width / n;

  std::vector<double> omega(n), delta1(n);
  for (int m = 0; m < n; ++m) {
    const double nu = (m - n / 2) * dnu;
    omega[m] = spec.carrier + nu;
    delta1[m] = nu;  // carrier sits on the probe resonance
  }

  const auto source = spectrum(spec, omega);
  const auto chi = chi_norm_profile(params, drives, delta1,
                                    doppler && doppler->delta > 0.0 ? &*doppler : nullptr);

  const double eta = params.eta();
  const double c = constants::speed_of_light;
  const double length = spec.length;

  std::vector<complex<double>> medium_spec(n), vacuum_spec(n);
  double max_transfer = 0.0;
  double peak_amp = 0.0;
  for (int m = 0; m < n; ++m) peak_amp = std::max(peak_amp, std::abs(source[m]));
  double max_output = 0.0;
  for (int m = 0; m < n; ++m) {
    const complex<double> chi_phys = eta * chi[m];
    const complex<double> vacuum_phase = complex<double>(0.0, omega[m] / c * length);
    const complex<double> medium_phase =
        complex<double>(0.0, 1.0) * (omega[m] / c) * (1.0 + constants::two_pi * chi_phys) * length;
    const complex<double> transfer = std::exp(medium_phase);
    max_transfer = std::max(max_transfer, std::abs(transfer));
    medium_spec[m] = source[m] * transfer;
    vacuum_spec[m] = source[m] * std::exp(vacuum_phase);
    max_output = std::max(max_output, std::abs(medium_spec[m]));
  }
  // Instability guard on the output spectrum: raw gain at frequencies that
  // carry no pulse energy cannot blow up the trace.
  if (!(max_output <= 1e3 * peak_amp)) throw NumericalError("medium unstable over band");

  // E(t_k) = (dnu/2pi) sum_m A_m e^{-i nu_m t_k} over the reciprocal grid
  // t_k = (k - n/2) dt, dt = 2pi/(n dnu); with the half-grid offsets folded
  // into (-1)^m / (-1)^k factors this is a plain forward DFT.
  const double dt = constants::two_pi / (n * dnu);
  Eigen::FFT<double> fft;
  auto to_time = [&](std::vector<complex<double>>& spec_in) {
    for (int m = 0; m < n; ++m)
      if (m & 1) spec_in[m] = -spec_in[m];
    std::vector<complex<double>> out;
    fft.fwd(out, spec_in);
    for (int k = 0; k < n; ++k)
      if (k & 1) out[k] = -out[k];
    return out;
  };
  auto medium_time = to_time(medium_spec);
  auto vacuum_time = to_time(vacuum_spec);

  PulseTrace trace;
  trace.max_transfer = max_transfer;
  trace.time.resize(n);
  trace.vacuum_intensity.resize(n);
  trace.medium_intensity.resize(n);
  const double scale = dnu / constants::two_pi;
  for (int k = 0; k < n; ++k) {
    trace.time[k] = (k - n / 2) * dt;
    trace.vacuum_intensity[k] = std::norm(scale * vacuum_time[k]);
    trace.medium_intensity[k] = std::norm(scale * medium_time[k]);
  }

  const Peak vac = locate_peak(trace.time, trace.vacuum_intensity);
  const Peak med = locate_peak(trace.time, trace.medium_intensity);
  trace.peak_delay = med.location - vac.location;

  if (vac.value > 0.0) {
    for (auto& v : trace.vacuum_intensity) v /= vac.value;
  }
  if (med.value > 0.0) {
    for (auto& v : trace.medium_intensity) v /= med.value;
  }

  // Distortion: RMS difference of the peak-aligned, peak-normalized pulses
  // where the vacuum pulse carries at least 1% of its peak.
  double sum = 0.0;
  std::size_t count = 0;
  for (int k = 0; k < n; ++k) {
    if (trace.vacuum_intensity[k] <= 0.01) continue;
    const double shifted =
        interpolate(trace.time, trace.medium_intensity, trace.time[k] + trace.peak_delay);
    const double diff = shifted - trace.vacuum_intensity[k];
    sum += diff * diff;
    ++count;
  }
  trace.distortion = count > 0 ? std::sqrt(sum / count) : 0.0;
  return trace;
}

}  // namespace pulse
}  // namespace lambdaknob
