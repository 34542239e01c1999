#include "lambdaknob/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lambdaknob/errors.hpp"
#include "lambdaknob/quadrature.hpp"
#include "lambdaknob/threading.hpp"

namespace lambdaknob {

namespace {

ResponseSample make_sample(const SystemParams& params, double delta1, Complex chi_norm) {
  return ResponseSample{delta1, chi_norm, params.eta() * chi_norm};
}

std::vector<Complex> profile_unaveraged(const SystemParams& params, const DriveFields& drives,
                                        std::span<const double> delta1) {
  ResponseProblem problem(params, drives);
  std::vector<Complex> out(delta1.size());
  for (std::size_t i = 0; i < delta1.size(); ++i)
    out[i] = problem.chi_norm(delta4(delta1[i], drives));
  return out;
}

}  // namespace

std::vector<Complex> chi_norm_profile(const SystemParams& params, const DriveFields& drives,
                                      std::span<const double> delta1,
                                      const DopplerSpec* doppler) {
  if (doppler && doppler->nodes < 1) throw ValidationError("doppler nodes must be >= 1");
  if (!doppler || doppler->delta <= 0.0 || doppler->nodes == 1)
    return profile_unaveraged(params, drives, delta1);

  const HermiteRule rule = hermite_rule(doppler->nodes);
  const double norm = std::sqrt(constants::pi);

  // Delta4 is invariant under the velocity shift: both Delta1 and Delta2 move
  // by the same kv, so the shifted solves reuse the unshifted Delta4 values.
  std::vector<double> delta4_values(delta1.size());
  for (std::size_t i = 0; i < delta1.size(); ++i) delta4_values[i] = delta4(delta1[i], drives);

  const int nodes = doppler->nodes;
  std::vector<std::vector<Complex>> per_node(nodes);

  parallel_for_index(nodes, [&](std::size_t n) {
    const double kv = std::sqrt(2.0) * doppler->delta * rule.nodes[n];
    DriveFields shifted = drives;
    shifted.delta2 -= kv;
    try {
      ResponseProblem problem(params, shifted);
      auto& row = per_node[n];
      row.resize(delta4_values.size());
      for (std::size_t i = 0; i < delta4_values.size(); ++i)
        row[i] = problem.chi_norm(delta4_values[i]);
    } catch (const NumericalError& err) {
      std::ostringstream msg;
      msg << err.what() << " (velocity class kv = " << kv << " rad/s)";
      throw NumericalError(msg.str());
    }
  });

  // Fixed ascending-node reduction keeps results independent of scheduling.
  std::vector<Complex> out(delta1.size(), Complex(0.0, 0.0));
  for (int n = 0; n < nodes; ++n) {
    const double w = rule.weights[n] / norm;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * per_node[n][i];
  }
  return out;
}

ResponseSample susceptibility(const SystemParams& params, const DriveFields& drives,
                              double delta1) {
  ResponseProblem problem(params, drives);
  return make_sample(params, delta1, problem.chi_norm(delta4(delta1, drives)));
}

ResponseSample doppler_susceptibility(const SystemParams& params, const DriveFields& drives,
                                      double delta1, const DopplerSpec& doppler) {
  const double grid[1] = {delta1};
  const auto chi = chi_norm_profile(params, drives, grid, &doppler);
  return make_sample(params, delta1, chi[0]);
}

std::vector<ResponseSample> susceptibility_scan(const SystemParams& params,
                                                const DriveFields& drives,
                                                std::span<const double> delta1,
                                                const DopplerSpec* doppler) {
  const auto chi = chi_norm_profile(params, drives, delta1, doppler);
  std::vector<ResponseSample> out(delta1.size());
  for (std::size_t i = 0; i < delta1.size(); ++i) out[i] = make_sample(params, delta1[i], chi[i]);
  return out;
}

GroupIndexResult group_index(const SystemParams& params, const DriveFields& drives,
                             double delta1, const std::optional<DopplerSpec>& doppler,
                             double step) {
  const double gamma = params.gamma_ref();
  const double h = step > 0.0 ? step : 1e-3 * gamma;

  const double grid[5] = {delta1 - h, delta1 - 0.5 * h, delta1, delta1 + 0.5 * h, delta1 + h};
  const auto chi = chi_norm_profile(params, drives, grid, doppler ? &*doppler : nullptr);

  const double eta = params.eta();
  const double omega1 = params.omega13() + delta1;
  const double slope_h = (chi[4].real() - chi[0].real()) / (2.0 * h) * eta;
  const double slope_h2 = (chi[3].real() - chi[1].real()) / h * eta;
  const double re_chi_phys = chi[2].real() * eta;

  GroupIndexResult result;
  result.n_g = 1.0 + constants::two_pi * re_chi_phys + constants::two_pi * omega1 * slope_h;
  result.n_g_half_step =
      1.0 + constants::two_pi * re_chi_phys + constants::two_pi * omega1 * slope_h2;
  const double scale = std::max(std::abs(result.n_g_half_step), 1e-300);
  result.derivative_converged = std::abs(result.n_g - result.n_g_half_step) <= 0.01 * scale;

  const double norm_slope = (chi[4].real() - chi[0].real()) / (2.0 * h);
  const double slope_scale = std::abs(norm_slope) * gamma;
  result.im_ratio =
      slope_scale > 0.0 ? std::abs(chi[2].imag()) / slope_scale : std::numeric_limits<double>::infinity();
  return result;
}

namespace {

double knob_point(const SystemParams& params, const DriveFields& drives_template, double omega,
                  const std::optional<DopplerSpec>& doppler) {
  DriveFields drives = drives_template;
  drives.coupling_Omega = omega;
  return group_index(params, drives, 0.0, doppler).n_g;
}

}  // namespace

KnobScan knob_scan(const SystemParams& params, const DriveFields& drives_template,
                   std::span<const double> omega_grid,
                   const std::optional<DopplerSpec>& doppler) {
  KnobScan scan;
  scan.omega.assign(omega_grid.begin(), omega_grid.end());
  scan.n_g.assign(omega_grid.size(), std::numeric_limits<double>::quiet_NaN());
  scan.doppler_averaged = doppler.has_value() && doppler->delta > 0.0;

  std::vector<char> failed(omega_grid.size(), 0);
  parallel_for_index(omega_grid.size(), [&](std::size_t i) {
    try {
      scan.n_g[i] = knob_point(params, drives_template, omega_grid[i], doppler);
    } catch (const NumericalError&) {
      failed[i] = 1;
    }
  });
  for (std::size_t i = 0; i < failed.size(); ++i)
    if (failed[i]) scan.skipped.push_back(i);

  // Bracket each sign change between adjacent valid grid points, then bisect
  // to a width of 1e-3 gamma.
  const double width_target = 1e-3 * params.gamma_ref();
  std::ptrdiff_t prev = -1;
  for (std::size_t i = 0; i < scan.n_g.size(); ++i) {
    if (std::isnan(scan.n_g[i])) continue;
    if (prev >= 0 && scan.n_g[prev] != 0.0 && scan.n_g[i] != 0.0 &&
        std::signbit(scan.n_g[prev]) != std::signbit(scan.n_g[i])) {
      double lo = scan.omega[prev], hi = scan.omega[i];
      double f_lo = scan.n_g[prev];
      while (hi - lo > width_target) {
        const double mid = 0.5 * (lo + hi);
        double f_mid;
        try {
          f_mid = knob_point(params, drives_template, mid, doppler);
        } catch (const NumericalError&) {
          break;  // keep the last valid bracket
        }
        if (f_mid == 0.0) {
          lo = hi = mid;
          break;
        }
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      scan.crossovers.emplace_back(lo, hi);
    }
    prev = static_cast<std::ptrdiff_t>(i);
  }
  return scan;
}

}  // namespace lambdaknob
