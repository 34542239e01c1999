#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lambdaknob/liouville.hpp"
#include "lambdaknob/model.hpp"

namespace lambdaknob {

/// One probe detuning's susceptibility.  chi_norm is the plotted quantity
/// chi13 * hbar * gamma / (N |d13|^2), i.e. sigma13+; chi_phys = eta * chi_norm.
struct ResponseSample {
  double delta1 = 0.0;
  Complex chi_norm;
  Complex chi_phys;
};

enum class QuadratureScheme { gauss_hermite };

/// Velocity averaging: weight p(x) ~ exp(-x^2 / 2 delta^2) over the shared
/// shift Delta1 -> Delta1 - x, Delta2 -> Delta2 - x (Delta3 untouched, so
/// Delta4 is invariant under the shift).
struct DopplerSpec {
  double delta = 0.0;  ///< rad/s; 0 collapses to the unaveraged response
  int nodes = 64;
  QuadratureScheme scheme = QuadratureScheme::gauss_hermite;
};

struct GroupIndexResult {
  double n_g = 1.0;
  double n_g_half_step = 1.0;     ///< recomputed with h/2 for the convergence check
  bool derivative_converged = true;  ///< h vs h/2 agree within 1%
  /// |Im chi| / (|d Re chi / d Delta1| * gamma): size of the residual
  /// absorption/gain relative to the dispersive slope at the evaluation point.
  double im_ratio = 0.0;
};

struct KnobScan {
  std::vector<double> omega;  ///< rad/s grid of the lower-level coupling
  std::vector<double> n_g;    ///< NaN where the steady state was degenerate
  std::vector<std::size_t> skipped;  ///< indices of degenerate grid points
  /// Omega intervals, bisected to width 1e-3 gamma, bracketing each sign
  /// change of n_g.
  std::vector<std::pair<double, double>> crossovers;
  bool doppler_averaged = false;
};

ResponseSample susceptibility(const SystemParams& params, const DriveFields& drives,
                              double delta1);

ResponseSample doppler_susceptibility(const SystemParams& params, const DriveFields& drives,
                                      double delta1, const DopplerSpec& doppler);

/// chi_norm at several probe detunings, optionally Doppler averaged; one
/// steady-state solve per velocity class is shared across all detunings.
/// Node contributions accumulate in ascending-node order.
std::vector<Complex> chi_norm_profile(const SystemParams& params, const DriveFields& drives,
                                      std::span<const double> delta1,
                                      const DopplerSpec* doppler = nullptr);

std::vector<ResponseSample> susceptibility_scan(const SystemParams& params,
                                                const DriveFields& drives,
                                                std::span<const double> delta1,
                                                const DopplerSpec* doppler = nullptr);

/// n_g = 1 + 2 pi Re chi_phys + 2 pi omega1 d(Re chi_phys)/dDelta1 with
/// omega1 = 2 pi c / lambda13 + Delta1; central difference of step h
/// (default 1e-3 gamma when step <= 0), cross-checked against h/2.
GroupIndexResult group_index(const SystemParams& params, const DriveFields& drives,
                             double delta1, const std::optional<DopplerSpec>& doppler = {},
                             double step = 0.0);

/// n_g at Delta1 = 0 across an Omega grid with sign-change bracketing.
/// Degenerate grid points are recorded and skipped.
KnobScan knob_scan(const SystemParams& params, const DriveFields& drives_template,
                   std::span<const double> omega_grid,
                   const std::optional<DopplerSpec>& doppler = {});

}  // namespace lambdaknob
