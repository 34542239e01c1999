#pragma once

#include <optional>
#include <vector>

#include "lambdaknob/liouville.hpp"

namespace lambdaknob {
namespace oracle {

/// Strided record of a direct time integration of the full master equation
/// with the probe terms kept explicitly time dependent.
struct Trajectory {
  std::vector<double> time;        ///< sample times (s)
  std::vector<StateVector> states; ///< sigma(t) in the fixed component order
  double probe_g = 0.0;            ///< probe coupling g (rad/s)
  double delta4 = 0.0;
  double gamma_ref = 0.0;
  double dt = 0.0;                 ///< integration step (s)
  double trace_drift = 0.0;        ///< max |tr sigma - 1| seen along the run
  double hermiticity_drift = 0.0;  ///< max conjugate-pair mismatch seen
};

struct IntegrateOptions {
  int stored_samples = 16384;  ///< trajectory is subsampled to about this many points
  GeneratorOptions generator;  ///< probe-term variant, for validation runs
};

/// Classical fixed-step 4th-order integration of
///   d sigma/dt = L0 sigma + g e^{-i Delta4 t} V+ sigma + g* e^{+i Delta4 t} V- sigma
/// from sigma(0) = steady state of L0 (or diag(0,0,1) when degenerate).
/// Requires dt <= 1 / (50 max(|G|, |Omega|, gamma, |Delta4|)); throws
/// NumericalError advising a smaller step if the trace drifts beyond 1e-6.
Trajectory integrate(const SystemParams& params, const DriveFields& drives, double probe_g,
                     double delta4, double t_end, double dt, const IntegrateOptions& options = {});

/// Least-squares fit of sigma13(t) to c0 + c+ e^{-i Delta4 t} + c- e^{+i Delta4 t}
/// over [window_start, end]; returns gamma * c+ / g, the direct estimate of
/// sigma13+.  The window must cover at least one beat period 2 pi / |Delta4|
/// and start at least ten decay times 1/gamma into the run.  At Delta4 = 0
/// the sidebands are indistinguishable from the offset; the returned value is
/// gamma * (mean - sigma13(0)) / g, the combined stationary probe response.
Complex demodulate(const Trajectory& traj, double delta4,
                   std::optional<double> window_start = std::nullopt);

}  // namespace oracle
}  // namespace lambdaknob
