#include "lambdaknob/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lambdaknob/errors.hpp"

namespace lambdaknob {
namespace oracle {

namespace {

constexpr Complex kI{0.0, 1.0};

double hermiticity_mismatch(const StateVector& v) {
  double m = 0.0;
  m = std::max(m, std::abs(v(k21) - std::conj(v(k12))));
  m = std::max(m, std::abs(v(k31) - std::conj(v(k13))));
  m = std::max(m, std::abs(v(k32) - std::conj(v(k23))));
  m = std::max(m, std::abs(v(k11).imag()));
  m = std::max(m, std::abs(v(k22).imag()));
  m = std::max(m, std::abs(v(k33).imag()));
  return m;
}

}  // namespace

Trajectory integrate(const SystemParams& params, const DriveFields& drives, double probe_g,
                     double delta4, double t_end, double dt, const IntegrateOptions& options) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw ValidationError("t_end and dt must be positive");
  const double fastest = std::max({std::abs(drives.control_G), std::abs(drives.coupling_Omega),
                                   params.gamma_ref(), std::abs(delta4)});
  if (fastest > 0.0 && dt > 1.0 / (50.0 * fastest))
    throw ValidationError("dt too large: need dt <= 1/(50 max(|G|,|Omega|,gamma,|Delta4|))");

  const Generator gen = assemble_generator(params, drives, options.generator);
  StateVector y;
  try {
    y = vectorize(steady_state(gen).sigma);
  } catch (const NumericalError&) {
    Eigen::Matrix3cd fallback = Eigen::Matrix3cd::Zero();
    fallback(2, 2) = 1.0;
    y = vectorize(fallback);
  }

  const auto n_steps = static_cast<long>(std::ceil(t_end / dt));
  const long stride = std::max<long>(1, n_steps / std::max(1, options.stored_samples));

  Trajectory traj;
  traj.probe_g = probe_g;
  traj.delta4 = delta4;
  traj.gamma_ref = params.gamma_ref();
  traj.dt = dt;
  traj.time.reserve(static_cast<std::size_t>(n_steps / stride + 2));
  traj.states.reserve(static_cast<std::size_t>(n_steps / stride + 2));
  traj.time.push_back(0.0);
  traj.states.push_back(y);

  const auto rhs = [&](double t, const StateVector& v) -> StateVector {
    const Complex phase = std::exp(-kI * delta4 * t);
    return gen.drift * v + (probe_g * phase) * (gen.v_plus * v) +
           (probe_g * std::conj(phase)) * (gen.v_minus * v);
  };

  double t = 0.0;
  for (long step = 1; step <= n_steps; ++step) {
    const StateVector c1 = rhs(t, y);
    const StateVector c2 = rhs(t + 0.5 * dt, y + (0.5 * dt) * c1);
    const StateVector c3 = rhs(t + 0.5 * dt, y + (0.5 * dt) * c2);
    const StateVector c4 = rhs(t + dt, y + dt * c3);
    y += (dt / 6.0) * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
    t = step * dt;

    const double drift = std::abs(y(k11) + y(k22) + y(k33) - 1.0);
    traj.trace_drift = std::max(traj.trace_drift, drift);
    if (drift > 1e-6)
      throw NumericalError("trace drift exceeded 1e-6 during integration; reduce dt");

    if (step % stride == 0 || step == n_steps) {
      traj.time.push_back(t);
      traj.states.push_back(y);
      traj.hermiticity_drift = std::max(traj.hermiticity_drift, hermiticity_mismatch(y));
    }
  }
  return traj;
}

Complex demodulate(const Trajectory& traj, double delta4, std::optional<double> window_start) {
  if (traj.time.size() < 8) throw ValidationError("trajectory too short to demodulate");
  if (!(traj.probe_g != 0.0)) throw ValidationError("trajectory has zero probe amplitude");

  const double t_end = traj.time.back();
  const double start = window_start.value_or(0.5 * t_end);
  if (traj.gamma_ref > 0.0 && start < 10.0 / traj.gamma_ref)
    throw ValidationError("demodulation window must start at least ten decay times into the run");

  std::size_t first = 0;
  while (first < traj.time.size() && traj.time[first] < start) ++first;
  if (traj.time.size() - first < 4) throw ValidationError("demodulation window too short");
  const double window = t_end - traj.time[first];

  const double scale = traj.gamma_ref / traj.probe_g;
  if (delta4 == 0.0) {
    // Sidebands are stationary here; report the probe-induced shift of the
    // mean relative to the unprobed starting state.
    Complex mean = 0.0;
    for (std::size_t i = first; i < traj.states.size(); ++i) mean += traj.states[i](k13);
    mean /= static_cast<double>(traj.states.size() - first);
    return scale * (mean - traj.states.front()(k13));
  }

  if (window < constants::two_pi / std::abs(delta4))
    throw ValidationError("demodulation window shorter than one beat period");

  // Least squares against {1, e^{-i Delta4 t}, e^{+i Delta4 t}} separates the
  // offset and both sidebands without requiring an integer period count.
  Eigen::Matrix3cd gram = Eigen::Matrix3cd::Zero();
  Eigen::Vector3cd proj = Eigen::Vector3cd::Zero();
  for (std::size_t i = first; i < traj.states.size(); ++i) {
    const Complex e = std::exp(Complex(0.0, -delta4 * traj.time[i]));
    Eigen::Vector3cd basis;
    basis << Complex(1.0, 0.0), e, std::conj(e);
    gram += basis.conjugate() * basis.transpose();
    proj += basis.conjugate() * traj.states[i](k13);
  }
  const Eigen::Vector3cd coef = gram.fullPivLu().solve(proj);
  return scale * coef(1);
}

}  // namespace oracle
}  // namespace lambdaknob
