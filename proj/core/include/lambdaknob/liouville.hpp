#pragma once

#include <Eigen/Dense>
#include <complex>

#include "lambdaknob/model.hpp"

namespace lambdaknob {

using Complex = std::complex<double>;
using LiouvilleMatrix = Eigen::Matrix<Complex, 9, 9>;
using StateVector = Eigen::Matrix<Complex, 9, 1>;

/// Fixed component order of the vectorized density matrix:
/// (s11, s22, s33, s12, s21, s13, s31, s23, s32).
enum StateIndex : int { k11 = 0, k22, k33, k12, k21, k13, k31, k23, k32 };

/// Flat index of sigma_{ij} (i, j in 0..2) in the order above.
int state_index(int i, int j);

StateVector vectorize(const Eigen::Matrix3cd& sigma);
Eigen::Matrix3cd unvectorize(const StateVector& v);

struct GeneratorOptions {
  /// Replaces the probe term in the 2-3 coherence equation by one that
  /// couples the coherence to itself instead of to sigma_21.  That variant is
  /// not generated by any Hermitian Hamiltonian and breaks purity
  /// conservation; it exists only so tests can demonstrate the difference.
  bool probe_self_coupling_in_ground_coherence = false;
};

/// Generator of the rotating-frame master equation, split as
///   d sigma/dt = L0 sigma + g e^{-i Delta4 t} V+ sigma + g* e^{+i Delta4 t} V- sigma.
/// L0 carries the control and lower-level couplings, detunings, decays and
/// dephasings; V+/V- carry the probe coupling structure i[|1><3|, .] and its
/// adjoint.
struct Generator {
  LiouvilleMatrix drift;    ///< L0
  LiouvilleMatrix v_plus;   ///< coefficient of g e^{-i Delta4 t}
  LiouvilleMatrix v_minus;  ///< coefficient of g* e^{+i Delta4 t}
  double gamma_ref = 0.0;   ///< normalization rate of the probe expansion
};

/// Zeroth-order steady state: Hermitian, trace one, positive semidefinite.
struct DensityMatrix {
  Eigen::Matrix3cd sigma;
};

/// Assembles the generator.  Total on validated inputs; entries are affine in
/// G, Omega, Delta2, Delta3.
Generator assemble_generator(const SystemParams& params, const DriveFields& drives,
                             const GeneratorOptions& options = {});

/// Unique trace-one null state of L0.  Throws NumericalError("steady state
/// not unique") when the null space has dimension > 1 (second-smallest
/// singular value below 1e-8 of the largest).
DensityMatrix steady_state(const Generator& gen);

/// First-order probe response sigma+ per unit g/gamma: the trace-free solution
/// of (L0 + i Delta4 I) sigma+ = -gamma V+ vec(sigma0).  Solved through the
/// trace-augmented least-squares system, which stays regular at Delta4 = 0
/// where the plain shifted matrix is singular but consistent.  Throws
/// NumericalError with a condition report on a genuinely resonant (traceless
/// null vector) system.
StateVector linear_response(const Generator& gen, const DensityMatrix& sigma0, double delta4);

/// Caches the generator, steady state and probe source for repeated response
/// solves at many detunings (susceptibility scans, quadrature nodes,
/// spectral grids).
class ResponseProblem {
 public:
  ResponseProblem(const SystemParams& params, const DriveFields& drives,
                  const GeneratorOptions& options = {});

  const Generator& generator() const { return gen_; }
  const DensityMatrix& sigma0() const { return sigma0_; }

  StateVector response(double delta4) const;
  /// sigma13+ element of the response: the normalized susceptibility.
  Complex chi_norm(double delta4) const;

 private:
  Generator gen_;
  DensityMatrix sigma0_;
  StateVector source_;
};

}  // namespace lambdaknob
