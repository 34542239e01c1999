#include "lambdaknob/liouville.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "lambdaknob/errors.hpp"

namespace lambdaknob {

namespace {

constexpr Complex kI{0.0, 1.0};

using Matrix3 = Eigen::Matrix3cd;
using Augmented = Eigen::Matrix<Complex, 10, 9>;
using AugmentedRhs = Eigen::Matrix<Complex, 10, 1>;

// sigma -> A sigma
LiouvilleMatrix left_mult(const Matrix3& a) {
  LiouvilleMatrix out = LiouvilleMatrix::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out(state_index(i, j), state_index(k, j)) += a(i, k);
  return out;
}

// sigma -> sigma A
LiouvilleMatrix right_mult(const Matrix3& a) {
  LiouvilleMatrix out = LiouvilleMatrix::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out(state_index(i, j), state_index(i, k)) += a(k, j);
  return out;
}

// sigma -> A sigma B
LiouvilleMatrix sandwich(const Matrix3& a, const Matrix3& b) {
  LiouvilleMatrix out = LiouvilleMatrix::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          out(state_index(i, j), state_index(k, l)) += a(i, k) * b(l, j);
  return out;
}

// sigma -> i [A, sigma]
LiouvilleMatrix commutator_action(const Matrix3& a) {
  return kI * (left_mult(a) - right_mult(a));
}

Augmented trace_augmented(const LiouvilleMatrix& m) {
  Augmented aug = Augmented::Zero();
  aug.topRows<9>() = m;
  aug(9, k11) = aug(9, k22) = aug(9, k33) = 1.0;
  return aug;
}

}  // namespace

int state_index(int i, int j) {
  static constexpr int map[3][3] = {{k11, k12, k13}, {k21, k22, k23}, {k31, k32, k33}};
  return map[i][j];
}

StateVector vectorize(const Eigen::Matrix3cd& sigma) {
  StateVector v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v(state_index(i, j)) = sigma(i, j);
  return v;
}

Eigen::Matrix3cd unvectorize(const StateVector& v) {
  Eigen::Matrix3cd sigma;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) sigma(i, j) = v(state_index(i, j));
  return sigma;
}

Generator assemble_generator(const SystemParams& params, const DriveFields& drives,
                             const GeneratorOptions& options) {
  // Rotating-frame drive Hamiltonian (hbar = 1, lower level |3> as reference):
  //   H = -(D2+D3)|1><1| - D3|2><2| - (G|1><2| + Omega|2><3| + h.c.)
  Matrix3 h = Matrix3::Zero();
  h(0, 0) = -(drives.delta2 + drives.delta3);
  h(1, 1) = -drives.delta3;
  h(0, 1) = -drives.control_G;
  h(1, 0) = -std::conj(drives.control_G);
  h(1, 2) = -drives.coupling_Omega;
  h(2, 1) = -std::conj(drives.coupling_Omega);

  LiouvilleMatrix drift = -kI * (left_mult(h) - right_mult(h));

  // Population decay |1> -> |3> at 2*gamma1 and |1> -> |2> at 2*gamma2.
  Matrix3 c13 = Matrix3::Zero();
  c13(2, 0) = std::sqrt(2.0 * params.gamma1);
  Matrix3 c12 = Matrix3::Zero();
  c12(1, 0) = std::sqrt(2.0 * params.gamma2);
  for (const Matrix3& c : {c13, c12}) {
    const Matrix3 cdc = c.adjoint() * c;
    drift += sandwich(c, c.adjoint()) - 0.5 * (left_mult(cdc) + right_mult(cdc));
  }

  // Collisional dephasing damps each coherence pair individually.
  const double gm[3][3] = {{0.0, params.Gamma12, params.Gamma13},
                           {params.Gamma12, 0.0, params.Gamma23},
                           {params.Gamma13, params.Gamma23, 0.0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) drift(state_index(i, j), state_index(i, j)) -= gm[i][j];

  Matrix3 lower = Matrix3::Zero();
  lower(0, 2) = 1.0;  // |1><3|

  Generator gen;
  gen.drift = drift;
  gen.v_plus = commutator_action(lower);
  gen.v_minus = commutator_action(lower.adjoint());
  gen.gamma_ref = params.gamma_ref();

  if (options.probe_self_coupling_in_ground_coherence) {
    // Validation-only variant: move the probe term in the 2-3 row from
    // sigma_21 onto sigma_23 (and mirror in the conjugate row).
    gen.v_plus(k23, k21) = 0.0;
    gen.v_plus(k23, k23) = -kI;
    gen.v_minus(k32, k12) = 0.0;
    gen.v_minus(k32, k32) = kI;
  }
  return gen;
}

DensityMatrix steady_state(const Generator& gen) {
  // Null-space dimension of L0 decides uniqueness; the smallest singular
  // value is the legitimate steady-state direction.
  Eigen::JacobiSVD<LiouvilleMatrix> svd(gen.drift);
  const auto& sv = svd.singularValues();
  if (sv(7) < 1e-8 * sv(0)) throw NumericalError("steady state not unique");

  Augmented aug = trace_augmented(gen.drift);
  AugmentedRhs rhs = AugmentedRhs::Zero();
  rhs(9) = 1.0;
  const StateVector v = aug.colPivHouseholderQr().solve(rhs);

  Eigen::Matrix3cd sigma = unvectorize(v);
  sigma = 0.5 * (sigma + sigma.adjoint()).eval();

  const double residual = (gen.drift * vectorize(sigma)).norm();
  if (!(residual <= 1e-10 * gen.drift.norm()))
    throw NumericalError("steady state residual too large");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(sigma);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw NumericalError("steady state not positive semidefinite");

  return DensityMatrix{sigma};
}

namespace {

StateVector solve_shifted(const LiouvilleMatrix& drift, double delta4, const StateVector& source) {
  Augmented aug = trace_augmented(drift + kI * delta4 * LiouvilleMatrix::Identity());
  AugmentedRhs rhs = AugmentedRhs::Zero();
  rhs.head<9>() = source;

  Eigen::ColPivHouseholderQR<Augmented> qr(aug);
  const double r0 = std::abs(qr.matrixR()(0, 0));
  const double r8 = std::abs(qr.matrixR()(8, 8));
  if (!(r8 > 1e-12 * r0)) {
    std::ostringstream msg;
    msg << "resonant shifted system at Delta4 = " << delta4
        << " (condition estimate " << (r8 > 0.0 ? r0 / r8 : std::numeric_limits<double>::infinity())
        << ")";
    throw NumericalError(msg.str());
  }
  StateVector out = qr.solve(rhs);
  const double residual = (aug * out - rhs).norm();
  if (!(residual <= 1e-8 * (source.norm() + 1e-300))) {
    std::ostringstream msg;
    msg << "resonant or ill-conditioned shifted system at Delta4 = " << delta4 << " (residual "
        << residual << ", condition estimate " << r0 / r8 << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

}  // namespace

StateVector linear_response(const Generator& gen, const DensityMatrix& sigma0, double delta4) {
  const StateVector source = -gen.gamma_ref * (gen.v_plus * vectorize(sigma0.sigma));
  return solve_shifted(gen.drift, delta4, source);
}

ResponseProblem::ResponseProblem(const SystemParams& params, const DriveFields& drives,
                                 const GeneratorOptions& options)
    : gen_(assemble_generator(params, drives, options)),
      sigma0_(steady_state(gen_)),
      source_(-gen_.gamma_ref * (gen_.v_plus * vectorize(sigma0_.sigma))) {}

StateVector ResponseProblem::response(double delta4) const {
  return solve_shifted(gen_.drift, delta4, source_);
}

Complex ResponseProblem::chi_norm(double delta4) const { return response(delta4)(k13); }

}  // namespace lambdaknob
