#pragma once

// Term-by-term transcription of the rotating-frame equations of motion, kept
// deliberately independent of the superoperator assembly in the library: each
// coefficient is written out by hand, row by row.  Rows for sigma_21/31/32
// are the complex-conjugate transcriptions, and the sigma_33 row closes the
// trace (populations sum to a constant).
//
// The probe enters through the instantaneous amplitudes gp = g e^{-i D4 t}
// and gm = g* e^{+i D4 t}, passed separately so tests can isolate the V+ and
// V- structure matrices.  `self_coupling_variant` switches the probe term in
// the 2-3 row from sigma_21 onto sigma_23, the alternative reading whose
// rejection the generator tests document.

#include <complex>

#include "lambdaknob/liouville.hpp"
#include "lambdaknob/model.hpp"

namespace lambdaknob::testsupport {

inline StateVector transcribed_rhs(const SystemParams& p, const DriveFields& d,
                                   const StateVector& v, Complex gp, Complex gm,
                                   bool self_coupling_variant = false) {
  const Complex I(0.0, 1.0);
  const Complex G = d.control_G;
  const Complex W = d.coupling_Omega;
  const double D2 = d.delta2, D3 = d.delta3;
  const double g1 = p.gamma1, g2 = p.gamma2;

  const Complex s11 = v(k11), s22 = v(k22), s33 = v(k33);
  const Complex s12 = v(k12), s21 = v(k21);
  const Complex s13 = v(k13), s31 = v(k31);
  const Complex s23 = v(k23), s32 = v(k32);

  StateVector out;

  out(k11) = I * G * s21 + I * gp * s31 - I * std::conj(G) * s12 - I * gm * s13
             - 2.0 * (g1 + g2) * s11;

  out(k22) = I * std::conj(G) * s12 + I * W * s32 - I * G * s21 - I * std::conj(W) * s23
             + 2.0 * g2 * s11;

  out(k12) = -(g1 + g2 + p.Gamma12 - I * D2) * s12 + I * G * s22 + I * gp * s32 - I * G * s11
             - I * std::conj(W) * s13;

  out(k13) = -(g1 + g2 + p.Gamma13 - I * (D2 + D3)) * s13 + I * G * s23 + I * gp * s33
             - I * gp * s11 - I * W * s12;

  out(k23) = -(p.Gamma23 - I * D3) * s23 + I * std::conj(G) * s13 + I * W * s33
             - I * W * s22 - I * gp * (self_coupling_variant ? s23 : s21);

  // trace closure: population leaving |1> lands in |3> at 2*gamma1, and the
  // coherent terms mirror the ones above with opposite sign
  out(k33) = 2.0 * g1 * s11 + I * gm * s13 - I * gp * s31 + I * std::conj(W) * s23 - I * W * s32;

  // conjugate-transcribed rows
  out(k21) = -(g1 + g2 + p.Gamma12 + I * D2) * s21 - I * std::conj(G) * s22 - I * gm * s23
             + I * std::conj(G) * s11 + I * W * s31;

  out(k31) = -(g1 + g2 + p.Gamma13 + I * (D2 + D3)) * s31 - I * std::conj(G) * s32 - I * gm * s33
             + I * gm * s11 + I * std::conj(W) * s21;

  out(k32) = -(p.Gamma23 + I * D3) * s32 - I * G * s31 - I * std::conj(W) * s33
             + I * std::conj(W) * s22 + I * gm * (self_coupling_variant ? s32 : s12);

  return out;
}

}  // namespace lambdaknob::testsupport
