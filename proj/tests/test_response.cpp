#include <doctest.h>

#include <cmath>

#include "lambdaknob/errors.hpp"
#include "lambdaknob/quadrature.hpp"
#include "lambdaknob/response.hpp"

using namespace lambdaknob;

namespace {

const double kGamma = 3.0 * constants::pi * 1e6;

SystemParams rb_params() {
  SystemParams p;
  p.gamma1 = p.gamma2 = kGamma;
  p.lambda13 = 780e-9;
  p.density_per_cc = 2e12;
  return validate_params(p);
}

SystemParams rb_fig2_params() { return rb_params(); }

DriveFields drives(double g_in_gamma, double omega_in_gamma) {
  return DriveFields{g_in_gamma * kGamma, omega_in_gamma * kGamma, 0.0, 0.0};
}

}  // namespace

TEST_CASE("hermite rule integrates gaussian moments") {
  const HermiteRule rule = hermite_rule(32);
  REQUIRE(rule.nodes.size() == 32);
  double mass = 0.0, second = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    mass += rule.weights[i];
    second += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);  // ascending
  }
  CHECK(mass == doctest::Approx(std::sqrt(constants::pi)).epsilon(1e-13));
  CHECK(second == doctest::Approx(0.5 * std::sqrt(constants::pi)).epsilon(1e-12));
  CHECK_THROWS_AS(hermite_rule(0), ValidationError);
}

TEST_CASE("dark resonance: no response at line center without the knob field") {
  const ResponseSample s = susceptibility(rb_params(), drives(10.0, 0.0), 0.0);
  CHECK(std::abs(s.chi_norm) <= 1e-10);
  CHECK(s.chi_phys == rb_params().eta() * s.chi_norm);
}

TEST_CASE("susceptibility profile with the knob field on") {
  const SystemParams params = rb_params();
  const DriveFields flds = drives(10.0, 5.0);

  const ResponseSample center = susceptibility(params, flds, 0.0);
  CHECK(std::abs(center.chi_norm.imag()) <= 1e-10);

  // gain on both shoulders
  CHECK(susceptibility(params, flds, 0.3 * kGamma).chi_norm.imag() < 0.0);
  CHECK(susceptibility(params, flds, -0.3 * kGamma).chi_norm.imag() < 0.0);

  // anomalous dispersion at line center
  const double h = 1e-3 * kGamma;
  const double slope = (susceptibility(params, flds, h).chi_norm.real() -
                        susceptibility(params, flds, -h).chi_norm.real()) /
                       (2.0 * h);
  CHECK(slope < 0.0);
}

TEST_CASE("doppler averaging reduces to the plain response when switched off") {
  const SystemParams params = rb_params();
  const DriveFields flds = drives(10.0, 5.0);
  const ResponseSample plain = susceptibility(params, flds, 0.2 * kGamma);

  DopplerSpec off;
  off.delta = 0.0;
  off.nodes = 64;
  CHECK(doppler_susceptibility(params, flds, 0.2 * kGamma, off).chi_norm == plain.chi_norm);

  DopplerSpec one_node;
  one_node.delta = 1.33e9;
  one_node.nodes = 1;
  CHECK(doppler_susceptibility(params, flds, 0.2 * kGamma, one_node).chi_norm == plain.chi_norm);
}

TEST_CASE("doppler average equals the hand-built quadrature at fixed Delta4") {
  const SystemParams params = rb_params();
  const DriveFields flds = drives(200.0, 130.0);
  DopplerSpec doppler;
  doppler.delta = 1.33e9;
  doppler.nodes = 24;
  const double delta1 = 0.15 * kGamma;

  // reference: spec definition, velocity shift applied to Delta1 and Delta2
  // separately, each class evaluated through the single-point operation
  const HermiteRule rule = hermite_rule(doppler.nodes);
  Complex expected = 0.0;
  for (int i = 0; i < doppler.nodes; ++i) {
    const double kv = std::sqrt(2.0) * doppler.delta * rule.nodes[i];
    DriveFields shifted = flds;
    shifted.delta2 -= kv;
    expected += rule.weights[i] / std::sqrt(constants::pi) *
                susceptibility(params, shifted, delta1 - kv).chi_norm;
  }

  // the averaged path evaluates every class at the invariant Delta4 instead
  // of re-cancelling (Delta1-kv)-(Delta2-kv); agreement is limited by that
  // cancellation in the reference, not by the quadrature
  const Complex averaged = doppler_susceptibility(params, flds, delta1, doppler).chi_norm;
  CHECK(std::abs(averaged - expected) <= 1e-9 * std::abs(expected));

  // the shift leaves Delta4 unchanged, so each class above solved the same
  // shifted system the averaged path solved
  const double d4 = delta4(delta1, flds);
  DriveFields shifted = flds;
  shifted.delta2 -= 0.37 * doppler.delta;
  CHECK(delta4(delta1 - 0.37 * doppler.delta, shifted) == doctest::Approx(d4).epsilon(1e-14));
}

TEST_CASE("doppler quadrature self-convergence at the strong-drive vapor point") {
  const SystemParams params = rb_fig2_params();
  const DriveFields flds = drives(200.0, 130.0);
  DopplerSpec coarse;
  coarse.delta = 1.33e9;
  coarse.nodes = 64;
  DopplerSpec fine = coarse;
  fine.nodes = 128;

  // evaluated off the exact line center, where chi does not vanish by symmetry
  const Complex a = doppler_susceptibility(params, flds, 0.5 * kGamma, coarse).chi_norm;
  const Complex b = doppler_susceptibility(params, flds, 0.5 * kGamma, fine).chi_norm;
  CHECK(std::abs(a - b) <= 1e-6 * std::abs(b));
}

TEST_CASE("group index of the empty medium is exactly one") {
  SystemParams vacuum = rb_params();
  vacuum.prefactor_eta = 0.0;
  vacuum = validate_params(vacuum);
  const GroupIndexResult r = group_index(vacuum, drives(10.0, 5.0), 0.0);
  CHECK(r.n_g == 1.0);
  CHECK(r.derivative_converged);
}

TEST_CASE("group index at the superluminal operating point") {
  const GroupIndexResult r = group_index(rb_params(), drives(10.0, 5.0), 0.0);
  // delay quoted for the 6 cm cell implies n_g about -2.19e4
  CHECK(r.n_g == doctest::Approx(-2.19e4).epsilon(0.20));
  CHECK(r.derivative_converged);
  CHECK(r.im_ratio < 0.1);  // dispersion dominates residual gain at center

  const GroupIndexResult sub = group_index(rb_params(), drives(10.0, 0.0), 0.0);
  CHECK(sub.n_g > 1e3);  // subluminal without the knob field
}

TEST_CASE("n_g - 1 is linear in the prefactor") {
  SystemParams params = rb_params();
  const GroupIndexResult base = group_index(params, drives(10.0, 5.0), 0.0);
  SystemParams doubled = params;
  doubled.prefactor_eta = 2.0 * params.eta();
  const GroupIndexResult twice = group_index(validate_params(doubled), drives(10.0, 5.0), 0.0);
  CHECK(twice.n_g - 1.0 == doctest::Approx(2.0 * (base.n_g - 1.0)).epsilon(1e-12));
}

TEST_CASE("central difference agrees with a five-point stencil on the scan profile") {
  const SystemParams params = rb_params();
  const DriveFields flds = drives(10.0, 5.0);
  const double h = 1e-3 * kGamma;
  const double delta1 = 0.0;

  const double grid[5] = {delta1 - 2.0 * h, delta1 - h, delta1, delta1 + h, delta1 + 2.0 * h};
  const auto chi = chi_norm_profile(params, flds, grid);
  const double central = (chi[3].real() - chi[1].real()) / (2.0 * h);
  const double five_point =
      (-chi[4].real() + 8.0 * chi[3].real() - 8.0 * chi[1].real() + chi[0].real()) / (12.0 * h);
  CHECK(central == doctest::Approx(five_point).epsilon(1e-4));
}

TEST_CASE("knob scan finds the subluminal -> superluminal -> subluminal pattern") {
  std::vector<double> omega(21);
  for (std::size_t i = 0; i < omega.size(); ++i) omega[i] = i * kGamma;  // 0..20 gamma
  const KnobScan scan = knob_scan(rb_params(), drives(10.0, 0.0), omega);

  REQUIRE(scan.n_g.size() == omega.size());
  CHECK(scan.skipped.empty());
  std::vector<int> signs;
  for (double ng : scan.n_g) {
    const int s = ng > 0.0 ? 1 : -1;
    if (signs.empty() || signs.back() != s) signs.push_back(s);
  }
  CHECK(signs == std::vector<int>{1, -1, 1});
  REQUIRE(scan.crossovers.size() == 2);
  for (const auto& [lo, hi] : scan.crossovers) {
    CHECK(hi - lo <= 1e-3 * kGamma);
    CHECK(lo > 0.0);
    CHECK(hi < 20.0 * kGamma);
  }
  CHECK(!scan.doppler_averaged);
}

TEST_CASE("single-point knob scan reduces to group_index") {
  const double omega[1] = {5.0 * kGamma};
  const KnobScan scan = knob_scan(rb_params(), drives(10.0, 0.0), omega);
  const GroupIndexResult direct = group_index(rb_params(), drives(10.0, 5.0), 0.0);
  REQUIRE(scan.n_g.size() == 1);
  CHECK(scan.n_g[0] == direct.n_g);
  CHECK(scan.crossovers.empty());
}

TEST_CASE("knob scan records degenerate grid points instead of failing") {
  // no control field and no dephasing: every point is degenerate
  std::vector<double> omega = {0.0, 2.0 * kGamma, 4.0 * kGamma};
  const KnobScan scan = knob_scan(rb_params(), drives(0.0, 0.0), omega);
  CHECK(scan.skipped.size() == omega.size());
  for (double ng : scan.n_g) CHECK(std::isnan(ng));
  CHECK(scan.crossovers.empty());
}

TEST_CASE("doppler averaging propagates the offending velocity class") {
  DopplerSpec doppler;
  doppler.delta = 10.0 * kGamma;
  doppler.nodes = 8;
  CHECK_THROWS_AS(doppler_susceptibility(rb_params(), drives(0.0, 5.0), 0.0, doppler),
                  NumericalError);
  try {
    doppler_susceptibility(rb_params(), drives(0.0, 5.0), 0.0, doppler);
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("velocity class") != std::string::npos);
  }
}
