#pragma once

#include <vector>

namespace lambdaknob {

/// Nodes and weights of an n-point Gauss-Hermite rule for
/// integral f(x) e^{-x^2} dx ~ sum_i w_i f(x_i), nodes ascending.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch construction (symmetric tridiagonal eigenproblem); fully
/// deterministic for a given n.
HermiteRule hermite_rule(int n);

}  // namespace lambdaknob
