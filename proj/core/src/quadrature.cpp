#include "lambdaknob/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "lambdaknob/constants.hpp"
#include "lambdaknob/errors.hpp"

namespace lambdaknob {

HermiteRule hermite_rule(int n) {
  if (n < 1) throw ValidationError("quadrature needs at least one node");

  HermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = std::sqrt(constants::pi);
    return rule;
  }

  // Jacobi matrix of the Hermite recurrence: zero diagonal, b_k = sqrt(k/2).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(k / 2.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  const double mu0 = std::sqrt(constants::pi);  // integral of the weight
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace lambdaknob
