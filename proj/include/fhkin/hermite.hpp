#pragma once

#include <vector>

namespace fhkin {

// Normalized probabilists' Hermite polynomial He_n, orthonormal with respect
// to the standard Gaussian weight exp(-xi^2/2)/sqrt(2*pi). Evaluated by the
// three-term recursion sqrt(n+1)*He_{n+1} = xi*He_n - sqrt(n)*He_{n-1}.
double hermite_he(int n, double xi);

struct QuadratureRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // sum to 1
};

// n-point Gauss quadrature for the standard Gaussian weight. Exact for
// polynomials of degree <= 2n-1. Nodes are the roots of He_n, found by Newton
// iteration from asymptotic initial guesses; throws if the iteration fails to
// converge or n is outside [1, 200].
QuadratureRule gauss_hermite_rule(int n);

}
