#include "fhkin/hermite.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fhkin {

double hermite_he(int n, double xi) {
  if (n < 0) throw std::invalid_argument("hermite_he: negative order");
  double prev = 0.0;
  double cur = 1.0;
  for (int j = 0; j < n; ++j) {
    double next = (xi * cur - std::sqrt(static_cast<double>(j)) * prev) /
                  std::sqrt(static_cast<double>(j + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

// He_n and its derivative sqrt(n)*He_{n-1} in one recursion pass.
void he_with_derivative(int n, double xi, double& value, double& derivative) {
  double prev = 0.0;
  double cur = 1.0;
  for (int j = 0; j < n; ++j) {
    double next = (xi * cur - std::sqrt(static_cast<double>(j)) * prev) /
                  std::sqrt(static_cast<double>(j + 1));
    prev = cur;
    cur = next;
  }
  value = cur;
  derivative = std::sqrt(static_cast<double>(n)) * prev;
}

// Quadrature weight at a converged node: 1 / sum_{j<n} He_j(xi)^2.
double node_weight(int n, double xi) {
  double prev = 0.0;
  double cur = 1.0;
  double sum = 1.0;
  for (int j = 0; j + 1 < n; ++j) {
    double next = (xi * cur - std::sqrt(static_cast<double>(j)) * prev) /
                  std::sqrt(static_cast<double>(j + 1));
    prev = cur;
    cur = next;
    sum += cur * cur;
  }
  return 1.0 / sum;
}

}  // namespace

QuadratureRule gauss_hermite_rule(int n) {
  if (n < 1 || n > 200) throw std::invalid_argument("gauss_hermite_rule: n outside [1, 200]");

  QuadratureRule rule;
  rule.nodes.assign(static_cast<size_t>(n), 0.0);
  rule.weights.assign(static_cast<size_t>(n), 0.0);

  // Positive-half nodes from the largest downward. The classical asymptotic
  // guesses are stated for the physicists' weight exp(-x^2); our nodes are
  // sqrt(2) times those, so the guess bookkeeping stays in that scale.
  const double scale = std::sqrt(2.0);
  const int half = n / 2;
  std::vector<double> phys;  // converged roots in physicists' scale, descending
  phys.reserve(static_cast<size_t>(half));
  double pz = 0.0;
  for (int idx = 0; idx < half; ++idx) {
    if (idx == 0) {
      double en = 2.0 * n + 1.0;
      pz = std::sqrt(en) - 1.85575 * std::pow(en, -1.0 / 6.0);
    } else if (idx == 1) {
      pz -= 1.14 * std::pow(static_cast<double>(n), 0.426) / pz;
    } else if (idx == 2) {
      pz = 1.86 * pz - 0.86 * phys[0];
    } else if (idx == 3) {
      pz = 1.91 * pz - 0.91 * phys[1];
    } else {
      pz = 2.0 * pz - phys[static_cast<size_t>(idx - 2)];
    }

    // Newton can escape into the basin of the root above when n is large and
    // the guess sits near an extremum. Confine the iterate below the previous
    // root by a barrier at just over half the expected spacing; the spacing
    // comes from the two roots already found, or from the edge asymptotics for
    // the second root.
    double barrier = std::numeric_limits<double>::infinity();
    if (idx == 1) {
      double gap = 1.3889 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
      barrier = scale * (phys[0] - 0.55 * gap);
    } else if (idx >= 2) {
      double gap = phys[static_cast<size_t>(idx - 2)] - phys[static_cast<size_t>(idx - 1)];
      barrier = scale * (phys[static_cast<size_t>(idx - 1)] - 0.55 * gap);
    }

    double z = std::min(scale * pz, barrier);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      double v, d;
      he_with_derivative(n, z, v, d);
      double step = v / d;
      z -= step;
      bool clamped = z > barrier;
      if (clamped) z = barrier;
      if (!clamped && std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged || !std::isfinite(z))
      throw std::runtime_error("gauss_hermite_rule: node iteration did not converge");

    pz = z / scale;
    phys.push_back(pz);
    rule.nodes[static_cast<size_t>(n - 1 - idx)] = z;
    rule.nodes[static_cast<size_t>(idx)] = -z;
  }
  if (n % 2 == 1) rule.nodes[static_cast<size_t>(half)] = 0.0;

  for (int i = 1; i < n; ++i)
    if (!(rule.nodes[static_cast<size_t>(i)] > rule.nodes[static_cast<size_t>(i) - 1]))
      throw std::runtime_error("gauss_hermite_rule: nodes out of order");

  for (int i = 0; i < n; ++i)
    rule.weights[static_cast<size_t>(i)] = node_weight(n, rule.nodes[static_cast<size_t>(i)]);

  return rule;
}

}
