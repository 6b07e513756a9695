#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "fhkin/dynamics.hpp"
#include "fhkin/linalg.hpp"
#include "fhkin/operators.hpp"

namespace fhkin {

struct DecayFit {
  double t_F = 0.0;                               // fit horizon
  std::vector<std::pair<double, double>> peaks;   // (t, log E) points used
  double slope = 0.0;
  double rate = 0.0;                              // -slope, positive for decay
  int n_peaks = 0;
};

struct DispersionRoot {
  double k = 0.0;
  double omega_p = 0.0;   // oscillation frequency (real part)
  double gamma = 0.0;     // damping rate, positive for decay
  double residual = 0.0;  // |dispersion function| at the root
};

double electric_energy(const SpectralState& state, const SimConfig& config);

// Strict interior local maxima of the sampled energy; endpoints are never
// peaks. Requires at least three samples; may return an empty list.
std::vector<std::pair<double, double>> detect_peaks(const TimeSeries& series);

// Least-squares line through the (t, log E) peaks with t <= t_F; rate is the
// negated slope. Throws when fewer than two peaks qualify.
DecayFit fit_decay_rate(const TimeSeries& series, double t_F);

// Rebound fraction max_{t >= t_min} E(t) / E(0). Throws when the series does
// not reach t_min.
double recurrence_metric(const TimeSeries& series, double t_min);

// Dense mode-m drift matrix -i m k (A + with_g*(mk)^{-2} G) + H. With the
// Poisson coupling the matrix is first symmetrized by the D_m scaling, which
// leaves the diagonal damping term unchanged. The cutoff filter is rejected
// (its h carries a sentinel that cannot enter an eigensolve).
ComplexMatrix build_mode_matrix(const HermiteParams& params, const FilterSpec& filter,
                                double dt, int m, bool with_g);

// Eigenvalues and spectral abscissa of the mode-m drift matrix; m = 0 is
// rejected (the Poisson coupling is undefined there).
EigenReport eigen_report_filtered(const HermiteParams& params, const FilterSpec& filter,
                                  double dt, int m, bool with_g);

// Plasma dispersion function Z(zeta) = i sqrt(pi) w(zeta) with w the scaled
// complex error function, evaluated by a region split (Maclaurin series,
// continued fraction, a Taylor strip about the real axis, and reflection below
// it). Validated for |zeta| <= 10 with Im zeta >= -2; inputs outside that
// region are rejected.
std::complex<double> plasma_dispersion_z(std::complex<double> zeta);

// Landau root of 1 + k^{-2} (1 + zeta Z(zeta)) = 0, zeta = omega/(sqrt(2) k),
// for the Gaussian background, by complex Newton iteration with continuation
// in k from the k = 0.5 root. Valid for 0.1 <= k <= 1; throws on
// non-convergence within 100 iterations per continuation step.
DispersionRoot solve_dispersion(double k);

}
