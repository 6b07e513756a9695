#pragma once

#include <complex>
#include <vector>

#include "fhkin/filters.hpp"
#include "fhkin/operators.hpp"

namespace fhkin {

enum class Model { advection, forced, vlasov_poisson, linearized_landau };

struct ForceParams {
  double gamma = 0.15336;  // decay rate of the force envelope
  double omega = 1.416;    // oscillation frequency of the force
};

struct SimConfig {
  Model model = Model::advection;
  HermiteParams params;
  FilterSpec filter;
  double epsilon = 0.01;   // perturbation amplitude
  int m_c = 3;             // Fourier cutoff, modes |m| <= m_c
  double cfl_c = 0.5;      // dt = cfl_c / sqrt(M)
  double t_end = 50.0;
  int sample_every = 1;    // steps per recorded sample
  ForceParams force;
};

// Fourier-Hermite coefficients: mode(m)[i] = f_i^(m), m in [-m_c, m_c].
struct SpectralState {
  int m_c = 0;
  int M = 0;
  double time = 0.0;
  std::vector<std::vector<std::complex<double>>> modes;  // indexed m + m_c

  SpectralState() = default;
  SpectralState(int mc, int M_);
  std::vector<std::complex<double>>& mode(int m) { return modes[static_cast<size_t>(m + m_c)]; }
  const std::vector<std::complex<double>>& mode(int m) const {
    return modes[static_cast<size_t>(m + m_c)];
  }
};

struct Sample {
  double t = 0.0;
  double energy = 0.0;               // sqrt(D * sum_{m!=0} |E^(m)|^2)
  double mass = 0.0;                 // Re f_0^(0)
  std::vector<double> mode_norms;    // ||f^(m)||_2 for m = 0..m_c
};

struct TimeSeries {
  std::vector<Sample> samples;              // strictly increasing t
  std::vector<SpectralState> checkpoints;   // final state always present
};

// Initial coefficients per model. Advection and the one-sided forced model
// share the uniform background f^(0) = e_0; advection adds the cosine
// perturbation f^(+-1) = (eps/2) e_0, the forced model the one-sided complex
// perturbation f^(1) = eps e_0 driven by a mode +1 force, vlasov_poisson the
// cosine perturbation, and linearized_landau the one-sided f^(1) = eps e_0.
SpectralState initial_state(const SimConfig& config);

// Self-consistent field coefficients E^(m) = -(i/(mk)) f_0^(m) for m != 0 and
// E^(0) = 0 (zero-mean constraint), indexed m + m_c.
std::vector<std::complex<double>> electric_field_modes(const SpectralState& state,
                                                       const HermiteParams& params);

// Semi-discrete right-hand side, including the damping term h*f:
//   d f^(m)/dt = -i m k A f^(m) + sum_l E^(l) B f^(m-l) + h o f^(m)
// with the field per model (advection: none; forced: prescribed one-sided
// decaying force; vlasov_poisson: self-consistent; linearized_landau: the
// single-mode system with the Poisson coupling G). Convolution terms whose
// index leaves [-m_c, m_c] are dropped.
SpectralState rhs(const SpectralState& state, double t, const SimConfig& config,
                  const OperatorSet& ops);

// One classical Runge-Kutta 4 step of rhs. No filter multiplier is applied
// here. Throws when the advanced state stops being finite.
SpectralState step_rk4(const SpectralState& state, double dt, const SimConfig& config,
                       const OperatorSet& ops);

// Multiplies every mode componentwise by sigma.
void apply_filter(SpectralState& state, const std::vector<double>& sigma);

// Exact mode propagation exp(t*(-i m k A + H)) f^(m)(0) for the linear
// advection model. The cutoff filter's sigma = 0 rows are handled as hard
// zeros by exponentiating on the kept subspace. Non-advection models and
// |m| > m_c are rejected.
std::vector<std::complex<double>> propagate_linear_exact(const SimConfig& config, int m,
                                                         double t);

// Advances initial_state with dt = cfl_c/sqrt(M): each step integrates the
// advective part with step_rk4 (h excluded) and then applies the sigma
// multipliers, which is the stepped form of the damping term. Samples are
// recorded every sample_every steps plus the final step; the final state is
// stored as a checkpoint. Refuses runs of more than 1e7 steps.
TimeSeries run_simulation(const SimConfig& config);

// Electric energy of a state: sqrt(D * sum_{m!=0} |E^(m)|^2). For the
// linearized model the reported diagnostic is |E^(1)| itself.
double state_energy(const SpectralState& state, const SimConfig& config);

}
