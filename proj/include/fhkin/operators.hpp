#pragma once

#include <complex>
#include <vector>

#include "fhkin/filters.hpp"

namespace fhkin {

struct HermiteParams {
  int M = 30;           // highest retained Hermite index
  double k = 0.5;       // base wavenumber, k = 2*pi/D
  double D = 0.0;       // spatial period; 0 means derive from k
};

// Validates and normalizes params: fills D from k (or k from D) when one is
// unset, and requires k*D = 2*pi to relative accuracy 1e-12 when both are set.
HermiteParams validate_params(HermiteParams params, bool filtered);

// Assembled spectral operators for one (M, filter, dt) choice.
//
// The advection matrix A is symmetric tridiagonal with A[i][i+1] = sqrt(i+1);
// the force matrix B is lower bidiagonal with B[i][i-1] = sqrt(i) and a zero
// first row. Both are stored through sqrt_idx[i] = sqrt(i). The Poisson
// coupling matrix G has the single entry G[1][0] = 1 and needs no storage.
struct OperatorSet {
  int M = 0;
  std::vector<double> sqrt_idx;  // sqrt(i), i = 0..M
  std::vector<double> sigma;     // per-step filter multipliers
  std::vector<double> h;         // h_i = log(sigma_i)/dt, cutoff rows get the sentinel

  // y = A x (tridiagonal advection apply)
  void apply_advection(const std::vector<std::complex<double>>& x,
                       std::vector<std::complex<double>>& y) const;
  // y = B x (shift-down force apply; first row zero)
  void apply_force(const std::vector<std::complex<double>>& x,
                   std::vector<std::complex<double>>& y) const;
};

// Builds the operator set; dt enters only through h = log(sigma)/dt.
// Rejects a filter that keeps sigma_M(M) = 1 while claiming to damp
// (every variant except none), since such a spec damps nothing.
OperatorSet build_operators(const HermiteParams& params, const FilterSpec& filter,
                            double dt);

// Diagonal of the similarity scaling D_m = diag{1, d, d, ...} with
// d = mk/sqrt((mk)^2+1). Conjugating A + (mk)^{-2} G by it symmetrizes the
// mode-m drift matrix; the (0,1) entry becomes sqrt(1+(mk)^{-2}).
// m = 0 is rejected.
std::vector<double> build_dm_scaling(const HermiteParams& params, int m);

}
