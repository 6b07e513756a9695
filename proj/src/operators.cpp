#include "fhkin/operators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fhkin {

HermiteParams validate_params(HermiteParams params, bool filtered) {
  const double two_pi = 2.0 * std::numbers::pi;
  if (params.M < 1) throw std::invalid_argument("params: M < 1");
  if (filtered && params.M < 2)
    throw std::invalid_argument("params: M >= 2 required with an active filter");
  if (params.k <= 0.0 && params.D <= 0.0)
    throw std::invalid_argument("params: need a positive k or period");
  if (params.k <= 0.0) params.k = two_pi / params.D;
  if (params.D <= 0.0) params.D = two_pi / params.k;
  if (std::abs(params.k * params.D - two_pi) > 1e-12 * two_pi)
    throw std::invalid_argument("params: k * period must equal 2*pi");
  return params;
}

void OperatorSet::apply_advection(const std::vector<std::complex<double>>& x,
                                  std::vector<std::complex<double>>& y) const {
  y.assign(x.size(), 0.0);
  for (int i = 0; i <= M; ++i) {
    std::complex<double> acc = 0.0;
    if (i >= 1) acc += sqrt_idx[static_cast<size_t>(i)] * x[static_cast<size_t>(i - 1)];
    if (i < M) acc += sqrt_idx[static_cast<size_t>(i + 1)] * x[static_cast<size_t>(i + 1)];
    y[static_cast<size_t>(i)] = acc;
  }
}

void OperatorSet::apply_force(const std::vector<std::complex<double>>& x,
                              std::vector<std::complex<double>>& y) const {
  y.assign(x.size(), 0.0);
  for (int i = 1; i <= M; ++i)
    y[static_cast<size_t>(i)] = sqrt_idx[static_cast<size_t>(i)] * x[static_cast<size_t>(i - 1)];
}

OperatorSet build_operators(const HermiteParams& params, const FilterSpec& filter,
                            double dt) {
  HermiteParams checked = validate_params(params, filter.variant != FilterVariant::none);
  if (dt <= 0.0) throw std::invalid_argument("build_operators: dt <= 0");

  OperatorSet ops;
  ops.M = checked.M;
  ops.sqrt_idx.resize(static_cast<size_t>(checked.M) + 1);
  for (int i = 0; i <= checked.M; ++i)
    ops.sqrt_idx[static_cast<size_t>(i)] = std::sqrt(static_cast<double>(i));

  ops.sigma = filter_sigma(filter, checked.M, dt);
  if (filter.variant != FilterVariant::none && ops.sigma[static_cast<size_t>(checked.M)] >= 1.0)
    throw std::invalid_argument("build_operators: filter damps nothing (sigma_M(M) = 1)");

  ops.h.resize(ops.sigma.size());
  for (size_t i = 0; i < ops.sigma.size(); ++i)
    ops.h[i] = (ops.sigma[i] > 0.0) ? std::log(ops.sigma[i]) / dt : cutoff_h_sentinel;

  return ops;
}

std::vector<double> build_dm_scaling(const HermiteParams& params, int m) {
  if (m == 0) throw std::invalid_argument("build_dm_scaling: m = 0");
  HermiteParams checked = validate_params(params, false);
  double mk = m * checked.k;
  double d = mk / std::sqrt(mk * mk + 1.0);
  std::vector<double> diag(static_cast<size_t>(checked.M) + 1, d);
  diag[0] = 1.0;
  return diag;
}

}
