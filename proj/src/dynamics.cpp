#include "fhkin/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fhkin/linalg.hpp"

namespace fhkin {

namespace {

using cvec = std::vector<std::complex<double>>;
constexpr std::complex<double> iu(0.0, 1.0);

void check_common(const SimConfig& config) {
  if (config.m_c < 1) throw std::invalid_argument("simulation needs m_c >= 1");
  if (!(config.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
}

Sample make_sample(const SpectralState& state, const SimConfig& config) {
  Sample s;
  s.t = state.time;
  s.energy = state_energy(state, config);
  s.mass = state.mode(0)[0].real();
  s.mode_norms.reserve(static_cast<size_t>(config.m_c) + 1);
  for (int m = 0; m <= config.m_c; ++m) {
    double acc = 0.0;
    for (const std::complex<double>& v : state.mode(m)) acc += std::norm(v);
    s.mode_norms.push_back(std::sqrt(acc));
  }
  return s;
}

bool finite_state(const SpectralState& state) {
  for (const cvec& f : state.modes)
    for (const std::complex<double>& v : f)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace

SpectralState::SpectralState(int mc, int M_)
    : m_c(mc),
      M(M_),
      modes(static_cast<size_t>(2 * mc + 1), cvec(static_cast<size_t>(M_) + 1)) {}

SpectralState initial_state(const SimConfig& config) {
  check_common(config);
  if (config.params.M < 1) throw std::invalid_argument("initial_state: M must be >= 1");
  SpectralState state(config.m_c, config.params.M);
  double eps = config.epsilon;
  switch (config.model) {
    case Model::advection:
      state.mode(0)[0] = 1.0;
      state.mode(1)[0] = 0.5 * eps;
      state.mode(-1)[0] = 0.5 * eps;
      break;
    case Model::forced:
      state.mode(0)[0] = 1.0;
      state.mode(1)[0] = eps;
      break;
    case Model::vlasov_poisson:
      state.mode(0)[0] = 1.0;
      state.mode(1)[0] = 0.5 * eps;
      state.mode(-1)[0] = 0.5 * eps;
      break;
    case Model::linearized_landau:
      state.mode(1)[0] = eps;
      break;
  }
  return state;
}

std::vector<std::complex<double>> electric_field_modes(const SpectralState& state,
                                                      const HermiteParams& params) {
  cvec field(static_cast<size_t>(2 * state.m_c + 1));
  for (int m = -state.m_c; m <= state.m_c; ++m) {
    if (m == 0) continue;
    field[static_cast<size_t>(m + state.m_c)] = -iu / (m * params.k) * state.mode(m)[0];
  }
  return field;
}

SpectralState rhs(const SpectralState& state, double t, const SimConfig& config,
                  const OperatorSet& ops) {
  if (ops.M != state.M) throw std::invalid_argument("rhs: operator size mismatch");
  const double k = config.params.k;
  const int mc = state.m_c;
  SpectralState deriv(mc, state.M);
  deriv.time = state.time;
  cvec tmp(static_cast<size_t>(state.M) + 1);

  if (config.model == Model::linearized_landau) {
    const cvec& f = state.mode(1);
    cvec& g = deriv.mode(1);
    ops.apply_advection(f, tmp);
    for (size_t i = 0; i < g.size(); ++i) g[i] = -iu * k * tmp[i] + ops.h[i] * f[i];
    g[1] -= iu / k * f[0];
    return deriv;
  }

  for (int m = -mc; m <= mc; ++m) {
    const cvec& f = state.mode(m);
    cvec& g = deriv.mode(m);
    ops.apply_advection(f, tmp);
    std::complex<double> coef = -iu * (m * k);
    for (size_t i = 0; i < g.size(); ++i) g[i] = coef * tmp[i] + ops.h[i] * f[i];
  }

  if (config.model == Model::forced) {
    std::complex<double> force =
        config.epsilon * std::exp(-config.force.gamma * t) * std::cos(config.force.omega * t);
    for (int m = -mc + 1; m <= mc; ++m) {
      ops.apply_force(state.mode(m - 1), tmp);
      cvec& g = deriv.mode(m);
      for (size_t i = 0; i < g.size(); ++i) g[i] += force * tmp[i];
    }
  } else if (config.model == Model::vlasov_poisson) {
    cvec field = electric_field_modes(state, config.params);
    for (int l = -mc; l <= mc; ++l) {
      if (l == 0) continue;
      std::complex<double> el = field[static_cast<size_t>(l + mc)];
      if (el == std::complex<double>(0.0)) continue;
      for (int m = -mc; m <= mc; ++m) {
        int src = m - l;
        if (src < -mc || src > mc) continue;
        ops.apply_force(state.mode(src), tmp);
        cvec& g = deriv.mode(m);
        for (size_t i = 0; i < g.size(); ++i) g[i] += el * tmp[i];
      }
    }
  }
  return deriv;
}

SpectralState step_rk4(const SpectralState& state, double dt, const SimConfig& config,
                       const OperatorSet& ops) {
  auto shifted = [&](const SpectralState& base, const SpectralState& dir, double scale) {
    SpectralState out = base;
    for (size_t m = 0; m < out.modes.size(); ++m)
      for (size_t i = 0; i < out.modes[m].size(); ++i)
        out.modes[m][i] += scale * dir.modes[m][i];
    return out;
  };

  double t = state.time;
  SpectralState k1 = rhs(state, t, config, ops);
  SpectralState k2 = rhs(shifted(state, k1, 0.5 * dt), t + 0.5 * dt, config, ops);
  SpectralState k3 = rhs(shifted(state, k2, 0.5 * dt), t + 0.5 * dt, config, ops);
  SpectralState k4 = rhs(shifted(state, k3, dt), t + dt, config, ops);

  SpectralState next = state;
  next.time = t + dt;
  double w = dt / 6.0;
  for (size_t m = 0; m < next.modes.size(); ++m)
    for (size_t i = 0; i < next.modes[m].size(); ++i)
      next.modes[m][i] += w * (k1.modes[m][i] + 2.0 * k2.modes[m][i] +
                               2.0 * k3.modes[m][i] + k4.modes[m][i]);
  if (!finite_state(next))
    throw std::runtime_error("step_rk4: state became non-finite near t = " +
                             std::to_string(t + dt));
  return next;
}

void apply_filter(SpectralState& state, const std::vector<double>& sigma) {
  if (sigma.size() != static_cast<size_t>(state.M) + 1)
    throw std::invalid_argument("apply_filter: sigma length mismatch");
  for (cvec& f : state.modes)
    for (size_t i = 0; i < f.size(); ++i) f[i] *= sigma[i];
}

std::vector<std::complex<double>> propagate_linear_exact(const SimConfig& config, int m,
                                                         double t) {
  if (config.model != Model::advection)
    throw std::invalid_argument("propagate_linear_exact: only the advection model is linear");
  if (m < -config.m_c || m > config.m_c)
    throw std::invalid_argument("propagate_linear_exact: mode outside cutoff");
  check_common(config);
  bool filtered = config.filter.variant != FilterVariant::none;
  HermiteParams params = validate_params(config.params, filtered);
  if (!(config.cfl_c > 0.0)) throw std::invalid_argument("cfl_c must be positive");
  double dt = config.cfl_c / std::sqrt(static_cast<double>(params.M));
  OperatorSet ops = build_operators(params, config.filter, dt);

  int n = params.M + 1;
  std::vector<char> kept(static_cast<size_t>(n), 1);
  for (int i = 0; i < n; ++i)
    if (ops.sigma[static_cast<size_t>(i)] == 0.0) kept[static_cast<size_t>(i)] = 0;

  ComplexMatrix gen(n);
  std::complex<double> coef = -iu * (m * params.k);
  for (int i = 0; i < n; ++i) {
    if (!kept[static_cast<size_t>(i)]) continue;
    gen.at(i, i) = ops.h[static_cast<size_t>(i)];
    if (i + 1 < n && kept[static_cast<size_t>(i) + 1]) {
      gen.at(i, i + 1) = coef * ops.sqrt_idx[static_cast<size_t>(i) + 1];
      gen.at(i + 1, i) = coef * ops.sqrt_idx[static_cast<size_t>(i) + 1];
    }
  }
  ComplexMatrix u = expm(gen, t);
  for (int i = 0; i < n; ++i) {
    if (kept[static_cast<size_t>(i)]) continue;
    for (int j = 0; j < n; ++j) {
      u.at(i, j) = 0.0;
      u.at(j, i) = 0.0;
    }
  }

  SimConfig local = config;
  local.params = params;
  cvec f0 = initial_state(local).mode(m);
  cvec result(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < n; ++j) acc += u.at(i, j) * f0[static_cast<size_t>(j)];
    result[static_cast<size_t>(i)] = acc;
  }
  return result;
}

TimeSeries run_simulation(const SimConfig& config) {
  check_common(config);
  bool filtered = config.filter.variant != FilterVariant::none;
  SimConfig local = config;
  local.params = validate_params(config.params, filtered);
  if (!(local.cfl_c > 0.0)) throw std::invalid_argument("cfl_c must be positive");
  if (!(local.t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (local.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");

  double dt = local.cfl_c / std::sqrt(static_cast<double>(local.params.M));
  double steps_d = local.t_end == 0.0 ? 0.0 : std::ceil(local.t_end / dt - 1e-9);
  if (!(steps_d <= 1e7))
    throw std::invalid_argument("run_simulation: more than 1e7 steps requested");
  long nsteps = static_cast<long>(steps_d);

  OperatorSet ops = build_operators(local.params, local.filter, dt);
  OperatorSet stepped = ops;
  for (double& v : stepped.h) v = 0.0;

  SpectralState state = initial_state(local);
  TimeSeries series;
  series.samples.push_back(make_sample(state, local));
  for (long step = 1; step <= nsteps; ++step) {
    state = step_rk4(state, dt, local, stepped);
    apply_filter(state, ops.sigma);
    state.time = static_cast<double>(step) * dt;
    if (step % local.sample_every == 0 || step == nsteps)
      series.samples.push_back(make_sample(state, local));
  }
  series.checkpoints.push_back(state);
  return series;
}

double state_energy(const SpectralState& state, const SimConfig& config) {
  if (config.model == Model::linearized_landau)
    return std::abs(state.mode(1)[0]) / config.params.k;
  cvec field = electric_field_modes(state, config.params);
  double acc = 0.0;
  for (int m = -state.m_c; m <= state.m_c; ++m) {
    if (m == 0) continue;
    acc += std::norm(field[static_cast<size_t>(m + state.m_c)]);
  }
  double period = config.params.D;
  if (period <= 0.0) period = 2.0 * M_PI / config.params.k;
  return std::sqrt(period * acc);
}

}
