#include "fhkin/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace fhkin {

namespace {

constexpr std::complex<double> iu(0.0, 1.0);
const double sqrt_pi = std::sqrt(M_PI);

// Dawson integral for real x by the cancellation-free series
// exp(-x^2) * sum x^(2n+1) / (n! (2n+1)).
double dawson_real(double x) {
  double x2 = x * x;
  double term = x;
  double sum = term;
  for (int n = 1; n < 400; ++n) {
    term *= x2 / n;
    double contrib = term / (2 * n + 1);
    sum += contrib;
    if (std::abs(contrib) <= 1e-17 * std::abs(sum)) break;
  }
  return std::exp(-x2) * sum;
}

// Scaled complex error function w(z) on and above the strip |Im z| < 1:
// Taylor expansion about the real point x, seeded by w(x) from the Dawson
// integral and advanced with the derivative recursion
// w^(n+1) = -2x w^(n) - 2n w^(n-1).
cplx w_strip(double x, double y) {
  cplx w0 = std::exp(-x * x) + (2.0 * iu / sqrt_pi) * dawson_real(x);
  cplx w1 = -2.0 * x * w0 + 2.0 * iu / sqrt_pi;
  cplx delta(0.0, y);
  cplx sum = w0;
  cplx power = 1.0;
  cplx prev = w0, cur = w1;
  int quiet = 0;
  for (int n = 1; n <= 80; ++n) {
    power *= delta / static_cast<double>(n);
    cplx contrib = cur * power;
    sum += contrib;
    if (std::abs(contrib) <= 1e-18 * std::abs(sum)) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
    cplx next = -2.0 * x * cur - 2.0 * static_cast<double>(n) * prev;
    prev = cur;
    cur = next;
  }
  return sum;
}

// Maclaurin series w(z) = sum (iz)^n / Gamma(n/2 + 1), for small |z| well
// above the real axis.
cplx w_series(cplx z) {
  cplx izn = 1.0;
  cplx sum = 0.0;
  for (int n = 0; n < 200; ++n) {
    cplx contrib = izn / std::tgamma(0.5 * n + 1.0);
    sum += contrib;
    if (n > 4 && std::abs(contrib) <= 1e-18 * std::abs(sum)) break;
    izn *= iu * z;
  }
  return sum;
}

// Descending continued fraction for w(z), accurate away from the real axis.
cplx w_cfrac(cplx z) {
  cplx f = z;
  for (int j = 60; j >= 1; --j) f = z - (0.5 * j) / f;
  return iu / (sqrt_pi * f);
}

cplx faddeeva(cplx z) {
  double y = z.imag();
  if (y <= -1.0) {
    cplx zm = -z;
    cplx wm = (std::abs(zm) <= 2.5) ? w_series(zm)
              : (zm.imag() < 1.0)   ? w_strip(zm.real(), zm.imag())
                                    : w_cfrac(zm);
    return 2.0 * std::exp(-z * z) - wm;
  }
  if (y < 1.0) return w_strip(z.real(), y);
  if (std::abs(z) <= 2.5) return w_series(z);
  return w_cfrac(z);
}

}  // namespace

double electric_energy(const SpectralState& state, const SimConfig& config) {
  return state_energy(state, config);
}

std::vector<std::pair<double, double>> detect_peaks(const TimeSeries& series) {
  const auto& s = series.samples;
  if (s.size() < 3) throw std::invalid_argument("detect_peaks: need at least three samples");
  std::vector<std::pair<double, double>> peaks;
  for (size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i].energy > s[i - 1].energy && s[i].energy > s[i + 1].energy)
      peaks.emplace_back(s[i].t, std::log(s[i].energy));
  }
  return peaks;
}

DecayFit fit_decay_rate(const TimeSeries& series, double t_F) {
  DecayFit fit;
  fit.t_F = t_F;
  for (const auto& [t, logE] : detect_peaks(series))
    if (t <= t_F) fit.peaks.emplace_back(t, logE);
  fit.n_peaks = static_cast<int>(fit.peaks.size());
  if (fit.n_peaks < 2)
    throw std::runtime_error("fit_decay_rate: fewer than two peaks before the fit horizon");
  auto [slope, intercept] = fit_line(fit.peaks);
  (void)intercept;
  fit.slope = slope;
  fit.rate = -slope;
  return fit;
}

double recurrence_metric(const TimeSeries& series, double t_min) {
  const auto& s = series.samples;
  if (s.empty()) throw std::invalid_argument("recurrence_metric: empty series");
  double e0 = s.front().energy;
  if (!(e0 > 0.0)) throw std::invalid_argument("recurrence_metric: initial energy is zero");
  if (s.back().t < t_min)
    throw std::invalid_argument("recurrence_metric: series ends before t_min");
  double best = 0.0;
  for (const Sample& sample : s)
    if (sample.t >= t_min) best = std::max(best, sample.energy / e0);
  return best;
}

ComplexMatrix build_mode_matrix(const HermiteParams& params_in, const FilterSpec& filter,
                                double dt, int m, bool with_g) {
  if (m == 0) throw std::invalid_argument("build_mode_matrix: m = 0 has no drift matrix");
  if (filter.variant == FilterVariant::cutoff)
    throw std::invalid_argument("build_mode_matrix: cutoff rows cannot enter an eigensolve");
  HermiteParams params = validate_params(params_in, filter.variant != FilterVariant::none);
  OperatorSet ops = build_operators(params, filter, dt);

  int n = params.M + 1;
  double mk = m * params.k;
  ComplexMatrix mat(n);
  for (int i = 0; i < n; ++i) {
    mat.at(i, i) = ops.h[static_cast<size_t>(i)];
    if (i + 1 < n) {
      double off = ops.sqrt_idx[static_cast<size_t>(i) + 1];
      if (with_g && i == 0) off = std::sqrt(1.0 + 1.0 / (mk * mk));
      mat.at(i, i + 1) = -iu * mk * off;
      mat.at(i + 1, i) = -iu * mk * off;
    }
  }
  return mat;
}

EigenReport eigen_report_filtered(const HermiteParams& params, const FilterSpec& filter,
                                  double dt, int m, bool with_g) {
  return eig_hessenberg(build_mode_matrix(params, filter, dt, m, with_g));
}

std::complex<double> plasma_dispersion_z(std::complex<double> zeta) {
  if (std::abs(zeta) > 10.0 || zeta.imag() < -2.0)
    throw std::domain_error("plasma_dispersion_z: argument outside validated region");
  return iu * sqrt_pi * faddeeva(zeta);
}

DispersionRoot solve_dispersion(double k) {
  if (!(k >= 0.1 - 1e-12 && k <= 1.0 + 1e-12))
    throw std::invalid_argument("solve_dispersion: k outside [0.1, 1]");

  auto newton = [](double kk, cplx omega) {
    double s2k = std::sqrt(2.0) * kk;
    cplx residual = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      cplx zeta = omega / s2k;
      cplx z = plasma_dispersion_z(zeta);
      residual = 1.0 + (1.0 + zeta * z) / (kk * kk);
      cplx zprime = -2.0 * (1.0 + zeta * z);
      cplx deriv = (z + zeta * zprime) / (s2k * kk * kk);
      cplx step = residual / deriv;
      omega -= step;
      if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(omega)) &&
          std::abs(residual) <= 1e-12)
        break;
    }
    return std::pair<cplx, double>(omega, std::abs(residual));
  };

  cplx omega(1.41, -0.15);
  int nsteps = static_cast<int>(std::ceil(std::abs(k - 0.5) / 0.05));
  for (int j = 1; j <= nsteps; ++j) {
    double kj = 0.5 + (k - 0.5) * j / nsteps;
    omega = newton(kj, omega).first;
  }
  cplx root = newton(k, omega).first;
  cplx zeta = root / (std::sqrt(2.0) * k);
  double residual = std::abs(1.0 + (1.0 + zeta * plasma_dispersion_z(zeta)) / (k * k));
  if (!(residual <= 1e-10))
    throw std::runtime_error("solve_dispersion: Newton iteration did not converge");

  DispersionRoot out;
  out.k = k;
  out.omega_p = root.real();
  out.gamma = -root.imag();
  out.residual = residual;
  return out;
}

}
