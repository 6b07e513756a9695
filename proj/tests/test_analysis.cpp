#include "doctest.h"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fhkin/analysis.hpp"
#include "fhkin/dynamics.hpp"
#include "fhkin/linalg.hpp"

namespace {

using cplx = std::complex<double>;

fhkin::TimeSeries sampled(const std::function<double(double)>& energy, double t_end,
                          double dt) {
  fhkin::TimeSeries series;
  for (double t = 0.0; t <= t_end + 1e-12; t += dt) {
    fhkin::Sample s;
    s.t = t;
    s.energy = energy(t);
    series.samples.push_back(s);
  }
  return series;
}

fhkin::FilterSpec houli_filter() {
  fhkin::FilterSpec spec;
  spec.variant = fhkin::FilterVariant::exponential;
  return spec;
}

fhkin::SimConfig landau_config(int M, double t_end, const fhkin::FilterSpec& filter) {
  fhkin::SimConfig cfg;
  cfg.model = fhkin::Model::vlasov_poisson;
  cfg.params.M = M;
  cfg.params.k = 0.5;
  cfg.epsilon = 0.001;
  cfg.t_end = t_end;
  cfg.filter = filter;
  return cfg;
}

// Largest singular value by power iteration on U^H U.
double two_norm(const fhkin::ComplexMatrix& u) {
  const int n = u.n;
  std::vector<cplx> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = 1.0 / (1.0 + i);
  std::vector<cplx> w(v.size());
  double sigma = 0.0;
  for (int it = 0; it < 80; ++it) {
    for (int i = 0; i < n; ++i) {
      cplx acc = 0.0;
      for (int j = 0; j < n; ++j) acc += u.at(i, j) * v[static_cast<size_t>(j)];
      w[static_cast<size_t>(i)] = acc;
    }
    double wn = 0.0;
    for (const cplx& x : w) wn += std::norm(x);
    sigma = std::sqrt(wn);
    for (int j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (int i = 0; i < n; ++i) acc += std::conj(u.at(i, j)) * w[static_cast<size_t>(i)];
      v[static_cast<size_t>(j)] = acc;
    }
    double vn = 0.0;
    for (const cplx& x : v) vn += std::norm(x);
    vn = std::sqrt(vn);
    if (vn == 0.0) return 0.0;
    for (cplx& x : v) x /= vn;
  }
  return sigma;
}

cplx simpson(const std::function<cplx(double)>& f, double a, double b, cplx fa, cplx fb,
             cplx fm, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  cplx flm = f(lm);
  cplx frm = f(rm);
  cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  cplx sum = left + right;
  if (depth <= 0 || std::abs(sum - whole) <= 15.0 * tol) return sum + (sum - whole) / 15.0;
  return simpson(f, a, m, fa, fm, flm, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, fb, frm, 0.5 * tol, depth - 1);
}

// Independent evaluation of the dispersion function through a principal-value
// style integral over the Gaussian, with the analytic pole contribution added
// below the real axis.
cplx dispersion_by_quadrature(double k, cplx omega) {
  cplx zeta = omega / (std::sqrt(2.0) * k);
  auto f = [&](double s) { return std::exp(-s * s) / (s - zeta); };
  cplx z = simpson(f, -8.0, 8.0, f(-8.0), f(8.0), f(0.0), 1e-13, 40) /
           std::sqrt(std::numbers::pi);
  if (zeta.imag() < 0.0)
    z += 2.0 * cplx(0.0, 1.0) * std::sqrt(std::numbers::pi) * std::exp(-zeta * zeta);
  return 1.0 + (1.0 + zeta * z) / (k * k);
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("field amplitude of reference states") {
  fhkin::SimConfig cfg;
  cfg.model = fhkin::Model::advection;
  cfg.params.M = 8;
  cfg.params.k = 0.5;
  cfg.epsilon = 0.01;
  fhkin::SpectralState init = fhkin::initial_state(cfg);
  double expected = 2.0 * cfg.epsilon * std::sqrt(2.0 * std::numbers::pi);
  CHECK(fhkin::electric_energy(init, cfg) == doctest::Approx(expected).epsilon(1e-12));

  fhkin::SpectralState zero(cfg.m_c, cfg.params.M);
  CHECK(fhkin::electric_energy(zero, cfg) == 0.0);

  fhkin::SpectralState single(cfg.m_c, cfg.params.M);
  single.mode(1)[0] = 1.0;
  CHECK(fhkin::electric_energy(single, cfg) ==
        doctest::Approx(4.0 * std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("peak detection on a rectified cosine") {
  fhkin::TimeSeries series =
      sampled([](double t) { return std::abs(std::cos(t)); }, 10.0, 0.01);
  std::vector<std::pair<double, double>> peaks = fhkin::detect_peaks(series);
  REQUIRE(peaks.size() == 3);
  for (size_t j = 0; j < peaks.size(); ++j) {
    CHECK(std::abs(peaks[j].first - (j + 1) * std::numbers::pi) <= 0.011);
    CHECK(std::abs(peaks[j].second) <= 1e-4);
  }

  fhkin::TimeSeries monotone = sampled([](double t) { return std::exp(-t); }, 10.0, 0.1);
  CHECK(fhkin::detect_peaks(monotone).empty());

  fhkin::TimeSeries tiny = sampled([](double) { return 1.0; }, 0.1, 0.1);
  CHECK_THROWS_AS(fhkin::detect_peaks(tiny), std::invalid_argument);
}

TEST_CASE("decay fit on a damped oscillation") {
  const double gamma = 0.15336;
  const double omega = 1.416;
  fhkin::TimeSeries series = sampled(
      [&](double t) { return std::exp(-gamma * t) * std::abs(std::cos(omega * t)); }, 30.0,
      0.01);

  fhkin::DecayFit fit = fhkin::fit_decay_rate(series, 28.0);
  CHECK(fit.rate == doctest::Approx(gamma).epsilon(1e-3));
  CHECK(std::abs(fit.rate - gamma) <= 1e-4);
  CHECK(fit.rate == -fit.slope);
  CHECK(fit.n_peaks == static_cast<int>(fit.peaks.size()));
  CHECK(fit.n_peaks >= 10);

  fhkin::DecayFit early = fhkin::fit_decay_rate(series, 10.0);
  for (const auto& [t, logE] : early.peaks) CHECK(t <= 10.0);
  CHECK(early.n_peaks < fit.n_peaks);

  fhkin::TimeSeries featureless = sampled([](double t) { return std::exp(-t); }, 10.0, 0.1);
  CHECK_THROWS_AS(fhkin::fit_decay_rate(featureless, 8.0), std::runtime_error);
}

TEST_CASE("rebound fraction of a collapsing envelope") {
  fhkin::TimeSeries series =
      sampled([](double t) { return std::exp(-t * t / 8.0); }, 20.0, 0.01);
  double metric = fhkin::recurrence_metric(series, 16.0);
  CHECK(metric <= 1e-13);
  CHECK(metric >= 1e-15);

  CHECK_THROWS_AS(fhkin::recurrence_metric(series, 25.0), std::invalid_argument);
  CHECK_THROWS_AS(fhkin::recurrence_metric(fhkin::TimeSeries{}, 1.0), std::invalid_argument);
}

TEST_CASE("mode matrix entries by hand") {
  fhkin::HermiteParams params;
  params.M = 3;
  params.k = 0.5;
  fhkin::FilterSpec none;

  fhkin::ComplexMatrix plain = fhkin::build_mode_matrix(params, none, 0.1, 1, false);
  CHECK(std::abs(plain.at(0, 0)) == 0.0);
  CHECK(std::abs(plain.at(0, 1) - cplx(0.0, -0.5)) <= 1e-15);
  CHECK(std::abs(plain.at(1, 0) - cplx(0.0, -0.5)) <= 1e-15);
  CHECK(std::abs(plain.at(1, 2) - cplx(0.0, -0.5 * std::sqrt(2.0))) <= 1e-15);
  CHECK(std::abs(plain.at(2, 3) - cplx(0.0, -0.5 * std::sqrt(3.0))) <= 1e-15);
  CHECK(std::abs(plain.at(0, 2)) == 0.0);

  fhkin::ComplexMatrix coupled = fhkin::build_mode_matrix(params, none, 0.1, 1, true);
  CHECK(std::abs(coupled.at(0, 1) - cplx(0.0, -0.5 * std::sqrt(5.0))) <= 1e-14);
  CHECK(std::abs(coupled.at(1, 0) - cplx(0.0, -0.5 * std::sqrt(5.0))) <= 1e-14);
  CHECK(std::abs(coupled.at(1, 2) - cplx(0.0, -0.5 * std::sqrt(2.0))) <= 1e-15);

  CHECK_THROWS_AS(fhkin::build_mode_matrix(params, none, 0.1, 0, false),
                  std::invalid_argument);
  fhkin::FilterSpec chopped;
  chopped.variant = fhkin::FilterVariant::cutoff;
  CHECK_THROWS_AS(fhkin::build_mode_matrix(params, chopped, 0.1, 1, false),
                  std::invalid_argument);
}

TEST_CASE("unfiltered mode spectra sit on the imaginary axis") {
  fhkin::HermiteParams params;
  params.M = 20;
  params.k = 0.5;
  fhkin::FilterSpec none;
  for (int m : {1, 2}) {
    for (bool with_g : {false, true}) {
      fhkin::EigenReport rep = fhkin::eigen_report_filtered(params, none, 0.1, m, with_g);
      for (const cplx& ev : rep.eigenvalues) CHECK(std::abs(ev.real()) <= 1e-10);
      CHECK(std::abs(rep.spectral_abscissa) <= 1e-10);
    }
  }
}

TEST_CASE("filtering pushes the mode spectra strictly left") {
  fhkin::HermiteParams params;
  params.M = 30;
  params.k = 0.5;
  const double dt = 0.5 / std::sqrt(30.0);

  fhkin::EigenReport plain =
      fhkin::eigen_report_filtered(params, houli_filter(), dt, 1, false);
  CHECK(plain.spectral_abscissa < 0.0);
  CHECK(plain.spectral_abscissa == doctest::Approx(-0.11203291298947994).epsilon(1e-8));

  fhkin::EigenReport coupled =
      fhkin::eigen_report_filtered(params, houli_filter(), dt, 1, true);
  CHECK(coupled.spectral_abscissa < 0.0);
  CHECK(coupled.spectral_abscissa == doctest::Approx(-0.11065911676304598).epsilon(1e-8));
}

TEST_CASE("the damping diagonal alone has abscissa zero") {
  fhkin::HermiteParams params;
  params.M = 10;
  params.k = 0.5;
  fhkin::OperatorSet ops = fhkin::build_operators(params, houli_filter(), 0.1);
  fhkin::ComplexMatrix diag(params.M + 1);
  for (int i = 0; i <= params.M; ++i) diag.at(i, i) = ops.h[static_cast<size_t>(i)];
  fhkin::EigenReport rep = fhkin::eig_hessenberg(diag);
  CHECK(rep.spectral_abscissa == 0.0);
  CHECK(rep.eigenvalues.front().real() == doctest::Approx(ops.h.back()).epsilon(1e-12));
}

TEST_CASE("the filtered streaming semigroup contracts in time") {
  fhkin::HermiteParams params;
  params.M = 30;
  params.k = 0.5;
  const double dt = 0.5 / std::sqrt(30.0);
  fhkin::ComplexMatrix x = fhkin::build_mode_matrix(params, houli_filter(), dt, 1, false);

  double n10 = two_norm(fhkin::expm(x, 10.0));
  double n20 = two_norm(fhkin::expm(x, 20.0));
  double n40 = two_norm(fhkin::expm(x, 40.0));

  CHECK(n10 <= 1.01);
  CHECK(n10 >= 0.97);
  CHECK(n20 > 0.35);
  CHECK(n20 < 0.47);
  CHECK(n40 > 0.012);
  CHECK(n40 < 0.028);
  CHECK(n20 < n10);
  CHECK(n40 < n20);
}

TEST_CASE("the filter leaves the single-mode decay rate alone") {
  fhkin::SimConfig cfg = landau_config(30, 14.0, fhkin::FilterSpec{});
  cfg.model = fhkin::Model::linearized_landau;
  double plain_rate = fhkin::fit_decay_rate(fhkin::run_simulation(cfg), 12.0).rate;

  cfg.filter = houli_filter();
  double filtered_rate = fhkin::fit_decay_rate(fhkin::run_simulation(cfg), 12.0).rate;

  CHECK(std::abs(plain_rate - filtered_rate) <= 1e-3);
  CHECK(plain_rate > 0.1);
  CHECK(plain_rate < 0.2);
}

TEST_CASE("measured damping rates at reference resolutions") {
  double r90 = fhkin::fit_decay_rate(
                   fhkin::run_simulation(landau_config(90, 28.0, fhkin::FilterSpec{})), 26.0)
                   .rate;
  CHECK(std::abs(r90 - 0.154173) <= 0.002);

  double r90f = fhkin::fit_decay_rate(
                    fhkin::run_simulation(landau_config(90, 54.0, houli_filter())), 52.0)
                    .rate;
  CHECK(std::abs(r90f - 0.152892) <= 0.005);

  double r120 = fhkin::fit_decay_rate(
                    fhkin::run_simulation(landau_config(120, 32.0, houli_filter())), 30.0)
                    .rate;
  CHECK(std::abs(r120 - 0.1537) <= 0.002);
}

TEST_CASE("plasma response values against an independent tabulation") {
  struct Entry {
    cplx zeta;
    cplx value;
  };
  const std::vector<Entry> table = {
      {{0.3, 0.0}, {-5.6526333004262386e-01, 1.6199008487966309e+00}},
      {{1.0, 0.0}, {-1.0761590138255368e+00, 6.5204933217329220e-01}},
      {{2.0, 0.5}, {-5.0476983810883835e-01, 1.8319874516544984e-01}},
      {{-1.5, -0.25}, {9.9105690245346045e-01, -2.8140628076436837e-03}},
      {{0.5, -0.3}, {-1.4299728148384083e+00, 1.7960568602549873e+00}},
      {{3.5, 1.0}, {-2.7116356291618071e-01, 8.4542920955508097e-02}},
      {{-4.0, 0.1}, {2.5850028297369282e-01, 6.9511246101059791e-03}},
  };
  for (const Entry& e : table) {
    cplx z = fhkin::plasma_dispersion_z(e.zeta);
    CHECK(std::abs(z - e.value) <= 2e-9 * std::max(1.0, std::abs(e.value)));
  }
}

TEST_CASE("plasma response identities") {
  const double rtpi = std::sqrt(std::numbers::pi);

  cplx at_zero = fhkin::plasma_dispersion_z(0.0);
  CHECK(std::abs(at_zero - cplx(0.0, rtpi)) <= 1e-13);

  for (double x : {0.3, 1.0, 2.0}) {
    cplx z = fhkin::plasma_dispersion_z(x);
    CHECK(std::abs(z.imag() - rtpi * std::exp(-x * x)) <= 1e-12);
  }

  cplx zeta(0.3, 0.1);
  const double delta = 1e-5;
  cplx deriv = (fhkin::plasma_dispersion_z(zeta + delta) -
                fhkin::plasma_dispersion_z(zeta - delta)) /
               (2.0 * delta);
  cplx analytic = -2.0 * (1.0 + zeta * fhkin::plasma_dispersion_z(zeta));
  CHECK(std::abs(deriv - analytic) <= 1e-6);

  for (cplx p : {cplx(0.7, 0.3), cplx(2.0, 0.5), cplx(1.3, -0.4)}) {
    cplx mirrored = fhkin::plasma_dispersion_z(-std::conj(p));
    CHECK(std::abs(mirrored + std::conj(fhkin::plasma_dispersion_z(p))) <= 1e-12);
  }
}

TEST_CASE("plasma response is continuous across evaluation regions") {
  // The Taylor strip loses a few digits toward its edges, so the seams are
  // bounded rather than at machine precision.
  const double eps = 1e-7;

  cplx below = fhkin::plasma_dispersion_z(cplx(1.7, 1.0 - eps));
  cplx above = fhkin::plasma_dispersion_z(cplx(1.7, 1.0 + eps));
  CHECK(std::abs(below - above) <= 3e-7);

  const double theta = 0.6;
  cplx dir(std::cos(theta), std::sin(theta));
  cplx inner = fhkin::plasma_dispersion_z((2.5 - eps) * dir);
  cplx outer = fhkin::plasma_dispersion_z((2.5 + eps) * dir);
  CHECK(std::abs(inner - outer) <= 2e-7);

  cplx strip = fhkin::plasma_dispersion_z(cplx(0.4, -1.0 - eps));
  cplx reflected = fhkin::plasma_dispersion_z(cplx(0.4, -1.0 + eps));
  CHECK(std::abs(strip - reflected) <= 2e-5);

  CHECK_THROWS_AS(fhkin::plasma_dispersion_z(cplx(11.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS(fhkin::plasma_dispersion_z(cplx(0.0, -3.0)), std::domain_error);
}

TEST_CASE("dispersion roots for the Gaussian background") {
  fhkin::DispersionRoot half = fhkin::solve_dispersion(0.5);
  CHECK(half.omega_p == doctest::Approx(1.415661888605).epsilon(2e-9));
  CHECK(half.gamma == doctest::Approx(0.1533594669096).epsilon(2e-9));
  CHECK(half.residual <= 1e-10);
  CHECK(half.k == 0.5);

  fhkin::DispersionRoot lower = fhkin::solve_dispersion(0.4);
  CHECK(lower.omega_p == doctest::Approx(1.285056969654).epsilon(2e-9));
  CHECK(lower.gamma == doctest::Approx(0.06612795869075).epsilon(2e-9));
  CHECK(lower.gamma < half.gamma);

  CHECK_THROWS_AS(fhkin::solve_dispersion(0.05), std::invalid_argument);
  CHECK_THROWS_AS(fhkin::solve_dispersion(1.5), std::invalid_argument);
}

TEST_CASE("the root also kills an independently integrated dispersion function") {
  fhkin::DispersionRoot root = fhkin::solve_dispersion(0.5);
  cplx omega(root.omega_p, -root.gamma);
  double at_root = std::abs(dispersion_by_quadrature(0.5, omega));
  CHECK(at_root <= 1e-8);

  for (cplx offset : {cplx(0.01, 0.0), cplx(-0.01, 0.0), cplx(0.0, 0.01), cplx(0.0, -0.01)}) {
    double nearby = std::abs(dispersion_by_quadrature(0.5, omega + offset));
    CHECK(nearby >= 100.0 * at_root);
  }
}

}  // TEST_SUITE
