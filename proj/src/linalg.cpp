#include "fhkin/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fhkin {

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

namespace {

double norm1(const ComplexMatrix& m) {
  double best = 0.0;
  for (int j = 0; j < m.n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m.n; ++i) s += std::abs(m.at(i, j));
    best = std::max(best, s);
  }
  return best;
}

bool all_finite(const ComplexMatrix& m) {
  for (const cplx& v : m.a)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

ComplexMatrix multiply(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix z(x.n);
  for (int i = 0; i < x.n; ++i) {
    for (int l = 0; l < x.n; ++l) {
      cplx xv = x.at(i, l);
      if (xv == cplx(0.0)) continue;
      const cplx* yrow = &y.a[static_cast<size_t>(l) * y.n];
      cplx* zrow = &z.a[static_cast<size_t>(i) * z.n];
      for (int j = 0; j < x.n; ++j) zrow[j] += xv * yrow[j];
    }
  }
  return z;
}

// Eigenvalues of [[a, b], [c, d]], written to out[0], out[1].
void eig_2x2(cplx a, cplx b, cplx c, cplx d, cplx* out) {
  cplx mid = 0.5 * (a + d);
  cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  out[0] = mid + disc;
  out[1] = mid - disc;
}

// Shift candidate: the trailing-2x2 eigenvalue closer to the corner entry.
cplx wilkinson_shift(const ComplexMatrix& h, int hi) {
  cplx ev[2];
  eig_2x2(h.at(hi - 1, hi - 1), h.at(hi - 1, hi), h.at(hi, hi - 1), h.at(hi, hi), ev);
  cplx corner = h.at(hi, hi);
  return (std::abs(ev[0] - corner) <= std::abs(ev[1] - corner)) ? ev[0] : ev[1];
}

struct Givens {
  cplx c, s;  // |c|^2 + |s|^2 = 1; rotation maps (x, y) to (r, 0)
};

Givens make_givens(cplx x, cplx y) {
  double r = std::sqrt(std::norm(x) + std::norm(y));
  if (r == 0.0) return {1.0, 0.0};
  return {x / r, y / r};
}

// One explicit shifted QR pass on the active window [lo, hi].
void qr_sweep(ComplexMatrix& h, int lo, int hi, cplx mu) {
  for (int i = lo; i <= hi; ++i) h.at(i, i) -= mu;

  std::vector<Givens> rots(static_cast<size_t>(hi - lo));
  for (int j = lo; j < hi; ++j) {
    Givens g = make_givens(h.at(j, j), h.at(j + 1, j));
    rots[static_cast<size_t>(j - lo)] = g;
    for (int col = j; col <= hi; ++col) {
      cplx a = h.at(j, col);
      cplx b = h.at(j + 1, col);
      h.at(j, col) = std::conj(g.c) * a + std::conj(g.s) * b;
      h.at(j + 1, col) = -g.s * a + g.c * b;
    }
    h.at(j + 1, j) = 0.0;
  }
  for (int j = lo; j < hi; ++j) {
    Givens g = rots[static_cast<size_t>(j - lo)];
    int last_row = std::min(j + 1, hi);
    for (int row = lo; row <= last_row; ++row) {
      cplx u = h.at(row, j);
      cplx v = h.at(row, j + 1);
      h.at(row, j) = g.c * u + g.s * v;
      h.at(row, j + 1) = -std::conj(g.s) * u + std::conj(g.c) * v;
    }
  }
  for (int i = lo; i <= hi; ++i) h.at(i, i) += mu;
}

}  // namespace

EigenReport eig_hessenberg(const ComplexMatrix& m) {
  if (m.n < 1) throw std::invalid_argument("eig_hessenberg: empty matrix");
  if (m.n > 400) throw std::invalid_argument("eig_hessenberg: n > 400");
  if (!all_finite(m)) throw std::invalid_argument("eig_hessenberg: non-finite entries");
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j + 1 < i; ++j)
      if (m.at(i, j) != cplx(0.0))
        throw std::invalid_argument("eig_hessenberg: input is not upper Hessenberg");

  ComplexMatrix h = m;
  const double scale = std::max(norm1(h), 1e-300);
  const int budget = 100 * m.n;
  int sweeps = 0;

  auto negligible = [&](int i) {
    double tol = 1e-14 * (std::abs(h.at(i - 1, i - 1)) + std::abs(h.at(i, i)));
    if (tol == 0.0) tol = 1e-14 * scale;
    return std::abs(h.at(i, i - 1)) <= tol;
  };

  std::vector<cplx> eigenvalues;
  eigenvalues.reserve(static_cast<size_t>(m.n));
  int hi = m.n - 1;
  int stuck = 0;
  while (hi >= 0) {
    if (hi == 0) {
      eigenvalues.push_back(h.at(0, 0));
      break;
    }
    if (negligible(hi)) {
      h.at(hi, hi - 1) = 0.0;
      eigenvalues.push_back(h.at(hi, hi));
      --hi;
      stuck = 0;
      continue;
    }
    int lo = hi;
    while (lo > 0 && !negligible(lo)) --lo;
    if (lo > 0) h.at(lo, lo - 1) = 0.0;
    if (hi - lo == 1) {
      cplx ev[2];
      eig_2x2(h.at(lo, lo), h.at(lo, hi), h.at(hi, lo), h.at(hi, hi), ev);
      eigenvalues.push_back(ev[0]);
      eigenvalues.push_back(ev[1]);
      hi = lo - 1;
      stuck = 0;
      continue;
    }
    cplx mu = wilkinson_shift(h, hi);
    if (++stuck % 20 == 0) mu = h.at(hi, hi) + 0.75 * std::abs(h.at(hi, hi - 1));
    qr_sweep(h, lo, hi, mu);
    if (++sweeps > budget)
      throw std::runtime_error("eig_hessenberg: QR iteration did not converge");
  }

  std::sort(eigenvalues.begin(), eigenvalues.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  EigenReport report;
  report.eigenvalues = std::move(eigenvalues);
  report.spectral_abscissa = report.eigenvalues.empty() ? 0.0 : report.eigenvalues.front().real();
  for (const cplx& ev : report.eigenvalues)
    report.spectral_abscissa = std::max(report.spectral_abscissa, ev.real());
  report.iterations = sweeps;
  return report;
}

ComplexMatrix expm(const ComplexMatrix& m, double t) {
  ComplexMatrix scaled(m.n);
  for (size_t i = 0; i < m.a.size(); ++i) scaled.a[i] = t * m.a[i];
  if (!all_finite(scaled)) throw std::invalid_argument("expm: non-finite input");

  double nrm = norm1(scaled);
  int squarings = 0;
  while (nrm > 1.0) {
    nrm *= 0.5;
    if (++squarings > 300) throw std::runtime_error("expm: norm too large to scale");
  }
  double factor = std::ldexp(1.0, -squarings);
  for (cplx& v : scaled.a) v *= factor;

  ComplexMatrix result = ComplexMatrix::identity(m.n);
  ComplexMatrix term = ComplexMatrix::identity(m.n);
  for (int order = 1; order <= 40; ++order) {
    term = multiply(term, scaled);
    double inv = 1.0 / order;
    for (cplx& v : term.a) v *= inv;
    for (size_t i = 0; i < result.a.size(); ++i) result.a[i] += term.a[i];
    if (norm1(term) <= 1e-17 * std::max(norm1(result), 1.0)) break;
  }
  for (int s = 0; s < squarings; ++s) {
    result = multiply(result, result);
    if (!all_finite(result)) throw std::runtime_error("expm: overflow while squaring");
  }
  return result;
}

std::pair<double, double> fit_line(const std::vector<std::pair<double, double>>& points) {
  size_t n = points.size();
  if (n < 2) throw std::invalid_argument("fit_line: need at least two points");
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (const auto& [t, y] : points) {
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  double den = n * stt - st * st;
  if (std::abs(den) <= 1e-12 * std::max(1.0, n * stt))
    throw std::invalid_argument("fit_line: abscissas are all equal");
  double slope = (n * sty - st * sy) / den;
  double intercept = (sy - slope * st) / n;
  return {slope, intercept};
}

std::vector<double> eig_sym_tridiag(const std::vector<double>& diag,
                                    const std::vector<double>& off) {
  int n = static_cast<int>(diag.size());
  if (n < 1) throw std::invalid_argument("eig_sym_tridiag: empty matrix");
  if (off.size() + 1 != diag.size())
    throw std::invalid_argument("eig_sym_tridiag: off-diagonal length mismatch");
  ComplexMatrix m(n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = diag[static_cast<size_t>(i)];
    if (i + 1 < n) {
      m.at(i, i + 1) = off[static_cast<size_t>(i)];
      m.at(i + 1, i) = off[static_cast<size_t>(i)];
    }
  }
  EigenReport report = eig_hessenberg(m);
  std::vector<double> values;
  values.reserve(report.eigenvalues.size());
  for (const cplx& ev : report.eigenvalues) values.push_back(ev.real());
  std::sort(values.begin(), values.end());
  return values;
}

bool char_poly_roots_interlace(const std::vector<double>& diag,
                               const std::vector<double>& off) {
  int n = static_cast<int>(diag.size());
  if (n < 2) throw std::invalid_argument("char_poly_roots_interlace: need n >= 2");
  if (off.size() + 1 != diag.size())
    throw std::invalid_argument("char_poly_roots_interlace: off-diagonal length mismatch");
  for (double v : off)
    if (v == 0.0) throw std::invalid_argument("char_poly_roots_interlace: zero subdiagonal");

  std::vector<double> prev =
      eig_sym_tridiag({diag.begin(), diag.begin() + 1}, {});
  for (int size = 2; size <= n; ++size) {
    std::vector<double> cur = eig_sym_tridiag(
        {diag.begin(), diag.begin() + size}, {off.begin(), off.begin() + (size - 1)});
    for (int i = 0; i + 1 < size; ++i) {
      if (!(cur[static_cast<size_t>(i)] < prev[static_cast<size_t>(i)] &&
            prev[static_cast<size_t>(i)] < cur[static_cast<size_t>(i) + 1]))
        return false;
    }
    prev = std::move(cur);
  }
  return true;
}

std::vector<double> sym_tridiag_eigenvector(const std::vector<double>& diag,
                                            const std::vector<double>& off,
                                            double lambda) {
  int n = static_cast<int>(diag.size());
  if (n < 1) throw std::invalid_argument("sym_tridiag_eigenvector: empty matrix");
  if (off.size() + 1 != diag.size())
    throw std::invalid_argument("sym_tridiag_eigenvector: off-diagonal length mismatch");

  double tnorm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = std::abs(diag[static_cast<size_t>(i)]);
    if (i > 0) row += std::abs(off[static_cast<size_t>(i - 1)]);
    if (i + 1 < n) row += std::abs(off[static_cast<size_t>(i)]);
    tnorm = std::max(tnorm, row);
  }
  tnorm = std::max(tnorm, 1e-300);

  // Inverse iteration: repeatedly solve (T - lambda I) w = v with a partially
  // pivoted tridiagonal elimination (du2 holds the pivoting fill-in).
  auto solve_shifted = [&](std::vector<double> rhs) {
    std::vector<double> dl(static_cast<size_t>(n), 0.0), d(static_cast<size_t>(n), 0.0),
        du(static_cast<size_t>(n), 0.0), du2(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      d[static_cast<size_t>(i)] = diag[static_cast<size_t>(i)] - lambda;
      if (i > 0) dl[static_cast<size_t>(i)] = off[static_cast<size_t>(i - 1)];
      if (i + 1 < n) du[static_cast<size_t>(i)] = off[static_cast<size_t>(i)];
    }
    for (int i = 0; i + 1 < n; ++i) {
      size_t si = static_cast<size_t>(i);
      if (std::abs(d[si]) < std::abs(dl[si + 1])) {
        std::swap(d[si], dl[si + 1]);
        std::swap(du[si], d[si + 1]);
        if (i + 2 < n) {
          du2[si] = du[si + 1];
          du[si + 1] = 0.0;
        }
        std::swap(rhs[si], rhs[si + 1]);
      }
      if (d[si] == 0.0) d[si] = 1e-14 * tnorm;
      double mult = dl[si + 1] / d[si];
      d[si + 1] -= mult * du[si];
      if (i + 2 < n) du[si + 1] -= mult * du2[si];
      rhs[si + 1] -= mult * rhs[si];
    }
    if (d[static_cast<size_t>(n - 1)] == 0.0) d[static_cast<size_t>(n - 1)] = 1e-14 * tnorm;
    for (int i = n - 1; i >= 0; --i) {
      size_t si = static_cast<size_t>(i);
      double v = rhs[si];
      if (i + 1 < n) v -= du[si] * rhs[si + 1];
      if (i + 2 < n) v -= du2[si] * rhs[si + 2];
      rhs[si] = v / d[si];
    }
    return rhs;
  };

  std::vector<double> v(static_cast<size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  double residual = tnorm;
  for (int iter = 0; iter < 8; ++iter) {
    std::vector<double> w = solve_shifted(v);
    double nw = 0.0;
    for (double x : w) nw += x * x;
    nw = std::sqrt(nw);
    if (!(nw > 0.0) || !std::isfinite(nw))
      throw std::runtime_error("sym_tridiag_eigenvector: iteration broke down");
    for (size_t i = 0; i < w.size(); ++i) w[i] /= nw;
    v = std::move(w);

    residual = 0.0;
    for (int i = 0; i < n; ++i) {
      size_t si = static_cast<size_t>(i);
      double r = (diag[si] - lambda) * v[si];
      if (i > 0) r += off[si - 1] * v[si - 1];
      if (i + 1 < n) r += off[si] * v[si + 1];
      residual += r * r;
    }
    residual = std::sqrt(residual);
    if (residual <= 1e-10 * tnorm) break;
  }
  if (residual > 1e-10 * tnorm)
    throw std::runtime_error("sym_tridiag_eigenvector: residual did not converge");
  if (v[0] < 0.0)
    for (double& x : v) x = -x;
  return v;
}

}
