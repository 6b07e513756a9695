#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace fhkin {

using cplx = std::complex<double>;

struct ComplexMatrix {
  int n = 0;
  std::vector<cplx> a;  // row-major, n*n

  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim) : n(dim), a(static_cast<size_t>(dim) * dim) {}

  cplx& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const cplx& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

  static ComplexMatrix identity(int dim);
};

struct EigenReport {
  std::vector<cplx> eigenvalues;  // sorted by (real, imag)
  double spectral_abscissa = 0.0;
  int iterations = 0;             // QR sweeps consumed
};

// Eigenvalues of an upper Hessenberg matrix by shifted QR with deflation
// (Wilkinson shift from the trailing 2x2 of the active block). Inputs here are
// tridiagonal, hence Hessenberg; non-Hessenberg input and n > 400 are rejected.
// Throws after the sweep budget (100*n) without full deflation.
EigenReport eig_hessenberg(const ComplexMatrix& m);

// exp(t*m) by scaling and squaring: scale so the 1-norm is at most 1, sum the
// Taylor series to machine precision, square back. Throws on non-finite
// intermediates.
ComplexMatrix expm(const ComplexMatrix& m, double t);

// Ordinary least squares line through (t, y) points; returns {slope,
// intercept}. Rejects fewer than two points or all-equal abscissas.
std::pair<double, double> fit_line(const std::vector<std::pair<double, double>>& points);

// Strict interlacing of eigenvalues between every pair of consecutive leading
// principal submatrices of a real symmetric tridiagonal matrix. diag has n
// entries, off has n-1; zero off-diagonal entries are rejected.
bool char_poly_roots_interlace(const std::vector<double>& diag,
                               const std::vector<double>& off);

// Eigenvalues of a real symmetric tridiagonal matrix, ascending.
std::vector<double> eig_sym_tridiag(const std::vector<double>& diag,
                                    const std::vector<double>& off);

// Unit eigenvector for a known eigenvalue of a real symmetric tridiagonal
// matrix, by inverse iteration; the residual ||T v - lambda v|| is driven
// below 1e-10 * ||T||.
std::vector<double> sym_tridiag_eigenvector(const std::vector<double>& diag,
                                            const std::vector<double>& off,
                                            double lambda);

}
