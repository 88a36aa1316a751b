#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "magiso/parallel.hpp"

namespace magiso {

using cdouble = std::complex<double>;

// Sparse Hermitian matrix in compressed-row form. The pattern must be
// structurally symmetric; values Hermitian within roundoff.
struct SparseHermitian {
  int n = 0;
  std::vector<int> row_ptr;   // size n+1
  std::vector<int> col_idx;   // sorted within each row
  std::vector<cdouble> vals;
  bool real_symmetric = false;

  // y = A x
  void multiply(const std::vector<cdouble>& x, std::vector<cdouble>& y,
                Exec exec = Exec::Parallel) const;

  double max_abs() const;
  // max_i |A - A^H| entry magnitude, for the Hermiticity invariant.
  double hermiticity_defect() const;
  // true when every row touches only columns i-1, i, i+1
  bool is_tridiagonal() const;
};

// Incremental builder: accumulate duplicate (row, col) contributions, then
// compress into CSR with deterministic ordering.
class SparseBuilder {
 public:
  explicit SparseBuilder(int n) : n_(n), entries_(n) {}
  void add(int row, int col, cdouble value);
  SparseHermitian compress(bool real_symmetric) const;

 private:
  int n_;
  std::vector<std::vector<std::pair<int, cdouble>>> entries_;
};

struct SolveReport {
  double eigenvalue = 0.0;
  std::vector<cdouble> eigenvector;  // M-normalized
  int iterations = 0;
  double final_residual = 0.0;  // ||Kx - lambda Mx|| / ||Kx||
  std::vector<double> shift_history;
  std::vector<double> residual_history;
  bool converged = false;
};

struct EigOptions {
  double tol = 1e-10;
  int max_iter = 400;
  std::uint64_t seed = 1;
  // Known lower bound on the spectrum (e.g. the field strength for the
  // magnetic form); keeps the shifted operator positive definite.
  double spectrum_floor = 0.0;
  double inner_tol_factor = 0.1;  // inner solves to tol * factor
};

// Smallest eigenpair of K x = lambda M x (K Hermitian, M Hermitian positive
// definite) by shift-and-invert inverse iteration. Inner solves use a
// Jacobi-preconditioned conjugate gradient, or a direct factorization when
// the matrix is tridiagonal. Deterministic for a fixed seed. Throws
// std::runtime_error on non-convergence (with the last iterate's residual
// in the message) and std::invalid_argument on an indefinite M.
SolveReport smallest_eigenpair(const SparseHermitian& K, const SparseHermitian& M,
                               const EigOptions& options = {});

// Solve A x = b for Hermitian positive definite A to relative residual tol.
std::vector<cdouble> inner_solve(const SparseHermitian& A, const std::vector<cdouble>& b,
                                 double tol);

// Deterministic helpers shared by the solver and the tests.
cdouble dot_conj(const std::vector<cdouble>& a, const std::vector<cdouble>& b);
double norm2(const std::vector<cdouble>& v);

}  // namespace magiso
