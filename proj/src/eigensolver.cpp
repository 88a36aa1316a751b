#include "magiso/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace magiso {

void SparseHermitian::multiply(const std::vector<cdouble>& x, std::vector<cdouble>& y,
                               Exec exec) const {
  y.resize(n);
  const auto row = [&](std::size_t i) {
    cdouble s{0.0, 0.0};
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += vals[k] * x[col_idx[k]];
    y[i] = s;
  };
  parallel_for_each(exec, static_cast<std::size_t>(n), row);
}

double SparseHermitian::max_abs() const {
  double m = 0.0;
  for (const cdouble& v : vals) m = std::max(m, std::abs(v));
  return m;
}

double SparseHermitian::hermiticity_defect() const {
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const int j = col_idx[k];
      if (j < i) continue;
      // locate (j, i)
      cdouble mirrored{0.0, 0.0};
      for (int l = row_ptr[j]; l < row_ptr[j + 1]; ++l)
        if (col_idx[l] == i) {
          mirrored = vals[l];
          break;
        }
      worst = std::max(worst, std::abs(vals[k] - std::conj(mirrored)));
    }
  }
  return worst;
}

bool SparseHermitian::is_tridiagonal() const {
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      if (std::abs(col_idx[k] - i) > 1) return false;
  return true;
}

void SparseBuilder::add(int row, int col, cdouble value) {
  entries_[row].emplace_back(col, value);
}

SparseHermitian SparseBuilder::compress(bool real_symmetric) const {
  SparseHermitian a;
  a.n = n_;
  a.real_symmetric = real_symmetric;
  a.row_ptr.assign(n_ + 1, 0);
  std::vector<std::pair<int, cdouble>> row;
  for (int i = 0; i < n_; ++i) {
    row.assign(entries_[i].begin(), entries_[i].end());
    std::stable_sort(row.begin(), row.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    int last = -1;
    for (const auto& [c, v] : row) {
      if (c == last) {
        a.vals.back() += v;
      } else {
        a.col_idx.push_back(c);
        a.vals.push_back(v);
        last = c;
      }
    }
    a.row_ptr[i + 1] = static_cast<int>(a.col_idx.size());
  }
  return a;
}

cdouble dot_conj(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  cdouble s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(const std::vector<cdouble>& v) {
  double s = 0.0;
  for (const cdouble& z : v) s += std::norm(z);
  return std::sqrt(s);
}

namespace {

void axpy(double alpha, const std::vector<cdouble>& x, std::vector<cdouble>& y) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// Shifted operator A = K - sigma M applied without forming the matrix.
struct ShiftedOp {
  const SparseHermitian& K;
  const SparseHermitian& M;
  double sigma;
  mutable std::vector<cdouble> tmp;

  void apply(const std::vector<cdouble>& x, std::vector<cdouble>& y) const {
    K.multiply(x, y);
    M.multiply(x, tmp);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= sigma * tmp[i];
  }

  std::vector<double> jacobi_diag() const {
    std::vector<double> d(K.n, 1.0);
    for (int i = 0; i < K.n; ++i) {
      double kd = 0.0, md = 0.0;
      for (int k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k)
        if (K.col_idx[k] == i) kd = K.vals[k].real();
      for (int k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k)
        if (M.col_idx[k] == i) md = M.vals[k].real();
      const double v = kd - sigma * md;
      d[i] = v > 0.0 ? 1.0 / v : 1.0;
    }
    return d;
  }
};

struct CgOutcome {
  bool ok = true;          // false on non-positive curvature (indefinite shift)
  int iterations = 0;
};

// Jacobi-preconditioned CG on the shifted operator. Dot products are serial
// so the result is identical for any thread count.
CgOutcome pcg(const ShiftedOp& op, const std::vector<cdouble>& b,
              std::vector<cdouble>& x, double tol, int max_iter) {
  const std::size_t n = b.size();
  const std::vector<double> inv_diag = op.jacobi_diag();
  std::vector<cdouble> r(n), z(n), p(n), q(n);
  op.apply(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), cdouble{0.0, 0.0});
    return {};
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  cdouble rz = dot_conj(r, z);
  CgOutcome out;
  for (int it = 0; it < max_iter; ++it) {
    if (norm2(r) <= tol * bnorm) break;
    op.apply(p, q);
    const double p_ap = dot_conj(p, q).real();
    if (!(p_ap > 0.0)) {
      out.ok = false;
      out.iterations = it;
      return out;
    }
    const double alpha = rz.real() / p_ap;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const cdouble rz_new = dot_conj(r, z);
    const double beta = rz_new.real() / rz.real();
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rz = rz_new;
    out.iterations = it + 1;
  }
  return out;
}

// Direct LDL^T solve for tridiagonal shifted operators; exact and cheap, and
// robust at the extreme conditioning of strongly weighted radial problems.
struct TridiagFactor {
  std::vector<double> diag, lower;  // after factorization
  bool ok = true;

  static TridiagFactor build(const SparseHermitian& K, const SparseHermitian& M,
                             double sigma) {
    TridiagFactor f;
    const int n = K.n;
    f.diag.assign(n, 0.0);
    f.lower.assign(n, 0.0);
    std::vector<double> sub(n, 0.0);
    const auto fetch = [](const SparseHermitian& a, int i, int j) {
      for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
        if (a.col_idx[k] == j) return a.vals[k].real();
      return 0.0;
    };
    for (int i = 0; i < n; ++i) {
      f.diag[i] = fetch(K, i, i) - sigma * fetch(M, i, i);
      if (i > 0) sub[i] = fetch(K, i, i - 1) - sigma * fetch(M, i, i - 1);
    }
    for (int i = 0; i < n; ++i) {
      if (i > 0) {
        const double l = sub[i] / f.diag[i - 1];
        f.lower[i] = l;
        f.diag[i] -= l * sub[i];
      }
      if (!(f.diag[i] > 0.0)) {
        f.ok = false;
        return f;
      }
    }
    return f;
  }

  void solve(const std::vector<cdouble>& b, std::vector<cdouble>& x) const {
    const int n = static_cast<int>(diag.size());
    x = b;
    for (int i = 1; i < n; ++i) x[i] -= lower[i] * x[i - 1];
    for (int i = 0; i < n; ++i) x[i] /= diag[i];
    for (int i = n - 2; i >= 0; --i) x[i] -= lower[i + 1] * x[i + 1];
  }
};

double rayleigh(const SparseHermitian& K, const SparseHermitian& M,
                const std::vector<cdouble>& x, std::vector<cdouble>& kx,
                std::vector<cdouble>& mx) {
  K.multiply(x, kx);
  M.multiply(x, mx);
  return dot_conj(x, kx).real() / dot_conj(x, mx).real();
}

}  // namespace

std::vector<cdouble> inner_solve(const SparseHermitian& A, const std::vector<cdouble>& b,
                                 double tol) {
  if (A.is_tridiagonal() && A.real_symmetric) {
    SparseHermitian zero_m;
    zero_m.n = A.n;
    zero_m.row_ptr.assign(A.n + 1, 0);
    const TridiagFactor f = TridiagFactor::build(A, zero_m, 0.0);
    if (!f.ok) throw std::invalid_argument("inner_solve: matrix not positive definite");
    std::vector<cdouble> x;
    f.solve(b, x);
    return x;
  }
  SparseHermitian zero_m;
  zero_m.n = A.n;
  zero_m.row_ptr.assign(A.n + 1, 0);
  const ShiftedOp op{A, zero_m, 0.0, {}};
  std::vector<cdouble> x(b.size(), cdouble{0.0, 0.0});
  const CgOutcome res = pcg(op, b, x, tol, 20 * A.n + 100);
  if (!res.ok) throw std::invalid_argument("inner_solve: matrix not positive definite");
  return x;
}

SolveReport smallest_eigenpair(const SparseHermitian& K, const SparseHermitian& M,
                               const EigOptions& options) {
  const int n = K.n;
  if (M.n != n) throw std::invalid_argument("smallest_eigenpair: size mismatch");

  // M must be positive definite: cheap necessary check on the diagonal.
  for (int i = 0; i < n; ++i) {
    double md = 0.0;
    for (int k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k)
      if (M.col_idx[k] == i) md = M.vals[k].real();
    if (!(md > 0.0))
      throw std::invalid_argument("smallest_eigenpair: M has a non-positive diagonal");
  }

  const bool tridiag = K.is_tridiagonal() && M.is_tridiagonal() && K.real_symmetric &&
                       M.real_symmetric;

  // Start vector: mass-normalized all-ones with a seeded +-1e-3 perturbation.
  std::mt19937_64 rng(options.seed);
  std::vector<cdouble> x(n);
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x[i] = cdouble{1.0 + 2e-3 * (u - 0.5), 0.0};
  }

  SolveReport rep;
  std::vector<cdouble> kx(n), mx(n), rhs(n), y(n);

  double lambda = rayleigh(K, M, x, kx, mx);
  {
    const double mn = std::sqrt(dot_conj(x, mx).real());
    for (auto& v : x) v /= mn;
  }

  double sigma = options.spectrum_floor >= 0.0 ? 0.9 * options.spectrum_floor
                                               : options.spectrum_floor;
  int restarts = 0;
  const double inner_tol = std::max(1e-14, options.tol * options.inner_tol_factor);

  for (int it = 0; it < options.max_iter; ++it) {
    rep.shift_history.push_back(sigma);
    M.multiply(x, rhs);

    bool solve_ok = true;
    if (tridiag) {
      const TridiagFactor f = TridiagFactor::build(K, M, sigma);
      if (f.ok) {
        f.solve(rhs, y);
      } else {
        solve_ok = false;
      }
    } else {
      const ShiftedOp op{K, M, sigma, {}};
      std::vector<cdouble> sol = x;  // warm start from the current iterate
      const CgOutcome res = pcg(op, rhs, sol, inner_tol, 20 * n + 200);
      solve_ok = res.ok;
      if (solve_ok) y = std::move(sol);
    }

    if (!solve_ok) {
      // shifted operator went indefinite: move the shift down and retry
      if (++restarts > 40)
        throw std::runtime_error(
            "smallest_eigenpair: shifted solves stayed indefinite after restarts "
            "(last residual " +
            std::to_string(rep.final_residual) + ")");
      if (sigma > 0.0)
        sigma = 0.0;
      else if (sigma == 0.0)
        sigma = -1.0;
      else
        sigma *= 2.0;
      continue;
    }

    M.multiply(y, mx);
    const double mn = std::sqrt(dot_conj(y, mx).real());
    for (auto& v : y) v /= mn;
    x = y;

    lambda = rayleigh(K, M, x, kx, mx);
    for (int i = 0; i < n; ++i) y[i] = kx[i] - lambda * mx[i];
    const double knorm = norm2(kx);
    const double resid = knorm > 0.0 ? norm2(y) / knorm : 0.0;
    rep.iterations = it + 1;
    rep.final_residual = resid;
    rep.residual_history.push_back(resid);
    if (resid <= options.tol) {
      rep.converged = true;
      break;
    }
    // Tighten the shift once the estimate has settled, staying below the
    // current Rayleigh quotient by a residual-scaled margin. Indefinite
    // failures are caught and restarted above.
    if (resid < 1e-2) {
      sigma = std::max(sigma, lambda - std::max(1e-4, 10.0 * resid) * std::abs(lambda));
    }
  }

  if (!rep.converged)
    throw std::runtime_error("smallest_eigenpair: no convergence after " +
                             std::to_string(rep.iterations) +
                             " iterations (residual " +
                             std::to_string(rep.final_residual) + ")");

  // Deterministic phase: rotate so the largest-magnitude entry is real
  // positive (for real problems this makes the vector sign-definite).
  std::size_t imax = 0;
  double vmax = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > vmax) {
      vmax = std::abs(x[i]);
      imax = i;
    }
  if (vmax > 0.0) {
    const cdouble phase = x[imax] / vmax;
    for (auto& v : x) v /= phase;
  }

  rep.eigenvalue = lambda;
  rep.eigenvector = std::move(x);
  return rep;
}

}  // namespace magiso
