#pragma once

// Dense eigenvalue oracle for the solver tests: cyclic Jacobi rotations on a
// real symmetric matrix, with complex Hermitian problems handled through the
// [[Re, -Im], [Im, Re]] embedding and generalized pairs through a dense
// Cholesky reduction. Test-only; independent of the library's solver path.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace testsupport {

using cdouble = std::complex<double>;

class DenseReal {
 public:
  explicit DenseReal(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}
  double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  int size() const { return n_; }

 private:
  int n_;
  std::vector<double> a_;
};

inline std::vector<double> jacobi_eigenvalues(DenseReal a, int sweeps = 60) {
  const int n = a.size();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a.at(p, q) * a.at(p, q);
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a.at(k, p), akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a.at(p, k), aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a.at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

class DenseComplex {
 public:
  explicit DenseComplex(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}
  cdouble& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  cdouble at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  int size() const { return n_; }

 private:
  int n_;
  std::vector<cdouble> a_;
};

inline std::vector<double> hermitian_eigenvalues(const DenseComplex& h) {
  const int n = h.size();
  DenseReal e(2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      e.at(i, j) = h.at(i, j).real();
      e.at(i + n, j + n) = h.at(i, j).real();
      e.at(i, j + n) = -h.at(i, j).imag();
      e.at(i + n, j) = h.at(i, j).imag();
    }
  }
  std::vector<double> doubled = jacobi_eigenvalues(std::move(e));
  std::vector<double> ev;  // each eigenvalue appears twice in the embedding
  for (std::size_t k = 0; k < doubled.size(); k += 2) ev.push_back(doubled[k]);
  return ev;
}

// Cholesky M = L L^H; throws if M is not positive definite.
inline DenseComplex cholesky(const DenseComplex& m) {
  const int n = m.size();
  DenseComplex l(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      cdouble s = m.at(i, j);
      for (int k = 0; k < j; ++k) s -= l.at(i, k) * std::conj(l.at(j, k));
      if (i == j) {
        if (!(s.real() > 0.0)) throw std::runtime_error("cholesky: not positive definite");
        l.at(i, j) = std::sqrt(s.real());
      } else {
        l.at(i, j) = s / l.at(j, j).real();
      }
    }
  }
  return l;
}

// Eigenvalues of K x = lambda M x via S = L^{-1} K L^{-H}.
inline std::vector<double> generalized_hermitian_eigenvalues(const DenseComplex& k,
                                                             const DenseComplex& m) {
  const int n = k.size();
  const DenseComplex l = cholesky(m);
  // forward solve L Y = K  (column by column)
  DenseComplex y(n);
  for (int col = 0; col < n; ++col) {
    for (int i = 0; i < n; ++i) {
      cdouble s = k.at(i, col);
      for (int p = 0; p < i; ++p) s -= l.at(i, p) * y.at(p, col);
      y.at(i, col) = s / l.at(i, i).real();
    }
  }
  // S = Y L^{-H}: solve S L^H = Y, i.e. for each row: L conj-transposed back-substitution
  DenseComplex s(n);
  for (int row = 0; row < n; ++row) {
    for (int j = 0; j < n; ++j) {
      cdouble v = y.at(row, j);
      for (int p = 0; p < j; ++p) v -= s.at(row, p) * std::conj(l.at(j, p));
      s.at(row, j) = v / l.at(j, j).real();
    }
  }
  return hermitian_eigenvalues(s);
}

}  // namespace testsupport
