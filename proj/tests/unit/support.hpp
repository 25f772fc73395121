#pragma once

// Seeded generators and independent dense oracles shared by the unit tests.
// Oracles deliberately avoid the library's own helpers (partial_transpose,
// realign, symmetry_project, ...) so they can catch errors in them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "jcbound/state_core.hpp"

namespace testsupport {

using jcbound::Complex;
using jcbound::DenseMatrix;
using jcbound::DenseVector;
using jcbound::SymmetricState;

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  Complex phase() { return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi)); }

  /// Valid state; coherences fill a random fraction of the positivity bound,
  /// some populations are zeroed to exercise boundaries.
  SymmetricState state(std::size_t n, bool normalized = true) {
    SymmetricState s;
    for (std::size_t k = 0; k < n; ++k) {
      s.a.push_back(uniform() < 0.1 ? 0.0 : uniform());
      s.b.push_back(uniform() < 0.1 ? 0.0 : uniform());
    }
    if (s.trace() == 0.0) s.a[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
      s.c.push_back(uniform() * std::sqrt(s.a[k] * s.b[k - 1]) * phase());
    }
    if (normalized) s = s.normalized_copy();
    return s;
  }

  /// PPT by construction: |c_n| below both bounds.
  SymmetricState ppt_state(std::size_t n) {
    SymmetricState s = state(n);
    for (std::size_t k = 1; k < n; ++k) {
      const double cap = std::sqrt(std::min(s.a[k] * s.b[k - 1], s.a[k - 1] * s.b[k]));
      s.c[k - 1] = uniform() * cap * phase();
    }
    return s;
  }

  DenseMatrix hermitian(Eigen::Index dim) {
    DenseMatrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(uniform(-1, 1), uniform(-1, 1));
    }
    return 0.5 * (m + m.adjoint());
  }

  DenseMatrix psd(Eigen::Index dim) {
    const DenseMatrix h = hermitian(dim);
    return h * h.adjoint();
  }
};

// |i, n> with i in {0, 1}.
inline Eigen::Index idx(int i, int n, int qudit) { return static_cast<Eigen::Index>(i * qudit + n); }

/// Partial transpose on the qudit, written from the definition
/// <i n|X^T_B|j m> = <i m|X|j n>.
inline DenseMatrix pt_oracle(const DenseMatrix& x) {
  const int n = static_cast<int>(x.rows() / 2);
  DenseMatrix out(x.rows(), x.cols());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) out(idx(i, p, n), idx(j, q, n)) = x(idx(i, q, n), idx(j, p, n));
  return out;
}

inline std::vector<double> eigenvalues(const DenseMatrix& h) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return v;
}

/// Paper-normalized negativity: 2 * sum |negative eigenvalues of rho^T_B|.
inline double negativity_oracle(const DenseMatrix& x) {
  double acc = 0.0;
  for (double v : eigenvalues(pt_oracle(x))) acc += std::max(0.0, -v);
  return 2.0 * acc;
}

/// Realignment from the definition: R_{(i,j),(p,q)} = <i p|X|j q>.
inline DenseMatrix realign_oracle(const DenseMatrix& x) {
  const int n = static_cast<int>(x.rows() / 2);
  DenseMatrix r(4, n * n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) r(i * 2 + j, p * n + q) = x(idx(i, p, n), idx(j, q, n));
  return r;
}

inline std::vector<double> singular_values_oracle(const DenseMatrix& m) {
  Eigen::BDCSVD<DenseMatrix> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

inline double trace_norm_oracle(const DenseMatrix& m) {
  double t = 0.0;
  for (double v : singular_values_oracle(m)) t += v;
  return t;
}

/// Qubit and qudit reduced states by explicit partial traces.
inline DenseMatrix reduce_qubit(const DenseMatrix& x) {
  const int n = static_cast<int>(x.rows() / 2);
  DenseMatrix r = DenseMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < n; ++p) r(i, j) += x(idx(i, p, n), idx(j, p, n));
  return r;
}

inline DenseMatrix reduce_qudit(const DenseMatrix& x) {
  const int n = static_cast<int>(x.rows() / 2);
  DenseMatrix r = DenseMatrix::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int i = 0; i < 2; ++i) r(p, q) += x(idx(i, p, n), idx(i, q, n));
  return r;
}

inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// The 2N-term phase average (1/2N) sum_k U_k X U_k^dagger with
/// U_k = exp(i pi k Pi / N); the reference for the symmetry projector.
inline DenseMatrix phase_average_oracle(const DenseMatrix& x) {
  const int n = static_cast<int>(x.rows() / 2);
  DenseMatrix acc = DenseMatrix::Zero(x.rows(), x.cols());
  for (int k = 0; k < 2 * n; ++k) {
    DenseVector u(x.rows());
    for (int i = 0; i < 2; ++i)
      for (int p = 0; p < n; ++p) u(idx(i, p, n)) = std::polar(1.0, std::numbers::pi * k * (i + p) / n);
    acc += u.asDiagonal() * x * u.conjugate().asDiagonal();
  }
  return acc / (2.0 * n);
}

/// exp(-i H t) through the eigen-decomposition of H.
inline DenseMatrix unitary_oracle(const DenseMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
  DenseVector ph(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) ph(k) = std::polar(1.0, -es.eigenvalues()(k) * t);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline double max_abs(const DenseMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Bell-pattern state (|0,n> + |1,n-1>)/sqrt 2 for qudit dimension n_dim.
inline SymmetricState bell_state(std::size_t n_dim, std::size_t n) {
  SymmetricState s;
  s.a.assign(n_dim, 0.0);
  s.b.assign(n_dim, 0.0);
  s.c.assign(n_dim - 1, Complex(0.0, 0.0));
  s.a[n] = 0.5;
  s.b[n - 1] = 0.5;
  s.c[n - 1] = 0.5;
  return s;
}

}  // namespace testsupport
