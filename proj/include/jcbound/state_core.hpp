#pragma once

// Excitation-number-conserving qubit-qudit states.
//
// A 2xN state commuting with Pi = |1><1| x I + I x sum_n n|n><n| has nonzero
// entries only on the diagonal and on the coherences <0,n|rho|1,n-1>.  The
// global basis order is qubit-major: |0,0>..|0,N-1>,|1,0>..|1,N-1>, so the
// dense index of |i,n> is i*N + n.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jcbound/errors.hpp"

namespace jcbound {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-12;

struct SymmetricState {
  std::vector<double> a;   // a[n] = <0n|rho|0n>
  std::vector<double> b;   // b[n] = <1n|rho|1n>
  std::vector<Complex> c;  // c[n-1] = <0n|rho|1,n-1>, n = 1..N-1

  std::size_t qudit_dim() const noexcept { return a.size(); }
  double trace() const;
  bool normalized(double tol = kDefaultTol) const;

  /// 1-based coherence accessor matching c_n.
  Complex coherence(std::size_t n) const { return c.at(n - 1); }

  /// Copy scaled to unit trace. Throws DomainError on zero trace.
  SymmetricState normalized_copy() const;

  friend bool operator==(const SymmetricState&, const SymmetricState&) = default;
};

struct Marginals {
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  std::vector<double> beta;
};

struct GaugePhases {
  std::vector<double> theta;  // radians, theta[0] = 0
};

struct Violation {
  enum class Kind { non_finite, negative_a, negative_b, positivity, zero_trace };
  Kind kind;
  std::size_t index;  // n for populations / coherences
  double margin;      // negative when violated
};

struct ValidityReport {
  bool ok = true;
  std::vector<Violation> violations;
  /// margins[n-1] = a_n b_{n-1} - |c_n|^2
  std::vector<double> positivity_margins;
};

const char* to_string(Violation::Kind kind) noexcept;

/// Structural check only; throws StructuralError on inconsistent lengths.
void check_structure(const SymmetricState& s);

ValidityReport validate(const SymmetricState& s);

/// Throws InvalidStateError describing the first violation.
void require_valid(const SymmetricState& s);

struct GaugeFixed {
  SymmetricState state;
  GaugePhases phases;
};

/// Removes the coherence phases with a diagonal qudit unitary.  Conjugating
/// the returned state by diag(exp(i theta_n)) on the qudit restores the input.
GaugeFixed gauge_fix(const SymmetricState& s);

/// (I x V) d (I x V)^dagger with V = diag(exp(i theta_n)).
DenseMatrix apply_qudit_phases(const DenseMatrix& d, const GaugePhases& phases);

DenseMatrix to_dense(const SymmetricState& s);

/// Extracts (a, b, c).  Throws SuperselectionError if an entry outside the
/// pattern exceeds tol, StructuralError for odd or non-square input and
/// InvalidStateError for non-Hermitian input.
SymmetricState from_dense(const DenseMatrix& d, double tol = kDefaultTol);

/// Qudit dimension of a 2N x 2N matrix; throws StructuralError otherwise.
std::size_t qudit_dim_of(const DenseMatrix& d);

/// Transpose on the qudit factor.
DenseMatrix partial_transpose(const DenseMatrix& d);

/// Transpose on the qubit factor.
DenseMatrix partial_transpose_qubit(const DenseMatrix& d);

Marginals marginals(const SymmetricState& s);

/// Excitation number of every basis state, Pi_(i,n) = i + n.
std::vector<int> excitation_numbers(std::size_t qudit_dim);

/// Projection onto operators commuting with Pi, by masking entries with
/// i + n != j + m.
DenseMatrix symmetry_project(const DenseMatrix& d);

/// max |[d, Pi]_pq|.
double number_commutator_norm(const DenseMatrix& d);

/// sqrt(2 (1 - tr mu^2)) for the qubit reduced state mu of |v><v|.
double concurrence_pure(const DenseVector& v, double tol = kDefaultTol);

}  // namespace jcbound
