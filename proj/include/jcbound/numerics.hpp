#pragma once

// Small dense linear algebra with explicit tolerances.  Matrices here are at
// most a few hundred entries on a side; everything is O(dim^3) dense.

#include <vector>

#include "jcbound/state_core.hpp"

namespace jcbound {

inline constexpr double kRankTol = 1e-9;

struct Spectrum {
  std::vector<double> values;  // ascending
};

struct KernelBasis {
  std::vector<DenseVector> vectors;
  double tol = kRankTol;

  std::size_t size() const noexcept { return vectors.size(); }
  /// Columns are the basis vectors.
  DenseMatrix as_matrix(Eigen::Index dim) const;
};

/// Ascending eigenvalues. Throws InvalidStateError if max |d - d^dagger| > herm_tol.
Spectrum eig_hermitian(const DenseMatrix& d, double herm_tol = kDefaultTol);

/// Descending singular values, min(rows, cols) of them.
std::vector<double> singular_values(const DenseMatrix& d);

/// Sum of singular values.
double trace_norm(const DenseMatrix& d);

/// Orthonormal basis of the numerical null space at tol * sigma_max.  The
/// basis is canonical for the subspace: unit vectors are projected in index
/// order and Gram-Schmidt orthonormalized, and the first non-negligible
/// component of every vector is made real positive.
KernelBasis kernel_basis(const DenseMatrix& d, double tol = kRankTol);

/// Number of singular values above tol * sigma_max.
int rank(const DenseMatrix& d, double tol = kRankTol);

/// Principal angles (radians, ascending) between the column spans of two
/// orthonormal bases of equal dimension.  Computed from sines so that small
/// angles keep full precision.
std::vector<double> principal_angles(const DenseMatrix& lhs, const DenseMatrix& rhs);

/// Orthonormal basis for the span of the given columns (tolerance relative to
/// the largest singular value).
DenseMatrix orthonormalize(const DenseMatrix& columns, double tol = kRankTol);

}  // namespace jcbound
