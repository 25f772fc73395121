#pragma once

// Entanglement criteria for symmetric qubit-qudit states.  Every criterion has
// a closed form on SymmetricState and a dense-matrix route used as oracle.

#include <array>
#include <string>

#include "jcbound/state_core.hpp"

namespace jcbound {

/// A criterion "detects" when its margin exceeds this; boundary ties do not.
inline constexpr double kDetectTol = 1e-10;

enum class Verdict { npt_entangled, ppt_undetected, separable_proven };

const char* to_string(Verdict v) noexcept;

/// Negativity with no 1/2 in the partial-transpose eigenvalues, so that
/// (|0,n> + |1,n-1>)/sqrt2 scores exactly 1.  Linear in the state (no
/// internal normalization).
double negativity(const SymmetricState& s);

/// Dense route: 2 * sum |negative eigenvalues of partial_transpose(d)|.
double negativity_dense(const DenseMatrix& d);

/// sqrt(sum_l G_l^2), G_l = 2 max{0, |c_l| - sqrt(a_{l-1} b_l)}.
double gerjuoy_bound(const SymmetricState& s);

struct CcnrResult {
  /// {|c|, |c|, x+, x-} of the normalized state, descending.
  std::array<double, 4> singular_values{};
  double norm = 0.0;
  double trace = 0.0;  // trace used for normalization

  bool detects() const noexcept { return norm > 1.0 + kDetectTol; }
};

/// Closed-form realignment spectrum.  Normalizes internally; throws
/// DomainError on zero trace.
CcnrResult ccnr(const SymmetricState& s);
double ccnr_norm(const SymmetricState& s);

/// R_{(ij),(nm)} = <i n|d|j m>: a 4 x N^2 matrix.
DenseMatrix realign(const DenseMatrix& d);

struct CmResult {
  double lhs = 0.0;  // ||R(rho - rho_A x rho_B)||^2
  double rhs = 0.0;  // (1 - tr rho_A^2)(1 - tr rho_B^2)
  bool violated = false;
  double trace = 0.0;  // normalization used

  double gap() const noexcept { return rhs - lhs; }
};

/// Covariance-matrix corollary of CCNR, closed form on the normalized copy.
CmResult cm_corollary(const SymmetricState& s);

/// Same quantity through realign + SVD of rho - rho_A x rho_B.
CmResult cm_corollary_dense(const DenseMatrix& d);

struct CriteriaReport {
  double negativity = 0.0;
  double gerjuoy = 0.0;
  CcnrResult ccnr;
  CmResult cm;
  Verdict verdict = Verdict::ppt_undetected;
};

/// All criteria plus the aggregate verdict: NPT if negativity > kDetectTol,
/// otherwise separable for N <= 3 (PPT suffices there), otherwise undetected.
CriteriaReport report(const SymmetricState& s);

}  // namespace jcbound
