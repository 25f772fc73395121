#pragma once

// Range-criterion machinery: analytic kernels of the N = 4 saturated family,
// its product-vector solutions, the edge-state certificate, and a generic
// numeric search for product vectors in the ranges of tau and tau^Gamma.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "jcbound/state_core.hpp"

namespace jcbound {

struct ProductVector {
  DenseVector e;  // qubit factor, 2 amplitudes
  DenseVector f;  // qudit factor, N amplitudes
  std::optional<double> theta;

  /// e x f in the qubit-major basis.
  DenseVector tensor() const;
  /// e* x f (conjugation on the qubit only).
  DenseVector tensor_conj_qubit() const;
};

enum class CertVerdict { bound_entangled_edge, bound_entangled, npt, separable_constructed, inconclusive };

const char* to_string(CertVerdict v) noexcept;

struct Certificate {
  CertVerdict verdict = CertVerdict::inconclusive;
  std::vector<DenseVector> kernel_tau;     // witnesses spanning K(tau)
  std::vector<DenseVector> kernel_tau_pt;  // witnesses spanning K(tau^Gamma)
  std::vector<ProductVector> product_vectors;
  Complex obstruction{0.0, 0.0};  // the nonzero overlap that rules out the product family
  double obstruction_spread = 0.0;  // max - min of |obstruction| over sampled theta
  double pole_obstruction = 0.0;    // same test for the e = |1> solution
  int rank_tau = -1;
  int rank_tau_pt = -1;
  double negativity = 0.0;
  bool ppt_verified = false;
  bool rank_shortcut_separable = false;  // r = 4 on a 2x4 system
  double min_singular_ratio = 0.0;       // range_search only
  std::string note;
};

struct AnalyticKernels {
  std::vector<DenseVector> tau_pt;  // phi_1, phi_2, phi_3
  std::vector<DenseVector> tau;     // chi_3 [, chi_1]
};

/// Kernels of the N = 4 tau with 0 < y1 <= y2 <= y3.  `saturated` requires
/// y1 == y2 and adds chi_1 = -|0,1> + y1|1,0>.
AnalyticKernels analytic_kernels(const std::array<double, 3>& y, bool saturated);

/// Product vector in R(tau) with e* x f in R(tau^Gamma), one per theta:
/// e = |0> + e^{i theta}/y3 |1>,
/// f = y1 y2/y3 |0> + y2 e^{i theta}|1> + y3 e^{2i theta}|2> + y3 e^{3i theta}|3>.
ProductVector unique_separable_vector(const std::array<double, 3>& y, double theta);

/// Edge certificate for tau(y2, y2, y3).
Certificate certify_n4(double y2, double y3);

struct RangeSearchOptions {
  int arg_points = 720;
  int magnitude_points = 50;
  double log10_min = -3.0;
  double log10_max = 3.0;
  double rank_drop = 1e-8;  // sigma_min / sigma_max threshold
  int candidates = 6;       // grid minima that get polished
  int polish_rounds = 3;
};

/// Generic search for |e f> orthogonal to K(tau) with |e* f> orthogonal to
/// K(tau^Gamma), for a 2 x N system with N <= 8.
Certificate range_search(const DenseMatrix& tau, const DenseMatrix& tau_pt,
                         const RangeSearchOptions& options = {});

}  // namespace jcbound
