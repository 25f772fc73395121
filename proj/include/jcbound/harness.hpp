#pragma once

// Seeded random states, the Monte-Carlo criteria study, the tau(y2, y3)
// family scan and the explicit convex-hull decompositions for N = 2, 3.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jcbound/criteria.hpp"
#include "jcbound/range_certifier.hpp"
#include "jcbound/state_core.hpp"

namespace jcbound {

struct SampleConfig {
  std::size_t n = 4;
  std::size_t count = 100000;
  std::uint64_t seed = 0;
  bool normalized = true;
  bool ppt_only = false;

  void check() const;  // throws DomainError
};

/// Sample `index` of the stream.  Each index owns an independent generator
/// seeded from (seed, index), so shards reproduce the serial stream exactly.
///
/// Populations: 2N sorted-uniform spacings (uniform on the simplex), scaled by
/// a log-uniform trace in [0.1, 10] when not normalized.  |c_n| is uniform in
/// [0, sqrt(a_n b_{n-1})] with a uniform phase.  ppt_only rejects until
/// |c_n|^2 <= a_{n-1} b_n on every link.
SymmetricState sample_state(const SampleConfig& cfg, std::size_t index);

std::vector<SymmetricState> sample_states(const SampleConfig& cfg);

/// Worker count from JCBOUND_WORKERS, else the hardware concurrency.
unsigned worker_count();

struct Counterexample {
  std::size_t index = 0;
  std::string kind;  // "ccnr", "cm", "negativity-ccnr"
  double value = 0.0;
  SymmetricState state;
};

struct StudyReport {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t total = 0;
  std::map<std::string, std::size_t> verdict_counts;
  std::size_t ppt_count = 0;
  double max_ccnr_ppt = 0.0;       // max ccnr_norm over PPT samples
  double max_cm_margin_ppt = -1.0;  // max (lhs - rhs) over PPT samples
  std::size_t npt_ccnr_checked = 0;  // NPT samples with ||R|| > 1
  std::vector<Counterexample> counterexamples;

  /// Associative merge; `other` must cover later indices.
  void merge(const StudyReport& other);
};

/// Evaluates every sample; PPT samples must satisfy ccnr_norm <= 1 and the CM
/// inequality, every sample must satisfy negativity >= max(||R|| - 1, 0).
StudyReport monte_carlo_study(const SampleConfig& cfg, unsigned workers = 0);

struct FamilyRow {
  double y2 = 0.0;
  double y3 = 0.0;
  double negativity = 0.0;
  double ccnr_norm = 0.0;
  double cm_lhs = 0.0;
  double cm_rhs = 0.0;
  bool cm_violated = false;
  int rank_tau = 0;
  int rank_tau_pt = 0;
  double obstruction = 0.0;
  CertVerdict certificate = CertVerdict::inconclusive;
  std::optional<CertVerdict> range_search;
};

struct FamilyScan {
  double y2_max = 10.0;
  double y3_max = 10.0;
  double step = 0.1;
  bool include_diagonal = true;
  bool with_range_search = false;
};

/// tau(y2, y2, y3) at y2 = i step, y3 = j step for 1 <= i <= j (i < j without
/// the diagonal), y2 <= y2_max, y3 <= y3_max.  Row order: y2 major.
std::vector<FamilyRow> grid_scan_family(const FamilyScan& scan, unsigned workers = 0);

inline constexpr const char* kFamilyCsvHeader =
    "y2,y3,negativity,ccnr_norm,cm_lhs,cm_rhs,cm_violated,rank_tau,rank_tau_pt,obstruction,certificate";

std::string to_csv(const FamilyRow& row);

struct HullTerm {
  double weight = 0.0;
  ProductVector vector;  // unit norm
};

struct HullDecomposition {
  std::size_t n = 0;
  std::vector<double> y;
  std::string branch;                 // "N2", "y1>=y2", "y2>y1"
  ProductVector gh;                   // unnormalized seed product vector
  DenseMatrix target;                 // tau
  DenseMatrix projected;              // symmetry_project(|gh><gh|)
  double residual_weight = 0.0;       // 0 for N = 2
  std::pair<int, int> residual_ket{0, 0};  // (qubit, fock) carrying the residual
  std::vector<HullTerm> terms;
  double reconstruction_error = 0.0;  // max |sum w |t><t| - tau|
};

/// Separable decomposition of the PPT tau for N = 2 (y = {y1}) and N = 3
/// (y = {y1, y2}).  Throws DomainError for other N or nonpositive y.
HullDecomposition hull_construct(std::size_t n, const std::vector<double>& y);

}  // namespace jcbound
