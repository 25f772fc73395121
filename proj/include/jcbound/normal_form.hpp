#pragma once

// Reduction of a PPT symmetric state to its filtered (x, y) normal form and
// the split sigma = sigma_s + tau into a diagonal separable part and a
// PPT-saturated remainder carrying all coherences.

#include <cstddef>
#include <vector>

#include "jcbound/state_core.hpp"

namespace jcbound {

/// Run of consecutive ladder indices with b_n > 0.
struct LadderSegment {
  std::size_t first = 0;  // ladder index of local n = 0
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;  // |c| on interior links, size width - 1

  std::size_t width() const noexcept { return a.size(); }
};

/// Separable a_m |0,m><0,m| term isolated by a vanishing b_m.
struct Leftover {
  std::size_t index = 0;
  double weight = 0.0;
};

struct LadderSplit {
  std::vector<LadderSegment> segments;
  std::vector<Leftover> leftovers;
};

/// Splits the ladder at every b_m = 0.  Coherences are taken by magnitude
/// (gauge-fixed).  Throws NotPptError if b_m = 0 while c_m != 0.
LadderSplit split_zero_b(const SymmetricState& s);

struct NormalSegment {
  std::size_t first = 0;
  std::vector<double> x;  // x_n = sqrt(a_n / b_n)
  std::vector<double> y;  // y[i-1] = y_i = |c_i| / sqrt(b_{i-1} b_i)
  std::vector<double> b;  // filter weights, kept so the filter can be undone

  std::size_t width() const noexcept { return x.size(); }
};

struct NormalForm {
  std::vector<NormalSegment> segments;
  std::vector<Leftover> leftovers;
};

/// Local filter I x diag(b_n^{-1/2}) on a state with all b_n > 0.  Throws
/// DomainError if some b_n = 0 (split first).
NormalForm filter(const SymmetricState& s);
NormalSegment filter(const LadderSegment& seg);

/// split_zero_b followed by filter on every segment.
NormalForm normal_form(const SymmetricState& s);

/// Dense sigma = F rho F^dagger of a segment of width >= 2.
DenseMatrix filtered_dense(const NormalSegment& seg);

/// Undoes the filter: a_n = x_n^2 b_n, c_n = y_n sqrt(b_{n-1} b_n).
SymmetricState unfilter(const NormalSegment& seg);

struct PptCheck {
  bool ppt = true;
  /// min(x_i, x_{i-1}) - y_i for every link, segments concatenated in order.
  std::vector<double> margins;
};

PptCheck ppt_conditions(const NormalSegment& seg);
PptCheck ppt_conditions(const NormalForm& nf);

/// max(y_n^2, y_{n+1}^2) with y_0 = y_1 and y_N = y_{N-1}; n in [0, N).
double saturated_population(const std::vector<double>& y, std::size_t n);

struct TauState {
  std::vector<double> y;  // y_1 .. y_{N-1}
  bool monotone = true;   // y_i <= y_{i+1} everywhere

  std::size_t qudit_dim() const noexcept { return y.size() + 1; }
};

TauState make_tau(std::vector<double> y);

struct Decomposition {
  std::vector<double> sigma_s;  // diagonal weights on |0,n><0,n|
  TauState tau;
};

/// sigma = sigma_s + tau.  Throws NotPptError rather than clamp a negative
/// sigma_s.
Decomposition decompose(const NormalSegment& seg);

/// Dense tau: |0> block diag max(y_n^2, y_{n+1}^2), |1> block identity,
/// coherence y_n between |0,n> and |1,n-1>.
DenseMatrix tau_dense(const TauState& t);

}  // namespace jcbound
