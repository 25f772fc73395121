#include "jcbound/normal_form.hpp"

#include <algorithm>
#include <cmath>

namespace jcbound {

namespace {

// Filtered quantities are O(1); round-off at the PPT boundary is absorbed here.
double margin_tol(double scale) { return kDefaultTol * std::max(1.0, scale); }

}  // namespace

LadderSplit split_zero_b(const SymmetricState& s) {
  require_valid(s);
  const std::size_t n = s.qudit_dim();
  LadderSplit out;
  std::size_t start = 0;
  auto close_run = [&](std::size_t end) {  // [start, end)
    if (end <= start) return;
    LadderSegment seg;
    seg.first = start;
    seg.a.assign(s.a.begin() + static_cast<std::ptrdiff_t>(start),
                 s.a.begin() + static_cast<std::ptrdiff_t>(end));
    seg.b.assign(s.b.begin() + static_cast<std::ptrdiff_t>(start),
                 s.b.begin() + static_cast<std::ptrdiff_t>(end));
    for (std::size_t k = start + 1; k < end; ++k) seg.c.push_back(std::abs(s.c[k - 1]));
    out.segments.push_back(std::move(seg));
  };
  for (std::size_t m = 0; m < n; ++m) {
    if (s.b[m] != 0.0) continue;
    if (m >= 1 && std::abs(s.c[m - 1]) != 0.0) {
      throw NotPptError("b_" + std::to_string(m) + " = 0 with c_" + std::to_string(m) +
                        " != 0: state is NPT, ladder cannot be split");
    }
    close_run(m);
    out.leftovers.push_back({m, s.a[m]});
    start = m + 1;
  }
  close_run(n);
  return out;
}

NormalSegment filter(const LadderSegment& seg) {
  NormalSegment out;
  out.first = seg.first;
  out.b = seg.b;
  out.x.resize(seg.width());
  for (std::size_t i = 0; i < seg.width(); ++i) {
    if (!(seg.b[i] > 0.0)) {
      throw DomainError("filter needs b_n > 0; b_" + std::to_string(seg.first + i) +
                        " = " + std::to_string(seg.b[i]));
    }
    out.x[i] = std::sqrt(seg.a[i] / seg.b[i]);
  }
  out.y.resize(seg.c.size());
  for (std::size_t i = 1; i < seg.width(); ++i) {
    out.y[i - 1] = seg.c[i - 1] / std::sqrt(seg.b[i - 1] * seg.b[i]);
  }
  return out;
}

NormalForm filter(const SymmetricState& s) {
  require_valid(s);
  LadderSegment seg;
  seg.a = s.a;
  seg.b = s.b;
  for (const auto& c : s.c) seg.c.push_back(std::abs(c));
  NormalForm nf;
  nf.segments.push_back(filter(seg));
  return nf;
}

NormalForm normal_form(const SymmetricState& s) {
  const LadderSplit split = split_zero_b(s);
  NormalForm nf;
  nf.leftovers = split.leftovers;
  for (const auto& seg : split.segments) nf.segments.push_back(filter(seg));
  return nf;
}

DenseMatrix filtered_dense(const NormalSegment& seg) {
  SymmetricState s;
  s.a.resize(seg.width());
  for (std::size_t i = 0; i < seg.width(); ++i) s.a[i] = seg.x[i] * seg.x[i];
  s.b.assign(seg.width(), 1.0);
  for (double y : seg.y) s.c.emplace_back(y, 0.0);
  return to_dense(s);
}

SymmetricState unfilter(const NormalSegment& seg) {
  SymmetricState s;
  s.a.resize(seg.width());
  for (std::size_t i = 0; i < seg.width(); ++i) s.a[i] = seg.x[i] * seg.x[i] * seg.b[i];
  s.b = seg.b;
  for (std::size_t i = 1; i < seg.width(); ++i) {
    s.c.emplace_back(seg.y[i - 1] * std::sqrt(seg.b[i - 1] * seg.b[i]), 0.0);
  }
  return s;
}

PptCheck ppt_conditions(const NormalSegment& seg) {
  PptCheck out;
  for (std::size_t i = 1; i < seg.width(); ++i) {
    const double y = seg.y[i - 1];
    const double m = std::min(seg.x[i], seg.x[i - 1]) - y;
    out.margins.push_back(m);
    if (m < -margin_tol(y)) out.ppt = false;
  }
  return out;
}

PptCheck ppt_conditions(const NormalForm& nf) {
  PptCheck out;
  for (const auto& seg : nf.segments) {
    const PptCheck part = ppt_conditions(seg);
    out.ppt = out.ppt && part.ppt;
    out.margins.insert(out.margins.end(), part.margins.begin(), part.margins.end());
  }
  return out;
}

double saturated_population(const std::vector<double>& y, std::size_t n) {
  if (y.empty()) return 0.0;
  const std::size_t links = y.size();  // N - 1
  const double left = (n == 0) ? y.front() : y[n - 1];
  const double right = (n >= links) ? y.back() : y[n];
  return std::max(left * left, right * right);
}

TauState make_tau(std::vector<double> y) {
  TauState t;
  t.y = std::move(y);
  t.monotone = std::is_sorted(t.y.begin(), t.y.end());
  return t;
}

Decomposition decompose(const NormalSegment& seg) {
  const PptCheck check = ppt_conditions(seg);
  if (!check.ppt) throw NotPptError("decompose needs a PPT normal form");
  Decomposition out;
  out.sigma_s.resize(seg.width());
  for (std::size_t n = 0; n < seg.width(); ++n) {
    const double sat = saturated_population(seg.y, n);
    const double w = seg.x[n] * seg.x[n] - sat;
    if (w < -margin_tol(sat)) throw NotPptError("decompose: negative separable weight");
    out.sigma_s[n] = std::max(0.0, w);
  }
  out.tau = make_tau(seg.y);
  return out;
}

DenseMatrix tau_dense(const TauState& t) {
  if (t.y.empty()) throw StructuralError("tau needs at least one coherence");
  const std::size_t n = t.qudit_dim();
  SymmetricState s;
  s.a.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.a[i] = saturated_population(t.y, i);
  s.b.assign(n, 1.0);
  for (double y : t.y) s.c.emplace_back(y, 0.0);
  return to_dense(s);
}

}  // namespace jcbound
