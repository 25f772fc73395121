#include "jcbound/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "jcbound/numerics.hpp"

namespace jcbound {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::npt_entangled: return "NPT_ENTANGLED";
    case Verdict::ppt_undetected: return "PPT_UNDETECTED";
    case Verdict::separable_proven: return "SEPARABLE_PROVEN";
  }
  return "UNKNOWN";
}

namespace {

// a + b - sqrt((a - b)^2 + 4|c|^2), rewritten to avoid cancellation near zero.
double pt_pair_low(double a, double b, double c2) {
  const double root = std::sqrt((a - b) * (a - b) + 4.0 * c2);
  const double den = a + b + root;
  if (den <= 0.0) return 0.0;
  return 4.0 * (a * b - c2) / den;
}

double sum_squares(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

}  // namespace

double negativity(const SymmetricState& s) {
  require_valid(s);
  double neg = 0.0;
  for (std::size_t n = 1; n < s.qudit_dim(); ++n) {
    const double low = pt_pair_low(s.a[n - 1], s.b[n], std::norm(s.c[n - 1]));
    neg -= std::min(0.0, low);
  }
  return neg;
}

double negativity_dense(const DenseMatrix& d) {
  const auto spec = eig_hermitian(partial_transpose(d), 1e-10);
  double neg = 0.0;
  for (double v : spec.values) neg -= std::min(0.0, v);
  return 2.0 * neg;
}

double gerjuoy_bound(const SymmetricState& s) {
  require_valid(s);
  double acc = 0.0;
  for (std::size_t l = 1; l < s.qudit_dim(); ++l) {
    const double g = 2.0 * std::max(0.0, std::abs(s.c[l - 1]) - std::sqrt(s.a[l - 1] * s.b[l]));
    acc += g * g;
  }
  return std::sqrt(acc);
}

CcnrResult ccnr(const SymmetricState& s) {
  require_valid(s);
  const SymmetricState u = s.normalized_copy();
  const std::size_t n = u.qudit_dim();

  const double aa = sum_squares(u.a);
  const double bb = sum_squares(u.b);
  double ab = 0.0;
  for (std::size_t i = 0; i < n; ++i) ab += u.a[i] * u.b[i];
  // |a|^2 |b|^2 - (a.b)^2 by the Lagrange identity, exact in sign.
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = u.a[i] * u.b[j] - u.a[j] * u.b[i];
      cross += w * w;
    }
  }
  double cc = 0.0;
  for (const auto& c : u.c) cc += std::norm(c);
  const double cnorm = std::sqrt(cc);

  const double xp2 = 0.5 * (aa + bb + std::sqrt((aa - bb) * (aa - bb) + 4.0 * ab * ab));
  const double xp = std::sqrt(xp2);
  const double xm = xp2 > 0.0 ? std::sqrt(cross / xp2) : 0.0;

  CcnrResult out;
  out.singular_values = {cnorm, cnorm, xp, xm};
  std::sort(out.singular_values.begin(), out.singular_values.end(), std::greater<>());
  out.norm = 2.0 * cnorm + std::sqrt(aa + bb + 2.0 * std::sqrt(cross));
  out.trace = s.trace();
  return out;
}

double ccnr_norm(const SymmetricState& s) { return ccnr(s).norm; }

DenseMatrix realign(const DenseMatrix& d) {
  const auto n = static_cast<Eigen::Index>(qudit_dim_of(d));
  DenseMatrix r(4, n * n);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = 0; q < n; ++q) r(i * 2 + j, p * n + q) = d(i * n + p, j * n + q);
      }
    }
  }
  return r;
}

CmResult cm_corollary(const SymmetricState& s) {
  require_valid(s);
  const SymmetricState u = s.normalized_copy();
  const Marginals m = marginals(u);
  double cc = 0.0;
  for (const auto& c : u.c) cc += std::norm(c);
  double diff = 0.0;
  for (std::size_t n = 0; n < u.qudit_dim(); ++n) {
    const double w = m.alpha1 * u.a[n] - m.alpha0 * u.b[n];
    diff += w * w;
  }
  const double rnorm = 2.0 * std::sqrt(cc) + std::sqrt(2.0 * diff);
  CmResult out;
  out.lhs = rnorm * rnorm;
  out.rhs = (1.0 - m.alpha0 * m.alpha0 - m.alpha1 * m.alpha1) * (1.0 - sum_squares(m.beta));
  out.violated = out.lhs > out.rhs + kDefaultTol;
  out.trace = s.trace();
  return out;
}

CmResult cm_corollary_dense(const DenseMatrix& d) {
  const auto n = static_cast<Eigen::Index>(qudit_dim_of(d));
  const double tr = d.trace().real();
  if (!(tr > 0.0)) throw DomainError("cm_corollary_dense: zero trace");
  const DenseMatrix rho = d / tr;

  DenseMatrix rho_a = DenseMatrix::Zero(2, 2);
  DenseMatrix rho_b = DenseMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      for (Eigen::Index p = 0; p < n; ++p) rho_a(i, j) += rho(i * n + p, j * n + p);
    }
  }
  for (Eigen::Index i = 0; i < 2; ++i) rho_b += rho.block(i * n, i * n, n, n);

  DenseMatrix product(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) product.block(i * n, j * n, n, n) = rho_a(i, j) * rho_b;
  }
  const double rn = trace_norm(realign(rho - product));
  CmResult out;
  out.lhs = rn * rn;
  out.rhs = (1.0 - rho_a.squaredNorm()) * (1.0 - rho_b.squaredNorm());
  out.violated = out.lhs > out.rhs + kDefaultTol;
  out.trace = tr;
  return out;
}

CriteriaReport report(const SymmetricState& s) {
  CriteriaReport r;
  r.negativity = negativity(s);
  r.gerjuoy = gerjuoy_bound(s);
  r.ccnr = ccnr(s);
  r.cm = cm_corollary(s);
  if (r.negativity > kDetectTol) {
    r.verdict = Verdict::npt_entangled;
  } else if (s.qudit_dim() <= 3) {
    r.verdict = Verdict::separable_proven;
  } else {
    r.verdict = Verdict::ppt_undetected;
  }
  return r;
}

}  // namespace jcbound
