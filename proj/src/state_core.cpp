#include "jcbound/state_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace jcbound {

double SymmetricState::trace() const {
  return std::accumulate(a.begin(), a.end(), 0.0) +
         std::accumulate(b.begin(), b.end(), 0.0);
}

bool SymmetricState::normalized(double tol) const {
  return std::abs(trace() - 1.0) <= tol;
}

SymmetricState SymmetricState::normalized_copy() const {
  const double tr = trace();
  if (!(tr > 0.0) || !std::isfinite(tr)) {
    throw DomainError("cannot normalize a state with trace " + std::to_string(tr));
  }
  SymmetricState out = *this;
  for (auto& v : out.a) v /= tr;
  for (auto& v : out.b) v /= tr;
  for (auto& v : out.c) v /= tr;
  return out;
}

const char* to_string(Violation::Kind kind) noexcept {
  switch (kind) {
    case Violation::Kind::non_finite: return "non_finite";
    case Violation::Kind::negative_a: return "negative_a";
    case Violation::Kind::negative_b: return "negative_b";
    case Violation::Kind::positivity: return "positivity";
    case Violation::Kind::zero_trace: return "zero_trace";
  }
  return "unknown";
}

void check_structure(const SymmetricState& s) {
  const std::size_t n = s.a.size();
  if (n < 2) {
    throw StructuralError("qudit dimension must be at least 2, got " + std::to_string(n));
  }
  if (s.b.size() != n) {
    throw StructuralError("b has length " + std::to_string(s.b.size()) + ", expected " +
                          std::to_string(n));
  }
  if (s.c.size() != n - 1) {
    throw StructuralError("c has length " + std::to_string(s.c.size()) + ", expected " +
                          std::to_string(n - 1));
  }
}

ValidityReport validate(const SymmetricState& s) {
  check_structure(s);
  ValidityReport report;
  const std::size_t n = s.qudit_dim();
  auto flag = [&](Violation::Kind kind, std::size_t index, double margin) {
    report.ok = false;
    report.violations.push_back({kind, index, margin});
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(s.a[i]) || !std::isfinite(s.b[i])) {
      flag(Violation::Kind::non_finite, i, std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    if (s.a[i] < 0.0) flag(Violation::Kind::negative_a, i, s.a[i]);
    if (s.b[i] < 0.0) flag(Violation::Kind::negative_b, i, s.b[i]);
  }
  report.positivity_margins.resize(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    const Complex cn = s.c[k - 1];
    if (!std::isfinite(cn.real()) || !std::isfinite(cn.imag())) {
      flag(Violation::Kind::non_finite, k, std::numeric_limits<double>::quiet_NaN());
      report.positivity_margins[k - 1] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double margin = s.a[k] * s.b[k - 1] - std::norm(cn);
    report.positivity_margins[k - 1] = margin;
    // Saturated links (rank-one blocks) round to either side of zero.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(s.a[k] * s.b[k - 1], std::norm(cn));
    if (margin < -slack) flag(Violation::Kind::positivity, k, margin);
  }
  if (report.ok && !(s.trace() > 0.0)) flag(Violation::Kind::zero_trace, 0, s.trace());
  return report;
}

void require_valid(const SymmetricState& s) {
  const auto report = validate(s);
  if (report.ok) return;
  const auto& v = report.violations.front();
  std::ostringstream msg;
  msg << "invalid state: " << to_string(v.kind) << " at index " << v.index << " (margin "
      << v.margin << ")";
  throw InvalidStateError(msg.str());
}

GaugeFixed gauge_fix(const SymmetricState& s) {
  check_structure(s);
  GaugeFixed out{s, GaugePhases{std::vector<double>(s.qudit_dim(), 0.0)}};
  for (std::size_t n = 1; n < s.qudit_dim(); ++n) {
    const Complex cn = s.c[n - 1];
    // Zero coherence leaves the increment free; take it to be zero.
    const double step = (cn == Complex(0.0, 0.0)) ? 0.0 : std::arg(cn);
    out.phases.theta[n] = out.phases.theta[n - 1] + step;
    out.state.c[n - 1] = Complex(std::abs(cn), 0.0);
  }
  return out;
}

DenseMatrix apply_qudit_phases(const DenseMatrix& d, const GaugePhases& phases) {
  const std::size_t n = qudit_dim_of(d);
  if (phases.theta.size() != n) {
    throw StructuralError("phase list length does not match qudit dimension");
  }
  DenseMatrix out = d;
  for (Eigen::Index p = 0; p < d.rows(); ++p) {
    for (Eigen::Index q = 0; q < d.cols(); ++q) {
      const double dtheta = phases.theta[static_cast<std::size_t>(p) % n] -
                            phases.theta[static_cast<std::size_t>(q) % n];
      out(p, q) *= std::polar(1.0, dtheta);
    }
  }
  return out;
}

DenseMatrix to_dense(const SymmetricState& s) {
  check_structure(s);
  const auto n = static_cast<Eigen::Index>(s.qudit_dim());
  DenseMatrix d = DenseMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = s.a[static_cast<std::size_t>(i)];
    d(n + i, n + i) = s.b[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index k = 1; k < n; ++k) {
    const Complex cn = s.c[static_cast<std::size_t>(k - 1)];
    d(k, n + k - 1) = cn;
    d(n + k - 1, k) = std::conj(cn);
  }
  return d;
}

std::size_t qudit_dim_of(const DenseMatrix& d) {
  if (d.rows() != d.cols()) throw StructuralError("matrix is not square");
  if (d.rows() % 2 != 0 || d.rows() < 4) {
    throw StructuralError("dimension " + std::to_string(d.rows()) + " is not 2N with N >= 2");
  }
  return static_cast<std::size_t>(d.rows() / 2);
}

SymmetricState from_dense(const DenseMatrix& d, double tol) {
  const auto n = static_cast<Eigen::Index>(qudit_dim_of(d));
  const double herm = (d - d.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) {
    throw InvalidStateError("matrix is not Hermitian (max deviation " + std::to_string(herm) +
                            ")");
  }
  const auto pi = excitation_numbers(static_cast<std::size_t>(n));
  double worst = -1.0;
  Eigen::Index wr = 0;
  Eigen::Index wc = 0;
  for (Eigen::Index p = 0; p < 2 * n; ++p) {
    for (Eigen::Index q = 0; q < 2 * n; ++q) {
      if (pi[static_cast<std::size_t>(p)] == pi[static_cast<std::size_t>(q)]) continue;
      // Same-sector pairs are the diagonal and the (0n, 1 n-1) coherences;
      // everything else must vanish.
      const double mag = std::abs(d(p, q));
      if (mag > worst) {
        worst = mag;
        wr = p;
        wc = q;
      }
    }
  }
  if (worst > tol) {
    throw SuperselectionError(static_cast<std::size_t>(wr), static_cast<std::size_t>(wc), worst);
  }
  SymmetricState s;
  s.a.resize(static_cast<std::size_t>(n));
  s.b.resize(static_cast<std::size_t>(n));
  s.c.resize(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    s.a[static_cast<std::size_t>(i)] = d(i, i).real();
    s.b[static_cast<std::size_t>(i)] = d(n + i, n + i).real();
  }
  for (Eigen::Index k = 1; k < n; ++k) s.c[static_cast<std::size_t>(k - 1)] = d(k, n + k - 1);
  return s;
}

DenseMatrix partial_transpose(const DenseMatrix& d) {
  const auto n = static_cast<Eigen::Index>(qudit_dim_of(d));
  DenseMatrix out(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      out.block(i * n, j * n, n, n) = d.block(i * n, j * n, n, n).transpose();
    }
  }
  return out;
}

DenseMatrix partial_transpose_qubit(const DenseMatrix& d) {
  const auto n = static_cast<Eigen::Index>(qudit_dim_of(d));
  DenseMatrix out(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      out.block(i * n, j * n, n, n) = d.block(j * n, i * n, n, n);
    }
  }
  return out;
}

Marginals marginals(const SymmetricState& s) {
  check_structure(s);
  Marginals m;
  m.alpha0 = std::accumulate(s.a.begin(), s.a.end(), 0.0);
  m.alpha1 = std::accumulate(s.b.begin(), s.b.end(), 0.0);
  m.beta.resize(s.qudit_dim());
  for (std::size_t n = 0; n < s.qudit_dim(); ++n) m.beta[n] = s.a[n] + s.b[n];
  return m;
}

std::vector<int> excitation_numbers(std::size_t qudit_dim) {
  std::vector<int> pi(2 * qudit_dim);
  for (std::size_t p = 0; p < pi.size(); ++p) {
    pi[p] = static_cast<int>(p / qudit_dim + p % qudit_dim);
  }
  return pi;
}

DenseMatrix symmetry_project(const DenseMatrix& d) {
  const std::size_t n = qudit_dim_of(d);
  const auto pi = excitation_numbers(n);
  DenseMatrix out = d;
  for (Eigen::Index p = 0; p < d.rows(); ++p) {
    for (Eigen::Index q = 0; q < d.cols(); ++q) {
      if (pi[static_cast<std::size_t>(p)] != pi[static_cast<std::size_t>(q)]) out(p, q) = 0.0;
    }
  }
  return out;
}

double number_commutator_norm(const DenseMatrix& d) {
  const std::size_t n = qudit_dim_of(d);
  const auto pi = excitation_numbers(n);
  Eigen::VectorXd diag(static_cast<Eigen::Index>(pi.size()));
  for (std::size_t p = 0; p < pi.size(); ++p) diag(static_cast<Eigen::Index>(p)) = pi[p];
  const DenseMatrix pim = diag.cast<Complex>().asDiagonal();
  const DenseMatrix comm = d * pim - pim * d;
  return comm.cwiseAbs().maxCoeff();
}

double concurrence_pure(const DenseVector& v, double tol) {
  if (v.size() % 2 != 0 || v.size() < 4) {
    throw StructuralError("vector length " + std::to_string(v.size()) + " is not 2N with N >= 2");
  }
  if (std::abs(v.norm() - 1.0) > tol) {
    throw DomainError("concurrence_pure needs a unit vector, norm = " + std::to_string(v.norm()));
  }
  const Eigen::Index n = v.size() / 2;
  const auto v0 = v.head(n);
  const auto v1 = v.tail(n);
  const double m00 = v0.squaredNorm();
  const double m11 = v1.squaredNorm();
  const double m01 = std::norm(v0.dot(v1));
  const double purity = m00 * m00 + m11 * m11 + 2.0 * m01;
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

}  // namespace jcbound
