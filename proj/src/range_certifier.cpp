#include "jcbound/range_certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SVD>

#include "jcbound/criteria.hpp"
#include "jcbound/normal_form.hpp"
#include "jcbound/numerics.hpp"

namespace jcbound {

DenseVector ProductVector::tensor() const {
  DenseVector v(e.size() * f.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) v.segment(i * f.size(), f.size()) = e(i) * f;
  return v;
}

DenseVector ProductVector::tensor_conj_qubit() const {
  ProductVector c{e.conjugate(), f, theta};
  return c.tensor();
}

const char* to_string(CertVerdict v) noexcept {
  switch (v) {
    case CertVerdict::bound_entangled_edge: return "BOUND_ENTANGLED_EDGE";
    case CertVerdict::bound_entangled: return "BOUND_ENTANGLED";
    case CertVerdict::npt: return "NPT";
    case CertVerdict::separable_constructed: return "SEPARABLE_CONSTRUCTED";
    case CertVerdict::inconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

namespace {

constexpr Eigen::Index kN4 = 4;

DenseVector basis_combo(Eigen::Index n, std::initializer_list<std::pair<Eigen::Index, double>> terms) {
  DenseVector v = DenseVector::Zero(2 * n);
  for (const auto& [idx, w] : terms) v(idx) = w;
  return v;
}

// Dense index of |i, k> for qudit dimension n.
constexpr Eigen::Index ket(Eigen::Index i, Eigen::Index k, Eigen::Index n = kN4) { return i * n + k; }

}  // namespace

AnalyticKernels analytic_kernels(const std::array<double, 3>& y, bool saturated) {
  if (!(y[0] > 0.0) || y[0] > y[1] || y[1] > y[2]) {
    throw DomainError("analytic_kernels needs 0 < y1 <= y2 <= y3");
  }
  if (saturated && std::abs(y[0] - y[1]) > 1e-12 * y[1]) {
    throw DomainError("saturated kernels need y1 == y2");
  }
  AnalyticKernels k;
  for (Eigen::Index n = 1; n <= 3; ++n) {
    k.tau_pt.push_back(basis_combo(kN4, {{ket(0, n - 1), -1.0}, {ket(1, n), y[static_cast<std::size_t>(n - 1)]}}));
  }
  k.tau.push_back(basis_combo(kN4, {{ket(0, 3), -1.0}, {ket(1, 2), y[2]}}));
  if (saturated) k.tau.push_back(basis_combo(kN4, {{ket(0, 1), -1.0}, {ket(1, 0), y[0]}}));
  return k;
}

ProductVector unique_separable_vector(const std::array<double, 3>& y, double theta) {
  if (!(y[2] > 0.0)) throw DomainError("unique_separable_vector needs y3 > 0");
  const Complex ph = std::polar(1.0, theta);
  ProductVector pv;
  pv.theta = theta;
  pv.e = DenseVector(2);
  pv.e << 1.0, ph / y[2];
  pv.f = DenseVector(4);
  pv.f << y[0] * y[1] / y[2], y[1] * ph, y[2] * ph * ph, y[2] * ph * ph * ph;
  return pv;
}

Certificate certify_n4(double y2, double y3) {
  if (!(y2 > 0.0) || !(y3 > 0.0) || !std::isfinite(y2) || !std::isfinite(y3)) {
    throw DomainError("certify_n4 needs positive finite y2, y3");
  }
  Certificate cert;
  const TauState t = make_tau({y2, y2, y3});
  const DenseMatrix tau = tau_dense(t);
  const DenseMatrix tau_pt = partial_transpose(tau);
  cert.negativity = negativity_dense(tau);
  cert.ppt_verified = negativity(from_dense(tau)) <= kDetectTol && cert.negativity <= kDetectTol;
  cert.rank_tau = rank(tau);
  cert.rank_tau_pt = rank(tau_pt);
  cert.rank_shortcut_separable = cert.rank_tau == 4 || cert.rank_tau_pt == 4;

  if (!cert.ppt_verified) {
    cert.verdict = CertVerdict::npt;
    return cert;
  }
  if (!t.monotone) {
    cert.verdict = CertVerdict::inconclusive;
    cert.note = "y2 > y3: non-monotone branch, no argument available";
    return cert;
  }

  const std::array<double, 3> y{y2, y2, y3};
  const AnalyticKernels k = analytic_kernels(y, true);
  cert.kernel_tau = k.tau;
  cert.kernel_tau_pt = k.tau_pt;
  const DenseVector& chi1 = k.tau.back();

  // |<chi_1|ef>_theta| is theta independent; sample it to confirm.
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int j = 0; j < 16; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / 16.0;
    const Complex o = chi1.dot(unique_separable_vector(y, theta).tensor());
    lo = std::min(lo, std::abs(o));
    hi = std::max(hi, std::abs(o));
  }
  const ProductVector ef = unique_separable_vector(y, 0.0);
  cert.product_vectors.push_back(ef);
  cert.obstruction = chi1.dot(ef.tensor());
  cert.obstruction_spread = hi - lo;

  // The pole e = |1>, f = |0> also satisfies chi_3 and phi_n; chi_1 rules it out.
  ProductVector pole;
  pole.e = DenseVector::Zero(2);
  pole.e(1) = 1.0;
  pole.f = DenseVector::Zero(4);
  pole.f(0) = 1.0;
  cert.product_vectors.push_back(pole);
  cert.pole_obstruction = std::abs(chi1.dot(pole.tensor()));

  if (std::abs(cert.obstruction) > 1e-9 && cert.pole_obstruction > 1e-9) {
    cert.verdict = CertVerdict::bound_entangled_edge;
  } else {
    cert.verdict = CertVerdict::inconclusive;
    cert.note = "obstruction vanishes (y2 = y3)";
  }
  return cert;
}

namespace {

using SmallMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 16, 16>;

// Rows of the constraint matrix: conj(k_0) + w conj(k_1) with w = z for
// K(tau) and w = conj(z) for K(tau^Gamma).
struct ConstraintPencil {
  SmallMatrix u;  // conj of |0>-block components, one row per kernel vector
  SmallMatrix v;  // conj of |1>-block components
  Eigen::Index tau_rows = 0;
  Eigen::Index n = 0;

  SmallMatrix at(Complex z) const {
    SmallMatrix m(u.rows(), n);
    const double scale = 1.0 / std::sqrt(1.0 + std::norm(z));
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      const Complex w = r < tau_rows ? z : std::conj(z);
      m.row(r) = (u.row(r) + w * v.row(r)) * scale;
    }
    return m;
  }
  SmallMatrix at_infinity() const { return v; }
};

ConstraintPencil make_pencil(const KernelBasis& k, const KernelBasis& kp, Eigen::Index n) {
  ConstraintPencil p;
  p.n = n;
  p.tau_rows = static_cast<Eigen::Index>(k.size());
  const auto rows = static_cast<Eigen::Index>(k.size() + kp.size());
  p.u.resize(rows, n);
  p.v.resize(rows, n);
  Eigen::Index r = 0;
  for (const auto* basis : {&k, &kp}) {
    for (const auto& vec : basis->vectors) {
      p.u.row(r) = vec.head(n).conjugate().transpose();
      p.v.row(r) = vec.tail(n).conjugate().transpose();
      ++r;
    }
  }
  return p;
}

// Gram matrix G(z) (1 + |z|^2) = P0 + z Q + conj(z) Q^dagger + |z|^2 P2.
// Mat is a fixed-size type when N = 4, the scan's hot path.
template <typename Mat>
struct GramPencil {
  Mat p0, q, p2;

  explicit GramPencil(const ConstraintPencil& c) {
    const Eigen::Index t = c.tau_rows;
    const Eigen::Index k = c.u.rows() - t;
    const SmallMatrix ut = c.u.topRows(t), vt = c.v.topRows(t);
    const SmallMatrix uk = c.u.bottomRows(k), vk = c.v.bottomRows(k);
    p0 = ut.adjoint() * ut + uk.adjoint() * uk;
    p2 = vt.adjoint() * vt + vk.adjoint() * vk;
    q = ut.adjoint() * vt + vk.adjoint() * uk;
  }

  Mat at(Complex z) const { return p0 + z * q + std::conj(z) * q.adjoint() + std::norm(z) * p2; }
};

// Smallest eigenvalue over trace of a PSD Hermitian matrix, via the
// characteristic polynomial (Faddeev-LeVerrier) and Newton from zero, which
// climbs monotonically to the smallest root.  Scan ranking only.
template <typename Mat>
double smallest_eig_ratio(const Mat& g) {
  const Eigen::Index n = g.rows();
  const double tr = g.trace().real();
  if (!(tr > 0.0)) return 0.0;
  const Mat h = g / tr;
  std::array<double, 17> coeff{};  // det(x - h) = sum coeff[k] x^k
  coeff[static_cast<std::size_t>(n)] = 1.0;
  if constexpr (Mat::RowsAtCompileTime == 4) {
    // Newton's identities from power sums; one product and a determinant.
    const Mat h2 = h * h;
    const double p1 = 1.0;
    const double p2 = h.squaredNorm();
    const double p3 = h2.cwiseProduct(h.transpose()).sum().real();
    const double e2 = 0.5 * (p1 * p1 - p2);
    const double e3 = (e2 * p1 - p1 * p2 + p3) / 3.0;
    coeff = {h.determinant().real(), -e3, e2, -p1, 1.0};
  } else {
    Mat hm = Mat::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
      Mat m = hm;
      m.diagonal().array() += coeff[static_cast<std::size_t>(n - k + 1)];
      hm.noalias() = h * m;
      coeff[static_cast<std::size_t>(n - k)] = -hm.trace().real() / static_cast<double>(k);
    }
  }
  double x = 0.0;
  for (int it = 0; it < 60; ++it) {
    double p = coeff[static_cast<std::size_t>(n)];
    double dp = 0.0;
    for (Eigen::Index k = n - 1; k >= 0; --k) {
      dp = dp * x + p;
      p = p * x + coeff[static_cast<std::size_t>(k)];
    }
    if (dp == 0.0) break;
    const double step = p / dp;
    x -= step;
    if (std::abs(step) <= 1e-10 * std::abs(x) + 1e-20) break;  // ranking needs few digits
  }
  return std::max(0.0, x);
}

template <typename Mat>
void fill_grid(const ConstraintPencil& pencil, const RangeSearchOptions& options, std::vector<double>& grid) {
  const GramPencil<Mat> gram(pencil);
  const int na = options.arg_points;
  const int nm = options.magnitude_points;
  const double dlog = (options.log10_max - options.log10_min) / (nm - 1);
  const double darg = 2.0 * std::numbers::pi / na;
  for (int im = 0; im < nm; ++im) {
    const double r = std::pow(10.0, options.log10_min + im * dlog);
    for (int ia = 0; ia < na; ++ia) {
      grid[static_cast<std::size_t>(im) * na + static_cast<std::size_t>(ia)] =
          smallest_eig_ratio(gram.at(std::polar(r, ia * darg)));
    }
  }
}

struct Probe {
  double ratio = 1.0;  // sigma_min / sigma_max
  DenseVector null;    // right singular vector of sigma_min
};

Probe probe(const SmallMatrix& m) {
  Eigen::JacobiSVD<SmallMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Probe p;
  const Eigen::Index cols = m.cols();
  // With fewer rows than columns the null space is never empty.
  const double smin = m.rows() < cols ? 0.0 : s(s.size() - 1);
  p.ratio = s(0) > 0.0 ? smin / s(0) : 0.0;
  p.null = svd.matrixV().col(cols - 1);
  return p;
}

double ratio_only(const SmallMatrix& m) {
  if (m.rows() < m.cols()) return 0.0;
  Eigen::JacobiSVD<SmallMatrix> svd(m);
  const auto& s = svd.singularValues();
  return s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0;
}

Complex from_polar_log(double log10_r, double arg) {
  return std::polar(std::pow(10.0, log10_r), arg);
}

template <typename F>
double golden_section(F&& f, double lo, double hi, int iters) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

struct Found {
  bool pole = false;  // e = |1>
  Complex z;
  DenseVector f;
  double ratio;
};

}  // namespace

Certificate range_search(const DenseMatrix& tau, const DenseMatrix& tau_pt,
                         const RangeSearchOptions& options) {
  const auto n = static_cast<Eigen::Index>(qudit_dim_of(tau));
  if (tau_pt.rows() != tau.rows() || tau_pt.cols() != tau.cols()) {
    throw StructuralError("range_search: tau and tau^Gamma shapes differ");
  }
  if (n > 8) throw StructuralError("range_search supports N <= 8");

  Certificate cert;
  const double scale = std::max(1.0, tau.cwiseAbs().maxCoeff());
  const Spectrum pt_spec = eig_hermitian(tau_pt, 1e-10 * scale);
  cert.negativity = 0.0;
  for (double v : pt_spec.values) cert.negativity -= 2.0 * std::min(0.0, v);
  cert.ppt_verified = pt_spec.values.front() >= -kDetectTol * scale;
  cert.rank_tau = rank(tau);
  cert.rank_tau_pt = rank(tau_pt);
  cert.rank_shortcut_separable = n == 4 && (cert.rank_tau == 4 || cert.rank_tau_pt == 4);

  const KernelBasis k = kernel_basis(tau);
  const KernelBasis kp = kernel_basis(tau_pt);
  cert.kernel_tau = k.vectors;
  cert.kernel_tau_pt = kp.vectors;

  const ConstraintPencil pencil = make_pencil(k, kp, n);
  std::vector<Found> found;
  auto record = [&](bool pole, Complex z, const Probe& p) {
    for (const auto& f : found) {
      if (f.pole == pole && (pole || std::abs(f.z - z) <= 1e-6 * std::max(1.0, std::abs(z)))) return;
    }
    found.push_back({pole, z, p.null, p.ratio});
  };

  double best = std::numeric_limits<double>::infinity();
  if (pencil.u.rows() < n) {
    // Fewer constraints than unknowns: any e works.
    const Probe p = probe(pencil.at(Complex(1.0, 0.0)));
    record(false, Complex(1.0, 0.0), p);
    best = 0.0;
  } else {
    // Poles: e = |0> (z = 0) and e = |1> (z = infinity).
    const Probe p0 = probe(pencil.at(Complex(0.0, 0.0)));
    best = std::min(best, p0.ratio);
    if (p0.ratio <= options.rank_drop) record(false, Complex(0.0, 0.0), p0);
    const Probe pinf = probe(pencil.at_infinity());
    best = std::min(best, pinf.ratio);
    if (pinf.ratio <= options.rank_drop) record(true, Complex(0.0, 0.0), pinf);

    // Grid scan on the smallest Gram eigenvalue.
    const int na = options.arg_points;
    const int nm = options.magnitude_points;
    const double dlog = (options.log10_max - options.log10_min) / (nm - 1);
    const double darg = 2.0 * std::numbers::pi / na;
    std::vector<double> grid(static_cast<std::size_t>(na) * nm);
    if (n == 4) {
      fill_grid<Eigen::Matrix4cd>(pencil, options, grid);
    } else {
      fill_grid<SmallMatrix>(pencil, options, grid);
    }
    auto at = [&](int im, int ia) -> double {
      return grid[static_cast<std::size_t>(im) * na + static_cast<std::size_t>((ia + na) % na)];
    };
    std::vector<std::pair<double, std::pair<int, int>>> minima;
    // The outermost rings shadow the poles, which were probed exactly above.
    for (int im = 1; im + 1 < nm; ++im) {
      for (int ia = 0; ia < na; ++ia) {
        const double v = at(im, ia);
        bool is_min = true;
        for (int dm = -1; dm <= 1 && is_min; ++dm) {
          for (int da = -1; da <= 1; ++da) {
            if ((dm == 0 && da == 0) || im + dm < 0 || im + dm >= nm) continue;
            const double w = at(im + dm, ia + da);
            // Ties broken by index so plateaus keep one representative.
            if (w < v || (w == v && (dm < 0 || (dm == 0 && da < 0)))) {
              is_min = false;
              break;
            }
          }
        }
        if (is_min) minima.push_back({v, {im, ia}});
      }
    }
    std::sort(minima.begin(), minima.end());
    if (static_cast<int>(minima.size()) > options.candidates) minima.resize(static_cast<std::size_t>(options.candidates));

    for (const auto& [value, idx] : minima) {
      double lr = options.log10_min + idx.first * dlog;
      double ph = idx.second * darg;
      auto ratio_at = [&](double l, double a) { return ratio_only(pencil.at(from_polar_log(l, a))); };
      for (int round = 0; round < options.polish_rounds; ++round) {
        lr = golden_section([&](double l) { return ratio_at(l, ph); }, lr - dlog, lr + dlog, 45);
        ph = golden_section([&](double a) { return ratio_at(lr, a); }, ph - darg, ph + darg, 45);
      }
      const Complex z = from_polar_log(lr, ph);
      const Probe p = probe(pencil.at(z));
      best = std::min(best, p.ratio);
      if (p.ratio <= options.rank_drop) record(false, z, p);
    }
  }
  cert.min_singular_ratio = best;

  for (const auto& f : found) {
    ProductVector pv;
    pv.e = DenseVector::Zero(2);
    if (f.pole) {
      pv.e(1) = 1.0;
    } else {
      pv.e(0) = 1.0;
      pv.e(1) = f.z;
      pv.e /= pv.e.norm();
    }
    pv.f = f.f;
    cert.product_vectors.push_back(std::move(pv));
  }

  if (!cert.ppt_verified) {
    cert.verdict = CertVerdict::npt;
  } else if (found.empty()) {
    cert.verdict = CertVerdict::bound_entangled_edge;
    cert.note = "no product vector satisfies the range conditions";
  } else {
    cert.verdict = CertVerdict::inconclusive;
    cert.note = "range conditions satisfied by " + std::to_string(found.size()) + " product vector(s)";
  }
  return cert;
}

}  // namespace jcbound
