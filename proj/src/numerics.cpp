#include "jcbound/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace jcbound {

DenseMatrix KernelBasis::as_matrix(Eigen::Index dim) const {
  DenseMatrix m(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = vectors[k];
  return m;
}

Spectrum eig_hermitian(const DenseMatrix& d, double herm_tol) {
  if (d.rows() != d.cols()) throw StructuralError("eig_hermitian needs a square matrix");
  if (d.size() == 0) return {};
  const double herm = (d - d.adjoint()).cwiseAbs().maxCoeff();
  if (herm > herm_tol) {
    throw InvalidStateError("eig_hermitian: matrix is not Hermitian (max deviation " +
                            std::to_string(herm) + ")");
  }
  // Symmetrize so the solver sees an exactly Hermitian input.
  const DenseMatrix h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver did not converge");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  Spectrum out;
  out.values.assign(ev.data(), ev.data() + ev.size());
  std::sort(out.values.begin(), out.values.end());
  return out;
}

std::vector<double> singular_values(const DenseMatrix& d) {
  if (d.size() == 0) return {};
  Eigen::JacobiSVD<DenseMatrix> svd(d);
  const Eigen::VectorXd& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double trace_norm(const DenseMatrix& d) {
  const auto s = singular_values(d);
  return std::accumulate(s.begin(), s.end(), 0.0);
}

namespace {

void fix_phase(DenseVector& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-10 * scale) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(std::abs(v(i)), 0.0);
      return;
    }
  }
}

}  // namespace

KernelBasis kernel_basis(const DenseMatrix& d, double tol) {
  if (d.rows() != d.cols()) throw StructuralError("kernel_basis needs a square matrix");
  const Eigen::Index n = d.rows();
  KernelBasis out;
  out.tol = tol;
  if (n == 0) return out;

  Eigen::JacobiSVD<DenseMatrix> svd(d, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = tol * s(0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut && s(r) > 0.0) ++r;
  const Eigen::Index k = n - r;
  if (k == 0) return out;

  const DenseMatrix basis = svd.matrixV().rightCols(k);
  const DenseMatrix projector = basis * basis.adjoint();

  // Unit vectors in index order, projected and orthonormalized.  Some e_j
  // always keeps squared residual >= 1/n, so the threshold never starves.
  const double pick = 0.5 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < n && static_cast<Eigen::Index>(out.vectors.size()) < k; ++j) {
    DenseVector w = projector.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : out.vectors) w -= u * u.dot(w);
    }
    const double norm = w.norm();
    if (norm <= pick) continue;
    w /= norm;
    fix_phase(w);
    out.vectors.push_back(std::move(w));
  }
  return out;
}

int rank(const DenseMatrix& d, double tol) {
  const auto s = singular_values(d);
  if (s.empty() || s.front() == 0.0) return 0;
  const double cut = tol * s.front();
  return static_cast<int>(std::count_if(s.begin(), s.end(), [&](double v) { return v > cut; }));
}

std::vector<double> principal_angles(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw StructuralError("principal_angles needs bases of equal shape");
  }
  if (lhs.cols() == 0) return {};
  const DenseMatrix residual = lhs - rhs * (rhs.adjoint() * lhs);
  auto sines = singular_values(residual);
  std::vector<double> out;
  out.reserve(sines.size());
  for (double s : sines) out.push_back(std::asin(std::clamp(s, 0.0, 1.0)));
  std::sort(out.begin(), out.end());
  return out;
}

DenseMatrix orthonormalize(const DenseMatrix& columns, double tol) {
  if (columns.cols() == 0) return DenseMatrix(columns.rows(), 0);
  Eigen::JacobiSVD<DenseMatrix> svd(columns, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tol * s(0) && s(r) > 0.0) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace jcbound
