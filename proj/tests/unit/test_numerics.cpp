#include <doctest.h>

#include "jcbound/normal_form.hpp"
#include "jcbound/numerics.hpp"
#include "support.hpp"

using namespace jcbound;
using namespace testsupport;

TEST_CASE("eig_hermitian basics") {
  const Spectrum id = eig_hermitian(DenseMatrix::Identity(4, 4));
  CHECK(id.values == std::vector<double>{1, 1, 1, 1});

  // diag(0.05, 0.45, 0.45, 0.05) with coherence 0.14 on the Bell pair; the PT
  // couples a_0 = 0.05 with b_1 = 0.05 so the low eigenvalue is 0.05 - 0.14.
  const SymmetricState s{{0.05, 0.45}, {0.45, 0.05}, {Complex(0.14, 0)}};
  const Spectrum pt = eig_hermitian(partial_transpose(to_dense(s)));
  CHECK(pt.values.front() == doctest::Approx(-0.09).epsilon(1e-12));
  CHECK(std::is_sorted(pt.values.begin(), pt.values.end()));

  DenseMatrix bad = DenseMatrix::Identity(2, 2);
  bad(0, 1) = 1e-6;
  CHECK_THROWS_AS((void)eig_hermitian(bad), InvalidStateError);
}

TEST_CASE("property: spectrum sums to the trace and matches singular values on PSD input") {
  Gen gen(21);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index dim = 2 * gen.integer(2, 8);
    const DenseMatrix h = gen.hermitian(dim);
    const Spectrum sp = eig_hermitian(h);
    REQUIRE(sp.values.size() == static_cast<std::size_t>(dim));
    double sum = 0.0;
    for (double v : sp.values) sum += v;
    CHECK(std::abs(sum - h.trace().real()) <= 1e-10 * static_cast<double>(dim));

    const DenseMatrix p = gen.psd(dim);
    const Spectrum ps = eig_hermitian(p);
    auto sv = singular_values(p);
    std::reverse(sv.begin(), sv.end());
    for (std::size_t i = 0; i < sv.size(); ++i) CHECK(std::abs(sv[i] - ps.values[i]) <= 1e-10 * sv.back());
  }
}

TEST_CASE("singular_values") {
  CHECK(singular_values(DenseMatrix::Zero(3, 5)) == std::vector<double>{0, 0, 0});
  const auto bell = singular_values(realign_oracle(to_dense(bell_state(2, 1))));
  REQUIRE(bell.size() == 4);
  for (double v : bell) CHECK(v == doctest::Approx(0.5));

  Gen gen(22);
  const DenseMatrix h = gen.hermitian(5);
  const DenseMatrix u = unitary_oracle(h, 0.7);
  for (double v : singular_values(u)) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_norm(u) == doctest::Approx(5.0));
}

TEST_CASE("kernel_basis and rank on the N = 4 family") {
  const DenseMatrix tau = tau_dense(make_tau({0.5, 0.5, 0.9}));
  const KernelBasis k = kernel_basis(tau);
  const KernelBasis kp = kernel_basis(partial_transpose(tau));
  CHECK(k.size() == 2);
  CHECK(kp.size() == 3);
  CHECK(rank(tau) == 6);
  CHECK(rank(partial_transpose(tau)) == 5);

  const DenseMatrix distinct = tau_dense(make_tau({0.3, 0.5, 0.9}));
  CHECK(rank(distinct) == 7);
  CHECK(rank(partial_transpose(distinct)) == 5);
  CHECK(rank(DenseMatrix::Identity(6, 6)) == 6);

  Gen gen(23);
  CHECK(kernel_basis(gen.psd(6)).size() == 0);
}

TEST_CASE("property: kernel basis is orthonormal, annihilated, canonical and complementary to rank") {
  Gen gen(24);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index dim = gen.integer(3, 10);
    const Eigen::Index r = gen.integer(1, static_cast<int>(dim));
    DenseMatrix f(dim, r);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < r; ++j) f(i, j) = Complex(gen.uniform(-1, 1), gen.uniform(-1, 1));
    const DenseMatrix m = f * f.adjoint();
    const KernelBasis kb = kernel_basis(m);
    CHECK(static_cast<int>(kb.size()) + rank(m) == dim);
    CHECK(rank(m) == r);
    const double norm = singular_values(m).front();
    for (std::size_t i = 0; i < kb.size(); ++i) {
      CHECK(std::abs(kb.vectors[i].norm() - 1.0) <= 1e-10);
      CHECK((m * kb.vectors[i]).norm() <= kb.tol * norm);
      for (std::size_t j = i + 1; j < kb.size(); ++j) CHECK(std::abs(kb.vectors[i].dot(kb.vectors[j])) <= 1e-10);
      // First significant component is real and positive.
      const DenseVector& v = kb.vectors[i];
      Eigen::Index lead = 0;
      while (std::abs(v(lead)) <= 1e-10 * v.cwiseAbs().maxCoeff()) ++lead;
      CHECK(v(lead).real() > 0.0);
      CHECK(std::abs(v(lead).imag()) <= 1e-14);
    }
    // Canonical: a unitary change of the factor leaves the basis unchanged.
    const DenseMatrix q = unitary_oracle(gen.hermitian(r), 1.3);
    const KernelBasis kb2 = kernel_basis((f * q) * (f * q).adjoint());
    REQUIRE(kb2.size() == kb.size());
    for (std::size_t i = 0; i < kb.size(); ++i) CHECK((kb.vectors[i] - kb2.vectors[i]).norm() <= 1e-8);
  }
}

TEST_CASE("principal angles") {
  DenseMatrix a = DenseMatrix::Zero(3, 1);
  a(0, 0) = 1.0;
  DenseMatrix b = DenseMatrix::Zero(3, 1);
  b(0, 0) = std::cos(1e-9);
  b(1, 0) = std::sin(1e-9);
  const auto ang = principal_angles(a, b);
  REQUIRE(ang.size() == 1);
  CHECK(ang[0] == doctest::Approx(1e-9).epsilon(1e-6));

  DenseMatrix c = DenseMatrix::Zero(3, 1);
  c(2, 0) = Complex(0.0, 1.0);
  CHECK(principal_angles(a, c)[0] == doctest::Approx(std::numbers::pi / 2));

  const DenseMatrix cols = orthonormalize(DenseMatrix::Ones(3, 2));
  CHECK(cols.cols() == 1);
}
