#include <doctest.h>

#include "jcbound/state_core.hpp"
#include "support.hpp"

using namespace jcbound;
using namespace testsupport;

namespace {

SymmetricState n2(double c) { return SymmetricState{{0.2, 0.3}, {0.1, 0.4}, {Complex(c, 0.0)}}; }

}  // namespace

TEST_CASE("validate reports the positivity margin") {
  const ValidityReport ok = validate(n2(0.15));
  CHECK(ok.ok);
  REQUIRE(ok.positivity_margins.size() == 1);
  CHECK(ok.positivity_margins[0] == doctest::Approx(0.0075).epsilon(1e-12));

  const ValidityReport bad = validate(n2(0.2));
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].kind == Violation::Kind::positivity);
  CHECK(bad.violations[0].index == 1);
  CHECK(bad.violations[0].margin == doctest::Approx(-0.01));
  CHECK_THROWS_AS(require_valid(n2(0.2)), InvalidStateError);
}

TEST_CASE("validate flags negative and non-finite entries, structural errors are distinct") {
  SymmetricState s = n2(0.0);
  CHECK(validate(s).ok);
  s.b[0] = -0.1;
  CHECK_FALSE(validate(s).ok);
  s.b[0] = std::nan("");
  CHECK_FALSE(validate(s).ok);

  SymmetricState broken{{0.5, 0.5}, {0.0}, {}};
  CHECK_THROWS_AS(validate(broken), StructuralError);
  SymmetricState zero{{0.0, 0.0}, {0.0, 0.0}, {Complex(0.0, 0.0)}};
  CHECK_FALSE(validate(zero).ok);
}

TEST_CASE("gauge_fix removes phases with the cumulative-argument recurrence") {
  SymmetricState s{{0.3, 0.3}, {0.2, 0.2}, {Complex(0.0, 0.1)}};
  GaugeFixed g = gauge_fix(s);
  CHECK(g.state.c[0].real() == doctest::Approx(0.1));
  CHECK(g.state.c[0].imag() == doctest::Approx(0.0));
  CHECK(g.phases.theta[0] == 0.0);
  CHECK(g.phases.theta[1] == doctest::Approx(std::numbers::pi / 2));

  SymmetricState t{{0.2, 0.2, 0.2}, {0.2, 0.1, 0.1},
                   {std::polar(0.1, std::numbers::pi / 3), std::polar(0.1, std::numbers::pi / 6)}};
  g = gauge_fix(t);
  CHECK(g.phases.theta[1] == doctest::Approx(std::numbers::pi / 3));
  CHECK(g.phases.theta[2] == doctest::Approx(std::numbers::pi / 2));
  CHECK(max_abs(apply_qudit_phases(to_dense(g.state), g.phases) - to_dense(t)) < 1e-15);

  SymmetricState real{{0.2, 0.3}, {0.1, 0.4}, {Complex(0.15, 0.0)}};
  g = gauge_fix(real);
  CHECK(g.state == real);
  CHECK(g.phases.theta == std::vector<double>{0.0, 0.0});
}

TEST_CASE("to_dense layout and exact round trip") {
  const SymmetricState s = n2(0.15);
  const DenseMatrix d = to_dense(s);
  CHECK(d(1, 2) == Complex(0.15, 0.0));
  CHECK(d(2, 1) == Complex(0.15, 0.0));
  CHECK(d(0, 0) == Complex(0.2, 0.0));
  CHECK(d(3, 3) == Complex(0.4, 0.0));
  CHECK(d(0, 3) == Complex(0.0, 0.0));
  CHECK(from_dense(d) == s);

  Gen gen(11);
  for (int k = 0; k < 500; ++k) {
    const SymmetricState r = gen.state(static_cast<std::size_t>(gen.integer(2, 8)), gen.uniform() < 0.5);
    CHECK(from_dense(to_dense(r)) == r);
  }
}

TEST_CASE("from_dense rejects superselection violations and reports the worst entry") {
  DenseMatrix d = to_dense(n2(0.1));
  d(0, 3) = 1e-3;  // <0,0|rho|1,1>
  d(3, 0) = 1e-3;
  try {
    (void)from_dense(d, 1e-6);
    FAIL("expected SuperselectionError");
  } catch (const SuperselectionError& e) {
    CHECK(e.magnitude() == doctest::Approx(1e-3));
    CHECK(((e.row() == 0 && e.col() == 3) || (e.row() == 3 && e.col() == 0)));
  }
  CHECK_NOTHROW((void)from_dense(d, 1e-2));
  CHECK_THROWS_AS((void)from_dense(DenseMatrix::Identity(3, 3)), StructuralError);
}

TEST_CASE("partial transpose: involution, oracle agreement, party independence when gauge fixed") {
  Gen gen(12);
  for (int k = 0; k < 200; ++k) {
    const DenseMatrix h = gen.hermitian(2 * gen.integer(2, 6));
    CHECK(max_abs(partial_transpose(partial_transpose(h)) - h) == 0.0);
    CHECK(max_abs(partial_transpose(h) - pt_oracle(h)) == 0.0);
  }
  for (int k = 0; k < 200; ++k) {
    const SymmetricState s = gauge_fix(gen.state(static_cast<std::size_t>(gen.integer(2, 8)))).state;
    const DenseMatrix d = to_dense(s);
    CHECK(max_abs(partial_transpose(d) - partial_transpose_qubit(d)) <= 1e-14);
  }
  const DenseMatrix diag = to_dense(SymmetricState{{0.1, 0.2}, {0.3, 0.4}, {Complex(0, 0)}});
  CHECK(max_abs(partial_transpose(diag) - diag) == 0.0);

  const auto ev = eigenvalues(partial_transpose(to_dense(bell_state(2, 1))));
  CHECK(ev.front() == doctest::Approx(-0.5));
  CHECK(ev[1] >= -1e-15);
}

TEST_CASE("marginals match explicit partial traces") {
  const Marginals m = marginals(SymmetricState{{0.25, 0.25}, {0.25, 0.25}, {Complex(0, 0)}});
  CHECK(m.alpha0 == 0.5);
  CHECK(m.alpha1 == 0.5);
  CHECK(m.beta == std::vector<double>{0.5, 0.5});

  const Marginals bell = marginals(bell_state(2, 1));
  CHECK(bell.alpha0 == doctest::Approx(0.5));
  CHECK(bell.beta[0] == doctest::Approx(0.5));
  CHECK(bell.beta[1] == doctest::Approx(0.5));

  Gen gen(13);
  for (int k = 0; k < 300; ++k) {
    const SymmetricState s = gen.state(static_cast<std::size_t>(gen.integer(2, 8)), false);
    const Marginals mm = marginals(s);
    const DenseMatrix d = to_dense(s);
    const DenseMatrix ra = reduce_qubit(d);
    const DenseMatrix rb = reduce_qudit(d);
    CHECK(std::abs(ra(0, 0).real() - mm.alpha0) <= 1e-14);
    CHECK(std::abs(ra(1, 1).real() - mm.alpha1) <= 1e-14);
    CHECK(std::abs(ra(0, 1)) == 0.0);  // superselection keeps the qubit marginal diagonal
    double sum_beta = 0.0;
    for (std::size_t n = 0; n < s.qudit_dim(); ++n) {
      CHECK(std::abs(rb(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)).real() - mm.beta[n]) <= 1e-14);
      sum_beta += mm.beta[n];
    }
    CHECK(std::abs(mm.alpha0 + mm.alpha1 - sum_beta) <= 1e-13);
    CHECK(std::abs(sum_beta - s.trace()) <= 1e-13);
  }
}

TEST_CASE("symmetry_project agrees with the phase average and is a trace-preserving idempotent") {
  Gen gen(14);
  for (int k = 0; k < 200; ++k) {
    const DenseMatrix h = gen.hermitian(2 * gen.integer(2, 7));
    const DenseMatrix p = symmetry_project(h);
    CHECK(max_abs(p - phase_average_oracle(h)) <= 1e-14);
    CHECK(max_abs(symmetry_project(p) - p) == 0.0);
    CHECK(std::abs(p.trace() - h.trace()) <= 1e-13);
    CHECK(number_commutator_norm(p) <= 1e-12);
    CHECK_NOTHROW((void)from_dense(p));
  }
  const DenseMatrix sym = to_dense(gen.state(5));
  CHECK(max_abs(symmetry_project(sym) - sym) == 0.0);
}

TEST_CASE("number_commutator_norm") {
  Gen gen(15);
  for (int k = 0; k < 100; ++k) CHECK(number_commutator_norm(to_dense(gen.state(4))) <= 1e-12);
  DenseMatrix d = to_dense(gen.state(3));
  const double eps = 1e-4;
  d(0, 4) += eps;  // |0,0><1,1|: excitation gap 2
  d(4, 0) += eps;
  CHECK(number_commutator_norm(d) == doctest::Approx(2 * eps));
}

TEST_CASE("concurrence of pure states") {
  DenseVector prod = DenseVector::Zero(8);
  prod(2) = 1.0;
  CHECK(concurrence_pure(prod) == doctest::Approx(0.0));

  DenseVector bell = DenseVector::Zero(8);
  bell(idx(0, 2, 4)) = 1.0 / std::sqrt(2.0);
  bell(idx(1, 1, 4)) = 1.0 / std::sqrt(2.0);
  CHECK(concurrence_pure(bell) == doctest::Approx(1.0));

  for (double phi : {0.1, 0.4, 1.0, 2.5}) {
    DenseVector v = DenseVector::Zero(6);
    v(idx(0, 1, 3)) = std::cos(phi);
    v(idx(1, 0, 3)) = std::sin(phi);
    CHECK(concurrence_pure(v) == doctest::Approx(std::abs(std::sin(2 * phi))).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)concurrence_pure(2.0 * bell), DomainError);
}

TEST_CASE("property: gauge fixing preserves the spectrum") {
  Gen gen(16);
  for (int k = 0; k < 300; ++k) {
    const SymmetricState s = gen.state(static_cast<std::size_t>(gen.integer(2, 8)));
    const auto before = eigenvalues(to_dense(s));
    const auto after = eigenvalues(to_dense(gauge_fix(s).state));
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(std::abs(before[i] - after[i]) <= 1e-10);
  }
}
