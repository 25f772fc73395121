#include <doctest.h>

#include <cstdlib>
#include <limits>

#include "jcbound/criteria.hpp"
#include "jcbound/harness.hpp"
#include "jcbound/io.hpp"
#include "support.hpp"

using namespace jcbound;
using namespace testsupport;

TEST_CASE("sampling is seeded, valid and worker independent") {
  SampleConfig cfg;
  cfg.n = 4;
  cfg.count = 500;
  cfg.seed = 7;
  const auto a = sample_states(cfg);
  const auto b = sample_states(cfg);
  REQUIRE(a.size() == 500);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i] == sample_state(cfg, i));
    CHECK(validate(a[i]).ok);
    CHECK(std::abs(a[i].trace() - 1.0) <= 1e-12);
  }
  cfg.seed = 8;
  CHECK_FALSE(sample_state(cfg, 0) == a[0]);

  cfg.normalized = false;
  for (const auto& s : sample_states(cfg)) {
    CHECK(validate(s).ok);
    CHECK(s.trace() >= 0.1 - 1e-12);
    CHECK(s.trace() <= 10.0 + 1e-12);
  }

  cfg.normalized = true;
  cfg.ppt_only = true;
  for (const auto& s : sample_states(cfg)) CHECK(negativity(s) == 0.0);

  cfg.count = 0;
  CHECK_THROWS_AS(cfg.check(), DomainError);
}

TEST_CASE("study report is reproducible and independent of the worker count") {
  SampleConfig cfg;
  cfg.count = 3000;
  cfg.seed = 11;
  const StudyReport one = monte_carlo_study(cfg, 1);
  const StudyReport three = monte_carlo_study(cfg, 3);
  CHECK(to_json(one).dump() == to_json(three).dump());
  std::size_t total = 0;
  for (const auto& [k, v] : one.verdict_counts) total += v;
  CHECK(total == 3000);
  CHECK(one.total == 3000);
  CHECK(one.counterexamples.empty());
  CHECK(one.max_ccnr_ppt <= 1.0);
  CHECK(one.max_cm_margin_ppt <= 0.0);

  cfg.count = 1;
  CHECK(to_json(monte_carlo_study(cfg, 1)).dump() == to_json(monte_carlo_study(cfg, 1)).dump());
}

TEST_CASE("PPT-only study finds no CCNR or CM violation") {
  SampleConfig cfg;
  cfg.count = 5000;
  cfg.seed = 12;
  cfg.ppt_only = true;
  const StudyReport r = monte_carlo_study(cfg);
  CHECK(r.ppt_count == 5000);
  CHECK(r.counterexamples.empty());
}

TEST_CASE("family scan rows") {
  FamilyScan scan;
  scan.y2_max = 1.0;
  scan.y3_max = 1.0;
  scan.step = 0.1;
  const auto rows = grid_scan_family(scan, 2);
  CHECK(rows.size() == 55);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK((rows[i - 1].y2 < rows[i].y2 || (rows[i - 1].y2 == rows[i].y2 && rows[i - 1].y3 < rows[i].y3)));
  }
  for (const auto& r : rows) {
    CHECK(r.negativity <= 1e-12);
    CHECK_FALSE(r.cm_violated);
    CHECK(r.ccnr_norm <= 1.0 + 1e-12);
    if (r.y2 < r.y3 - 1e-9) {
      CHECK(r.certificate == CertVerdict::bound_entangled_edge);
      CHECK(r.rank_tau == 6);
      CHECK(r.rank_tau_pt == 5);
    } else {
      CHECK(r.certificate == CertVerdict::inconclusive);
    }
    if (std::abs(r.y2 - 0.5) < 1e-9 && std::abs(r.y3 - 0.9) < 1e-9) {
      CHECK(r.obstruction == doctest::Approx(std::abs(certify_n4(0.5, 0.9).obstruction)).epsilon(1e-14));
    }
  }
  CHECK(to_csv(rows.front()).rfind("0.1,0.1,", 0) == 0);
  scan.include_diagonal = false;
  CHECK(grid_scan_family(scan, 1).size() == 45);
}

namespace {

double reconstruction(const HullDecomposition& h) {
  DenseMatrix sum = DenseMatrix::Zero(h.target.rows(), h.target.cols());
  for (const auto& t : h.terms) {
    const DenseVector v = t.vector.tensor();
    CHECK(t.weight >= 0.0);
    CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
    sum += t.weight * v * v.adjoint();
  }
  return max_abs(sum - h.target);
}

}  // namespace

TEST_CASE("hull: N = 2") {
  const HullDecomposition h = hull_construct(2, {0.7});
  CHECK(h.branch == "N2");
  CHECK(h.terms.size() == 4);
  CHECK(max_abs(h.projected - h.target) <= 1e-14);
  CHECK(max_abs(phase_average_oracle(h.gh.tensor() * h.gh.tensor().adjoint()) - tau_dense(make_tau({0.7}))) <= 1e-14);
  CHECK(reconstruction(h) <= 1e-12);
  CHECK(h.reconstruction_error <= 1e-12);
}

TEST_CASE("hull: N = 3 branches") {
  HullDecomposition h = hull_construct(3, {0.8, 0.5});
  CHECK(h.branch == "y1>=y2");
  CHECK(h.residual_weight == doctest::Approx(0.609375).epsilon(1e-14));
  CHECK(h.residual_ket == std::pair<int, int>{1, 2});
  CHECK(reconstruction(h) <= 1e-12);
  DenseMatrix diff = h.target - h.projected;
  CHECK(diff(idx(1, 2, 3), idx(1, 2, 3)).real() == doctest::Approx(0.609375).epsilon(1e-14));

  h = hull_construct(3, {0.5, 0.8});
  CHECK(h.branch == "y2>y1");
  CHECK(h.residual_weight == doctest::Approx(0.609375).epsilon(1e-14));
  CHECK(reconstruction(h) <= 1e-12);
  diff = h.target - h.projected;
  const auto [q, f] = h.residual_ket;
  CHECK(diff(idx(q, f, 3), idx(q, f, 3)).real() == doctest::Approx(0.609375).epsilon(1e-14));

  Gen gen(71);
  for (int k = 0; k < 100; ++k) {
    const double y1 = gen.uniform(0.05, 5.0);
    const double y2 = gen.uniform(0.05, 5.0);
    const HullDecomposition r = hull_construct(3, {y1, y2});
    CHECK(r.reconstruction_error <= 1e-12 * std::max(1.0, std::max(y1, y2) * std::max(y1, y2)));
    CHECK(negativity_oracle(r.target) <= 1e-12);
  }
  CHECK_THROWS_AS((void)hull_construct(4, {0.1, 0.2, 0.3}), DomainError);
  CHECK_THROWS_AS((void)hull_construct(2, {0.0}), DomainError);
}

TEST_CASE("worker count honours the environment") {
  setenv("JCBOUND_WORKERS", "3", 1);
  CHECK(worker_count() == 3);
  unsetenv("JCBOUND_WORKERS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("state JSON round trip and rejection") {
  Gen gen(72);
  for (int k = 0; k < 200; ++k) {
    const SymmetricState s = gen.state(static_cast<std::size_t>(gen.integer(2, 8)), false);
    CHECK(state_from_string(to_json(s).dump()) == s);
  }
  const std::string ok = R"({"N": 2, "a": [0.2, 0.3], "b": [0.1, 0.4], "c": [{"re": 0.15, "im": 0}]})";
  CHECK(state_from_string(ok).c[0] == Complex(0.15, 0.0));

  CHECK_THROWS_AS((void)state_from_string(R"({"N": 2, "a": [0.2, -0.3], "b": [0.1, 0.4], "c": [{"re": 0, "im": 0}]})"),
                  InvalidStateError);
  Json nan_state = Json::parse(ok);
  nan_state["b"][0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS((void)state_from_json(nan_state), InvalidStateError);
  CHECK_THROWS_AS((void)state_from_string(R"({"N": 2, "a": [0.2], "b": [0.1, 0.4], "c": []})"), StructuralError);
  CHECK_THROWS_AS((void)state_from_string("{not json"), StructuralError);
  CHECK_THROWS_AS((void)state_from_string(R"({"N": 2, "a": [0.2, 0.3], "b": [0.1, 0.4], "c": [0.1]})"),
                  StructuralError);
}

TEST_CASE("certificate JSON carries the witnesses") {
  const Json j = to_json(certify_n4(0.5, 0.9));
  CHECK(j["verdict"] == "BOUND_ENTANGLED_EDGE");
  CHECK(j["kernel_tau"].size() == 2);
  CHECK(j["kernel_tau_pt"].size() == 3);
  CHECK(j["rank_tau"] == 6);
}
