#include "jcbound/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "jcbound/normal_form.hpp"
#include "jcbound/numerics.hpp"

namespace jcbound {

void SampleConfig::check() const {
  if (n < 2) throw DomainError("sample N must be >= 2");
  if (count < 1) throw DomainError("sample count must be >= 1");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool ppt_links(const SymmetricState& s) {
  for (std::size_t n = 1; n < s.qudit_dim(); ++n) {
    if (std::norm(s.c[n - 1]) > s.a[n - 1] * s.b[n]) return false;
  }
  return true;
}

SymmetricState draw(const SampleConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = cfg.n;
  std::vector<double> cuts(2 * n - 1);
  for (double& x : cuts) x = unit(rng);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> w(2 * n);
  double prev = 0.0;
  for (std::size_t k = 0; k + 1 < 2 * n; ++k) {
    w[k] = cuts[k] - prev;
    prev = cuts[k];
  }
  w[2 * n - 1] = 1.0 - prev;
  const double scale = cfg.normalized ? 1.0 : std::pow(10.0, -1.0 + 2.0 * unit(rng));

  SymmetricState s;
  s.a.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n));
  s.b.assign(w.begin() + static_cast<std::ptrdiff_t>(n), w.end());
  for (std::size_t k = 0; k < n; ++k) {
    s.a[k] *= scale;
    s.b[k] *= scale;
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double mag = unit(rng) * std::sqrt(s.a[k] * s.b[k - 1]);
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    s.c.push_back(std::polar(mag, phase));
  }
  return s;
}

}  // namespace

SymmetricState sample_state(const SampleConfig& cfg, std::size_t index) {
  cfg.check();
  std::mt19937_64 rng(splitmix64(splitmix64(cfg.seed) ^ static_cast<std::uint64_t>(index)));
  constexpr int kMaxAttempts = 10'000'000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    SymmetricState s = draw(cfg, rng);
    if (!cfg.ppt_only || ppt_links(s)) return s;
  }
  throw DomainError("ppt_only rejection sampling did not terminate");
}

std::vector<SymmetricState> sample_states(const SampleConfig& cfg) {
  cfg.check();
  std::vector<SymmetricState> out;
  out.reserve(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) out.push_back(sample_state(cfg, i));
  return out;
}

unsigned worker_count() {
  if (const char* env = std::getenv("JCBOUND_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    std::fprintf(stderr, "warning: ignoring JCBOUND_WORKERS=%s\n", env);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs fn(begin, end) on contiguous shards and returns the per-shard results
// in index order.
template <typename R, typename F>
std::vector<R> sharded(std::size_t total, unsigned workers, F&& fn) {
  if (workers == 0) workers = worker_count();
  const std::size_t shards = std::max<std::size_t>(1, std::min<std::size_t>(workers, total));
  std::vector<R> results(shards);
  std::vector<std::exception_ptr> errors(shards);
  std::vector<std::thread> threads;
  for (std::size_t k = 0; k < shards; ++k) {
    const std::size_t begin = total * k / shards;
    const std::size_t end = total * (k + 1) / shards;
    auto job = [&, k, begin, end] {
      try {
        results[k] = fn(begin, end);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    };
    if (shards == 1) {
      job();
    } else {
      threads.emplace_back(job);
    }
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

constexpr double kStudyTol = 1e-12;

}  // namespace

void StudyReport::merge(const StudyReport& other) {
  total += other.total;
  for (const auto& [k, v] : other.verdict_counts) verdict_counts[k] += v;
  ppt_count += other.ppt_count;
  max_ccnr_ppt = std::max(max_ccnr_ppt, other.max_ccnr_ppt);
  max_cm_margin_ppt = std::max(max_cm_margin_ppt, other.max_cm_margin_ppt);
  npt_ccnr_checked += other.npt_ccnr_checked;
  counterexamples.insert(counterexamples.end(), other.counterexamples.begin(), other.counterexamples.end());
}

StudyReport monte_carlo_study(const SampleConfig& cfg, unsigned workers) {
  cfg.check();
  auto shard = [&](std::size_t begin, std::size_t end) {
    StudyReport r;
    r.max_cm_margin_ppt = -std::numeric_limits<double>::infinity();
    for (std::size_t i = begin; i < end; ++i) {
      const SymmetricState s = sample_state(cfg, i);
      const CriteriaReport rep = report(s);
      ++r.total;
      ++r.verdict_counts[to_string(rep.verdict)];
      const double excess = std::max(rep.ccnr.norm - 1.0, 0.0);
      if (rep.negativity < excess - kStudyTol) {
        r.counterexamples.push_back({i, "negativity-ccnr", excess - rep.negativity, s});
      }
      if (rep.negativity <= kDetectTol) {
        ++r.ppt_count;
        r.max_ccnr_ppt = std::max(r.max_ccnr_ppt, rep.ccnr.norm);
        r.max_cm_margin_ppt = std::max(r.max_cm_margin_ppt, -rep.cm.gap());
        if (rep.ccnr.norm > 1.0 + kStudyTol) r.counterexamples.push_back({i, "ccnr", rep.ccnr.norm, s});
        if (rep.cm.violated) r.counterexamples.push_back({i, "cm", -rep.cm.gap(), s});
      } else if (excess > 0.0) {
        ++r.npt_ccnr_checked;
      }
    }
    return r;
  };
  const auto parts = sharded<StudyReport>(cfg.count, workers, shard);
  StudyReport out;
  out.seed = cfg.seed;
  out.n = cfg.n;
  out.max_cm_margin_ppt = -std::numeric_limits<double>::infinity();
  for (const auto& p : parts) out.merge(p);
  return out;
}

namespace {

FamilyRow family_row(double y2, double y3, bool with_range_search) {
  FamilyRow row;
  row.y2 = y2;
  row.y3 = y3;
  const TauState t = make_tau({y2, y2, y3});
  const DenseMatrix tau = tau_dense(t);
  const SymmetricState s = from_dense(tau).normalized_copy();
  row.negativity = negativity(s);
  row.ccnr_norm = ccnr_norm(s);
  const CmResult cm = cm_corollary(s);
  row.cm_lhs = cm.lhs;
  row.cm_rhs = cm.rhs;
  row.cm_violated = cm.violated;
  const Certificate cert = certify_n4(y2, y3);
  row.rank_tau = cert.rank_tau;
  row.rank_tau_pt = cert.rank_tau_pt;
  row.obstruction = std::abs(cert.obstruction);
  row.certificate = cert.verdict;
  if (with_range_search) row.range_search = range_search(tau, partial_transpose(tau)).verdict;
  return row;
}

}  // namespace

std::vector<FamilyRow> grid_scan_family(const FamilyScan& scan, unsigned workers) {
  if (!(scan.step > 0.0)) throw DomainError("grid step must be positive");
  std::vector<std::pair<int, int>> points;
  const double eps = 1e-9;
  const int i_max = static_cast<int>(std::floor(scan.y2_max / scan.step + eps));
  const int j_max = static_cast<int>(std::floor(scan.y3_max / scan.step + eps));
  for (int i = 1; i <= i_max; ++i) {
    for (int j = scan.include_diagonal ? i : i + 1; j <= j_max; ++j) points.emplace_back(i, j);
  }
  auto shard = [&](std::size_t begin, std::size_t end) {
    std::vector<FamilyRow> rows;
    for (std::size_t k = begin; k < end; ++k) {
      rows.push_back(family_row(points[k].first * scan.step, points[k].second * scan.step, scan.with_range_search));
    }
    return rows;
  };
  std::vector<FamilyRow> out;
  for (auto& part : sharded<std::vector<FamilyRow>>(points.size(), workers, shard)) {
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string to_csv(const FamilyRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d,%.17g,%s", r.y2, r.y3, r.negativity,
                r.ccnr_norm, r.cm_lhs, r.cm_rhs, r.cm_violated ? 1 : 0, r.rank_tau, r.rank_tau_pt, r.obstruction,
                to_string(r.certificate));
  return buf;
}

namespace {

ProductVector product(std::vector<Complex> e, std::vector<Complex> f) {
  ProductVector pv;
  pv.e = Eigen::Map<DenseVector>(e.data(), static_cast<Eigen::Index>(e.size()));
  pv.f = Eigen::Map<DenseVector>(f.data(), static_cast<Eigen::Index>(f.size()));
  return pv;
}

}  // namespace

HullDecomposition hull_construct(std::size_t n, const std::vector<double>& y) {
  if (n != 2 && n != 3) throw DomainError("hull_construct supports N = 2 and N = 3 only");
  if (y.size() != n - 1) throw DomainError("hull_construct needs N - 1 values of y");
  for (double v : y) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("hull_construct needs positive finite y");
  }
  HullDecomposition h;
  h.n = n;
  h.y = y;
  h.target = tau_dense(make_tau(y));
  const auto nn = static_cast<Eigen::Index>(n);

  if (n == 2) {
    h.branch = "N2";
    h.gh = product({1.0, 1.0 / y[0]}, {y[0], y[0]});
  } else if (y[0] >= y[1]) {
    h.branch = "y1>=y2";
    h.gh = product({1.0, 1.0 / y[0]}, {y[0], y[0], y[1]});
    h.residual_weight = 1.0 - (y[1] * y[1]) / (y[0] * y[0]);
    h.residual_ket = {1, 2};
  } else {
    h.branch = "y2>y1";
    h.gh = product({1.0, 1.0 / y[1]}, {y[0], y[1], y[1]});
    h.residual_weight = 1.0 - (y[0] * y[0]) / (y[1] * y[1]);
    h.residual_ket = {1, 0};
  }
  const DenseVector gh = h.gh.tensor();
  h.projected = symmetry_project(gh * gh.adjoint());

  // The projector is the average of exp(i phi Pi) . exp(-i phi Pi) over
  // phi = pi k / N, k < 2N, and exp(i phi Pi) factorizes into local phases.
  const double norm_e = h.gh.e.norm();
  const double norm_f = h.gh.f.norm();
  const double w = norm_e * norm_e * norm_f * norm_f / (2.0 * static_cast<double>(n));
  for (std::size_t k = 0; k < 2 * n; ++k) {
    const double phi = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    ProductVector pv = h.gh;
    pv.e(1) *= std::polar(1.0, phi);
    for (Eigen::Index p = 0; p < nn; ++p) pv.f(p) *= std::polar(1.0, phi * static_cast<double>(p));
    pv.e /= norm_e;
    pv.f /= norm_f;
    h.terms.push_back({w, std::move(pv)});
  }
  if (h.residual_weight > 0.0) {
    ProductVector pv;
    pv.e = DenseVector::Zero(2);
    pv.f = DenseVector::Zero(nn);
    pv.e(h.residual_ket.first) = 1.0;
    pv.f(h.residual_ket.second) = 1.0;
    h.terms.push_back({h.residual_weight, std::move(pv)});
  }

  DenseMatrix sum = DenseMatrix::Zero(2 * nn, 2 * nn);
  for (const auto& t : h.terms) {
    const DenseVector v = t.vector.tensor();
    sum += t.weight * v * v.adjoint();
  }
  h.reconstruction_error = (sum - h.target).cwiseAbs().maxCoeff();
  return h;
}

}  // namespace jcbound
