#include "jcbound/io.hpp"

#include <cmath>

namespace jcbound {

namespace {

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw StructuralError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> populations(const Json& j, const char* key, std::size_t n) {
  if (!j.contains(key) || !j[key].is_array()) throw StructuralError(std::string("missing array \"") + key + "\"");
  const Json& arr = j[key];
  if (arr.size() != n) throw StructuralError(std::string("\"") + key + "\" must have N entries");
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = number(arr[i], key);
    if (!std::isfinite(v)) throw InvalidStateError(std::string(key) + "[" + std::to_string(i) + "] is not finite");
    if (v < 0.0) throw InvalidStateError(std::string(key) + "[" + std::to_string(i) + "] is negative");
    out.push_back(v);
  }
  return out;
}

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace

SymmetricState state_from_json(const Json& j) {
  if (!j.is_object()) throw StructuralError("state must be a JSON object");
  if (!j.contains("N") || !j["N"].is_number_integer()) throw StructuralError("\"N\" must be an integer");
  const auto n_signed = j["N"].get<long long>();
  if (n_signed < 2) throw StructuralError("\"N\" must be >= 2");
  const auto n = static_cast<std::size_t>(n_signed);
  SymmetricState s;
  s.a = populations(j, "a", n);
  s.b = populations(j, "b", n);
  if (!j.contains("c") || !j["c"].is_array()) throw StructuralError("missing array \"c\"");
  const Json& c = j["c"];
  if (c.size() != n - 1) throw StructuralError("\"c\" must have N - 1 entries");
  for (const auto& z : c) {
    if (!z.is_object() || !z.contains("re") || !z.contains("im")) {
      throw StructuralError("coherences must be {\"re\": x, \"im\": y}");
    }
    const double re = number(z["re"], "re");
    const double im = number(z["im"], "im");
    if (!std::isfinite(re) || !std::isfinite(im)) throw InvalidStateError("coherence is not finite");
    s.c.emplace_back(re, im);
  }
  check_structure(s);
  return s;
}

SymmetricState state_from_string(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw StructuralError(std::string("malformed JSON: ") + e.what());
  }
  return state_from_json(j);
}

Json to_json(const SymmetricState& s) {
  Json c = Json::array();
  for (const auto& z : s.c) c.push_back(complex_json(z));
  return Json{{"N", s.qudit_dim()}, {"a", s.a}, {"b", s.b}, {"c", c}};
}

Json to_json(const ValidityReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"kind", to_string(x.kind)}, {"index", x.index}, {"margin", x.margin}});
  }
  return Json{{"ok", r.ok}, {"violations", v}, {"positivity_margins", r.positivity_margins}};
}

Json to_json(const CriteriaReport& r) {
  return Json{{"negativity", r.negativity},
              {"gerjuoy", r.gerjuoy},
              {"ccnr_norm", r.ccnr.norm},
              {"ccnr_singular_values", r.ccnr.singular_values},
              {"trace", r.ccnr.trace},
              {"cm_lhs", r.cm.lhs},
              {"cm_rhs", r.cm.rhs},
              {"cm_gap", r.cm.gap()},
              {"cm_violated", r.cm.violated},
              {"verdict", to_string(r.verdict)}};
}

Json to_json(const NormalForm& nf) {
  Json segs = Json::array();
  for (const auto& s : nf.segments) {
    segs.push_back({{"first", s.first}, {"x", s.x}, {"y", s.y}, {"b", s.b}});
  }
  Json left = Json::array();
  for (const auto& l : nf.leftovers) left.push_back({{"index", l.index}, {"weight", l.weight}});
  return Json{{"segments", segs}, {"leftovers", left}};
}

Json to_json(const DenseVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Json to_json(const ProductVector& p) {
  Json j{{"e", to_json(p.e)}, {"f", to_json(p.f)}};
  j["theta"] = p.theta ? Json(*p.theta) : Json(nullptr);
  return j;
}

namespace {

Json vectors(const std::vector<DenseVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

}  // namespace

Json to_json(const Certificate& c) {
  Json pv = Json::array();
  for (const auto& p : c.product_vectors) pv.push_back(to_json(p));
  return Json{{"verdict", to_string(c.verdict)},
              {"ppt_verified", c.ppt_verified},
              {"negativity", c.negativity},
              {"rank_tau", c.rank_tau},
              {"rank_tau_pt", c.rank_tau_pt},
              {"rank_shortcut_separable", c.rank_shortcut_separable},
              {"obstruction", complex_json(c.obstruction)},
              {"obstruction_magnitude", std::abs(c.obstruction)},
              {"obstruction_spread", c.obstruction_spread},
              {"pole_obstruction", c.pole_obstruction},
              {"min_singular_ratio", c.min_singular_ratio},
              {"kernel_tau", vectors(c.kernel_tau)},
              {"kernel_tau_pt", vectors(c.kernel_tau_pt)},
              {"product_vectors", pv},
              {"note", c.note}};
}

Json to_json(const GenerationCertificate& c) {
  return Json{{"ok", c.ok},
              {"T", c.T},
              {"weight", c.weight},
              {"ef", to_json(c.ef)},
              {"zeta", to_json(c.zeta)},
              {"tau1_min_eig", c.tau1_min_eig},
              {"tau1_pt_min_eig", c.tau1_pt_min_eig},
              {"kernel_angle", c.kernel_angle},
              {"kernel_pt_angle", c.kernel_pt_angle},
              {"kernel_residual", c.kernel_residual},
              {"reconstruction_error", c.reconstruction_error},
              {"zeta_min_overlap", c.zeta_min_overlap},
              {"pole_overlap", c.pole_overlap},
              {"tau1_verdict", to_string(c.tau1_verdict)},
              {"tau_verdict", to_string(c.tau_verdict)},
              {"note", c.note}};
}

Json to_json(const StudyReport& r) {
  Json counts = Json::object();
  for (const auto& [k, v] : r.verdict_counts) counts[k] = v;
  Json ce = Json::array();
  for (const auto& c : r.counterexamples) {
    ce.push_back({{"index", c.index}, {"kind", c.kind}, {"value", c.value}, {"state", to_json(c.state)}});
  }
  return Json{{"seed", r.seed},
              {"N", r.n},
              {"total", r.total},
              {"verdict_counts", counts},
              {"ppt_count", r.ppt_count},
              {"max_ccnr_ppt", r.max_ccnr_ppt},
              {"max_cm_margin_ppt", std::isfinite(r.max_cm_margin_ppt) ? Json(r.max_cm_margin_ppt) : Json(nullptr)},
              {"npt_ccnr_checked", r.npt_ccnr_checked},
              {"counterexamples", ce}};
}

Json to_json(const HullDecomposition& h) {
  Json terms = Json::array();
  for (const auto& t : h.terms) terms.push_back({{"weight", t.weight}, {"vector", to_json(t.vector)}});
  return Json{{"N", h.n},
              {"y", h.y},
              {"branch", h.branch},
              {"gh", to_json(h.gh)},
              {"residual_weight", h.residual_weight},
              {"residual_ket", {h.residual_ket.first, h.residual_ket.second}},
              {"terms", terms},
              {"reconstruction_error", h.reconstruction_error}};
}

}  // namespace jcbound
