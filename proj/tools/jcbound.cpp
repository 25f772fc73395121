// jcbound: command-line front end.
//
// Exit codes: 0 success, 1 invalid input or usage, 2 a certificate or a
// checked assertion failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jcbound/criteria.hpp"
#include "jcbound/harness.hpp"
#include "jcbound/io.hpp"
#include "jcbound/jc_dynamics.hpp"
#include "jcbound/normal_form.hpp"
#include "jcbound/range_certifier.hpp"

namespace {

using namespace jcbound;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kFailed = 2;

constexpr const char* kSchemaHelp =
    "State JSON (one document, an array of documents, or one per line):\n"
    "  {\"N\": 4, \"a\": [a_0..a_{N-1}], \"b\": [b_0..b_{N-1}],\n"
    "   \"c\": [{\"re\": x, \"im\": y}, ...]}   # N - 1 coherences, c[i] = <0,i+1|rho|1,i>\n";

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// One whole document (object or array of objects) or JSON lines.
std::vector<Json> read_documents(const std::string& path) {
  const std::string text = read_input(path);
  std::vector<Json> docs;
  try {
    Json j = Json::parse(text);
    if (j.is_array()) {
      for (auto& d : j) docs.push_back(std::move(d));
    } else {
      docs.push_back(std::move(j));
    }
    return docs;
  } catch (const nlohmann::json::parse_error&) {
  }
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      docs.push_back(Json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw StructuralError("line " + std::to_string(lineno) + ": malformed JSON (" + e.what() + ")");
    }
  }
  if (docs.empty()) throw StructuralError("no input states");
  return docs;
}

void emit(const Json& j) { std::cout << j.dump() << '\n'; }

int cmd_validate(const std::string& path) {
  int code = kOk;
  for (const auto& doc : read_documents(path)) {
    try {
      const SymmetricState s = state_from_json(doc);
      const ValidityReport r = validate(s);
      emit(to_json(r));
      if (!r.ok) code = kInvalid;
    } catch (const Error& e) {
      emit(Json{{"ok", false}, {"error", e.what()}});
      code = kInvalid;
    }
  }
  return code;
}

int cmd_report(const std::string& path) {
  for (const auto& doc : read_documents(path)) {
    const SymmetricState s = state_from_json(doc);
    require_valid(s);
    Json out = to_json(report(s));
    try {
      out["normal_form"] = to_json(normal_form(s));
    } catch (const NotPptError& e) {
      out["normal_form"] = nullptr;
      out["normal_form_note"] = e.what();
    }
    emit(out);
  }
  return kOk;
}

struct EvolveArgs {
  EvolutionSpec spec;
  double t_max = 1.0;
  int steps = 100;
  double dt = 1e-3;
  std::vector<std::string> channels;
  bool reversed = false;
};

int cmd_evolve(EvolveArgs args) {
  args.spec.sign = args.reversed ? SignConvention::reversed : SignConvention::paper;
  args.spec.check();
  if (!(args.t_max > 0.0) || args.steps < 1) throw DomainError("need t-max > 0 and steps >= 1");
  std::vector<LindbladSpec> channels;
  for (const auto& c : args.channels) {
    const auto colon = c.find(':');
    const auto ch = channel_from_string(c.substr(0, colon));
    if (!ch || colon == std::string::npos) throw DomainError("channel must look like photon-loss:0.1, got " + c);
    channels.push_back({*ch, std::stod(c.substr(colon + 1))});
  }

  std::cout << "t,negativity,ccnr_norm,cm_gap,verdict\n";
  auto row = [](double t, const SymmetricState& s) {
    const CriteriaReport r = report(s);
    std::printf("%.10g,%.17g,%.17g,%.17g,%s\n", t, r.negativity, r.ccnr.norm, r.cm.gap(), to_string(r.verdict));
  };
  std::cout.flush();

  SymmetricState s = initial_state(args.spec);
  const double h = args.t_max / args.steps;
  for (int k = 0; k <= args.steps; ++k) {
    const double t = h * k;
    if (channels.empty()) {
      EvolutionSpec at = args.spec;
      at.t = t;
      row(t, at.delta == 0.0 ? evolve_resonant(at) : evolve_unitary(initial_state(at), at));
    } else {
      if (k > 0) {
        const int sub = std::max(1, static_cast<int>(std::ceil(h / args.dt)));
        for (int j = 0; j < sub; ++j) s = lindblad_step(s, channels, args.spec, h / sub).state;
      }
      row(t, s);
    }
  }
  std::fflush(stdout);
  return kOk;
}

int cmd_scan_family(const FamilyScan& scan) {
  const auto rows = grid_scan_family(scan);
  // The range-search verdict is an opt-in trailing column; the base columns are fixed.
  std::cout << kFamilyCsvHeader << (scan.with_range_search ? ",range_search" : "") << '\n';
  int code = kOk;
  for (const auto& r : rows) {
    std::cout << to_csv(r);
    if (r.range_search) std::cout << ',' << to_string(*r.range_search);
    std::cout << '\n';
    const bool edge_expected = r.y2 < r.y3;
    if (r.negativity > kDetectTol || r.cm_violated || r.ccnr_norm > 1.0 + kDetectTol ||
        (edge_expected && r.certificate != CertVerdict::bound_entangled_edge) ||
        (r.range_search && edge_expected && *r.range_search != CertVerdict::bound_entangled_edge)) {
      code = kFailed;
    }
  }
  if (code != kOk) std::cerr << "scan-family: an expected property failed on at least one row\n";
  return code;
}

int cmd_sample(SampleConfig cfg, bool seed_given, bool study) {
  if (!seed_given) std::cerr << "warning: --seed not given, using seed 0\n";
  if (study) {
    const StudyReport r = monte_carlo_study(cfg);
    emit(to_json(r));
    return r.counterexamples.empty() ? kOk : kFailed;
  }
  for (std::size_t i = 0; i < cfg.count; ++i) emit(to_json(sample_state(cfg, i)));
  return kOk;
}

int cmd_hull(int n, const std::vector<double>& y) {
  const HullDecomposition h = hull_construct(static_cast<std::size_t>(n), y);
  emit(to_json(h));
  return h.reconstruction_error <= 1e-12 ? kOk : kFailed;
}

struct CertifyArgs {
  double y2 = 0.0;
  double y3 = 0.0;
  bool generation = false;
  EvolutionSpec spec;
  std::string input;
};

int cmd_certify(const CertifyArgs& a, bool family) {
  if (a.generation) {
    const GenerationCertificate c = certify_generation(a.spec);
    emit(to_json(c));
    return c.ok ? kOk : kFailed;
  }
  if (family) {
    emit(to_json(certify_n4(a.y2, a.y3)));
    return kOk;
  }
  // State input: normal form, then the generic range search on every tau.
  for (const auto& doc : read_documents(a.input)) {
    const SymmetricState s = state_from_json(doc);
    require_valid(s);
    Json out;
    if (negativity(s) > kDetectTol) {
      out["verdict"] = to_string(CertVerdict::npt);
      emit(out);
      continue;
    }
    const NormalForm nf = normal_form(s);
    out["normal_form"] = to_json(nf);
    Json taus = Json::array();
    for (const auto& seg : nf.segments) {
      if (seg.width() < 2) continue;
      const Decomposition d = decompose(seg);
      const DenseMatrix tau = tau_dense(d.tau);
      Json entry = to_json(range_search(tau, partial_transpose(tau)));
      entry["first"] = seg.first;
      entry["sigma_s"] = d.sigma_s;
      taus.push_back(entry);
    }
    out["tau_certificates"] = taus;
    emit(out);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement criteria and certificates for excitation-conserving qubit-qudit states"};
  app.footer(kSchemaHelp);
  app.require_subcommand(1);

  std::string path;
  auto* validate_cmd = app.add_subcommand("validate", "Check states for structural validity and positivity");
  validate_cmd->add_option("input", path, "State JSON file (default: stdin)");

  auto* report_cmd = app.add_subcommand("report", "Evaluate all criteria and the normal form");
  report_cmd->add_option("input", path, "State JSON file (default: stdin)");

  EvolveArgs ev;
  auto* evolve_cmd = app.add_subcommand("evolve", "Criteria along a JC trajectory (CSV)");
  evolve_cmd->add_option("--lambda", ev.spec.lambda, "Atom excited-state probability")->capture_default_str();
  evolve_cmd->add_option("--m", ev.spec.m, "Mean thermal photon number")->capture_default_str();
  evolve_cmd->add_option("--g", ev.spec.g, "Coupling")->capture_default_str();
  evolve_cmd->add_option("--omega0", ev.spec.omega0, "Mode frequency")->capture_default_str();
  evolve_cmd->add_option("--delta", ev.spec.delta, "Detuning")->capture_default_str();
  evolve_cmd->add_option("--ncut", ev.spec.ncut, "Fock truncation")->capture_default_str();
  evolve_cmd->add_option("--t-max", ev.t_max, "Final time")->capture_default_str();
  evolve_cmd->add_option("--steps", ev.steps, "Output rows after t = 0")->capture_default_str();
  evolve_cmd->add_option("--dt", ev.dt, "Largest Lindblad integration step")->capture_default_str();
  evolve_cmd->add_option("--channel", ev.channels, "Lindblad channel name:rate (repeatable)");
  evolve_cmd->add_flag("--reversed-sign", ev.reversed, "Use d rho/dt = -i[rho, H]");

  FamilyScan scan;
  auto* scan_cmd = app.add_subcommand("scan-family", "Criteria and certificates on the tau(y2, y3) grid (CSV)");
  scan_cmd->add_option("--y2-max", scan.y2_max)->capture_default_str();
  scan_cmd->add_option("--y3-max", scan.y3_max)->capture_default_str();
  scan_cmd->add_option("--step", scan.step)->capture_default_str();
  bool no_diagonal = false;
  scan_cmd->add_flag("--no-diagonal", no_diagonal, "Skip y2 = y3");
  scan_cmd->add_flag("--range-search", scan.with_range_search, "Also run the generic range search");

  SampleConfig cfg;
  bool unnormalized = false;
  bool study = false;
  auto* sample_cmd = app.add_subcommand("sample", "Seeded random states (JSON lines) or the criteria study");
  sample_cmd->add_option("--n", cfg.n, "Qudit dimension")->capture_default_str();
  sample_cmd->add_option("--count", cfg.count, "Number of states")->capture_default_str();
  auto* seed_opt = sample_cmd->add_option("--seed", cfg.seed, "RNG seed");
  sample_cmd->add_flag("--ppt-only", cfg.ppt_only, "Keep PPT states only");
  sample_cmd->add_flag("--unnormalized", unnormalized, "Random trace in [0.1, 10]");
  sample_cmd->add_flag("--study", study, "Run the criteria study instead of printing states");

  int hull_n = 2;
  std::vector<double> hull_y;
  auto* hull_cmd = app.add_subcommand("hull", "Explicit separable decomposition of tau for N = 2, 3");
  hull_cmd->add_option("--n", hull_n, "2 or 3")->required();
  hull_cmd->add_option("--y", hull_y, "y_1 [y_2]")->required()->delimiter(',');

  CertifyArgs ca;
  auto* certify_cmd = app.add_subcommand("certify", "Edge / generation certificates, or range search on a state");
  auto* y2_opt = certify_cmd->add_option("--y2", ca.y2, "Family parameter y2");
  auto* y3_opt = certify_cmd->add_option("--y3", ca.y3, "Family parameter y3");
  y2_opt->needs(y3_opt);
  y3_opt->needs(y2_opt);
  certify_cmd->add_flag("--generation", ca.generation, "Certificate for JC generation at small times");
  certify_cmd->add_option("--lambda", ca.spec.lambda)->capture_default_str();
  certify_cmd->add_option("--m", ca.spec.m)->capture_default_str();
  certify_cmd->add_option("--g", ca.spec.g)->capture_default_str();
  certify_cmd->add_option("--t", ca.spec.t)->capture_default_str();
  certify_cmd->add_option("input", ca.input, "State JSON file (default: stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << '\n' << kSchemaHelp;
    return kInvalid;
  }

  try {
    if (*validate_cmd) return cmd_validate(path);
    if (*report_cmd) return cmd_report(path);
    if (*evolve_cmd) return cmd_evolve(ev);
    if (*scan_cmd) {
      scan.include_diagonal = !no_diagonal;
      return cmd_scan_family(scan);
    }
    if (*sample_cmd) {
      cfg.normalized = !unnormalized;
      return cmd_sample(cfg, seed_opt->count() > 0, study);
    }
    if (*hull_cmd) return cmd_hull(hull_n, hull_y);
    if (*certify_cmd) return cmd_certify(ca, y2_opt->count() > 0);
  } catch (const jcbound::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
