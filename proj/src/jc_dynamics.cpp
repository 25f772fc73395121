#include "jcbound/jc_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "jcbound/criteria.hpp"
#include "jcbound/normal_form.hpp"
#include "jcbound/numerics.hpp"

namespace jcbound {

void EvolutionSpec::check() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
  if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("m must be finite and >= 0");
  if (!std::isfinite(g) || !std::isfinite(omega0) || !std::isfinite(delta) || !std::isfinite(t)) {
    throw DomainError("evolution parameters must be finite");
  }
  if (t < 0.0) throw DomainError("t must be >= 0");
  if (ncut < 2) throw DomainError("ncut must be >= 2");
}

ThermalWeights thermal_weights(double m, int ncut) {
  if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("thermal_weights needs finite m >= 0");
  if (ncut < 1) throw DomainError("thermal_weights needs ncut >= 1");
  ThermalWeights w;
  const double q = m / (1.0 + m);
  double p = 1.0 / (1.0 + m);
  for (int n = 0; n < ncut; ++n) {
    w.p.push_back(p);
    w.mass += p;
    p *= q;
  }
  return w;
}

SymmetricState initial_state(const EvolutionSpec& spec) {
  spec.check();
  const ThermalWeights w = thermal_weights(spec.m, spec.ncut);
  SymmetricState s;
  for (double p : w.p) {
    s.a.push_back((1.0 - spec.lambda) * p);
    s.b.push_back(spec.lambda * p);
  }
  s.c.assign(w.p.size() - 1, Complex(0.0, 0.0));
  return s;
}

namespace {

double scaled_time(const EvolutionSpec& spec) {
  if (!(spec.lambda > 0.0) || !(spec.m > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double k = spec.lambda + spec.m * (2.0 * spec.lambda - 1.0);
  return std::abs(k / (spec.lambda * std::sqrt(spec.m * (spec.m + 1.0)))) * spec.g * spec.t;
}

double rabi_angle(const EvolutionSpec& spec, std::size_t n) {
  return 2.0 * spec.g * std::sqrt(static_cast<double>(n)) * spec.t;
}

}  // namespace

EvolutionTerms evolution_terms(const EvolutionSpec& spec) {
  spec.check();
  if (!(spec.m > 0.0)) throw DomainError("evolution_terms needs m > 0");
  const double lam = spec.lambda;
  const double m = spec.m;
  const double k = lam + m * (2.0 * lam - 1.0);
  EvolutionTerms out;
  for (int n = 0; n <= spec.ncut; ++n) {
    const double theta = rabi_angle(spec, static_cast<std::size_t>(n));
    out.f.push_back(0.5 * std::pow(m, n - 1) * std::pow(m + 1.0, -n - 1));
    out.alpha_minus.push_back(m + lam - k * std::cos(theta));
    out.alpha_plus.push_back(m + lam + k * std::cos(theta));
    out.beta.push_back(k * std::sin(theta));
  }
  out.T = scaled_time(spec);
  return out;
}

SymmetricState evolve_resonant(const EvolutionSpec& spec) {
  spec.check();
  if (spec.delta != 0.0) throw DomainError("evolve_resonant needs delta = 0; use evolve_unitary");
  const auto n_cut = static_cast<std::size_t>(spec.ncut);
  const ThermalWeights w = thermal_weights(spec.m, spec.ncut + 1);
  const double lam = spec.lambda;
  // f_n alpha_n^{-/+} = (S_n +/- D_n cos) / 2 and f_n beta_n = D_n sin / 2 (up
  // to sign), with S_n = (1-l) p_n + l p_{n-1}, D_n = (1-l) p_n - l p_{n-1}.
  // Written with half angles so that no term cancels at small t:
  // (S + D cos) / 2 = (1-l) p_n cos^2 + l p_{n-1} sin^2.
  SymmetricState s;
  s.a.assign(n_cut, 0.0);
  s.b.assign(n_cut, 0.0);
  s.c.assign(n_cut - 1, Complex(0.0, 0.0));
  s.a[0] = (1.0 - lam) * w.p[0];
  for (std::size_t n = 1; n <= n_cut; ++n) {
    const double ground = (1.0 - lam) * w.p[n];
    const double excited = lam * w.p[n - 1];
    const double half = 0.5 * rabi_angle(spec, n);
    const double ch = std::cos(half);
    const double sh = std::sin(half);
    if (n < n_cut) {
      s.a[n] = ground * ch * ch + excited * sh * sh;
      s.c[n - 1] = Complex(std::abs((ground - excited) * sh * ch), 0.0);
    }
    s.b[n - 1] = ground * sh * sh + excited * ch * ch;
  }
  return s;
}

SymmetricState evolve_unitary(const SymmetricState& s, const EvolutionSpec& spec) {
  check_structure(s);
  const std::size_t n_dim = s.qudit_dim();
  const double t = spec.sign == SignConvention::paper ? spec.t : -spec.t;
  SymmetricState out = s;
  for (std::size_t n = 1; n < n_dim; ++n) {
    const double coupling = spec.g * std::sqrt(static_cast<double>(n));
    const double half_delta = 0.5 * spec.delta;
    const double omega = std::hypot(half_delta, coupling);
    const double sinc = omega > 0.0 ? std::sin(omega * t) / omega : t;
    // exp(-i M t) with M = [[d/2, -i g sqrt(n)], [i g sqrt(n), -d/2]]; the
    // scalar part of the block only contributes a global phase.
    Eigen::Matrix2cd u;
    const Complex i(0.0, 1.0);
    u(0, 0) = std::cos(omega * t) - i * sinc * half_delta;
    u(1, 1) = std::cos(omega * t) + i * sinc * half_delta;
    u(0, 1) = -i * sinc * (-i * coupling);
    u(1, 0) = -i * sinc * (i * coupling);
    Eigen::Matrix2cd rho;
    rho << s.a[n], s.c[n - 1], std::conj(s.c[n - 1]), s.b[n - 1];
    const Eigen::Matrix2cd r = u * rho * u.adjoint();
    out.a[n] = r(0, 0).real();
    out.b[n - 1] = r(1, 1).real();
    out.c[n - 1] = r(0, 1);
  }
  return out;
}

DenseMatrix jc_hamiltonian(std::size_t qudit_dim, const EvolutionSpec& spec) {
  const auto n_dim = static_cast<Eigen::Index>(qudit_dim);
  DenseMatrix h = DenseMatrix::Zero(2 * n_dim, 2 * n_dim);
  for (Eigen::Index n = 0; n < n_dim; ++n) {
    h(n, n) = spec.omega0 * static_cast<double>(n);
    h(n_dim + n, n_dim + n) = spec.omega0 * static_cast<double>(n) + spec.omega0 - spec.delta;
  }
  for (Eigen::Index n = 1; n < n_dim; ++n) {
    const double k = spec.g * std::sqrt(static_cast<double>(n));
    h(n, n_dim + n - 1) = Complex(0.0, -k);
    h(n_dim + n - 1, n) = Complex(0.0, k);
  }
  return h;
}

const char* to_string(Channel c) noexcept {
  switch (c) {
    case Channel::photon_loss: return "photon-loss";
    case Channel::photon_gain: return "photon-gain";
    case Channel::photon_dephasing: return "photon-dephasing";
    case Channel::atom_decay: return "atom-decay";
    case Channel::atom_pump: return "atom-pump";
    case Channel::atom_dephasing: return "atom-dephasing";
  }
  return "unknown";
}

std::optional<Channel> channel_from_string(const std::string& name) {
  for (Channel c : {Channel::photon_loss, Channel::photon_gain, Channel::photon_dephasing, Channel::atom_decay,
                    Channel::atom_pump, Channel::atom_dephasing}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

DenseMatrix jump_operator(Channel c, std::size_t qudit_dim) {
  const auto n_dim = static_cast<Eigen::Index>(qudit_dim);
  DenseMatrix o = DenseMatrix::Zero(2 * n_dim, 2 * n_dim);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index n = 0; n < n_dim; ++n) {
      const Eigen::Index k = i * n_dim + n;
      switch (c) {
        case Channel::photon_loss:
          if (n >= 1) o(k - 1, k) = std::sqrt(static_cast<double>(n));
          break;
        case Channel::photon_gain:
          if (n + 1 < n_dim) o(k + 1, k) = std::sqrt(static_cast<double>(n + 1));
          break;
        case Channel::photon_dephasing: o(k, k) = static_cast<double>(n); break;
        case Channel::atom_decay:
          if (i == 1) o(n, k) = 1.0;
          break;
        case Channel::atom_pump:
          if (i == 0) o(n_dim + n, k) = 1.0;
          break;
        case Channel::atom_dephasing:
          if (i == 1) o(k, k) = 1.0;
          break;
      }
    }
  }
  return o;
}

namespace {

struct Generator {
  DenseMatrix h;
  double sign;  // +1: -i[H, rho]
  std::vector<std::pair<double, DenseMatrix>> jumps;
  std::vector<DenseMatrix> jump_dag;
  std::vector<DenseMatrix> anti;  // O^dag O / 2

  DenseMatrix operator()(const DenseMatrix& rho) const {
    const Complex mi(0.0, -sign);
    DenseMatrix d = mi * (h * rho - rho * h);
    for (std::size_t k = 0; k < jumps.size(); ++k) {
      const auto& [rate, o] = jumps[k];
      d += rate * (o * rho * jump_dag[k] - anti[k] * rho - rho * anti[k]);
    }
    return d;
  }
};

}  // namespace

LindbladStep lindblad_step(const SymmetricState& s, const std::vector<LindbladSpec>& channels,
                           const EvolutionSpec& h, double dt) {
  check_structure(s);
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw DomainError("lindblad_step needs finite dt >= 0");
  const std::size_t n_dim = s.qudit_dim();
  Generator gen;
  gen.h = jc_hamiltonian(n_dim, h);
  gen.sign = h.sign == SignConvention::paper ? 1.0 : -1.0;
  double gain_rate = 0.0;
  for (const auto& ch : channels) {
    if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) {
      throw DomainError(std::string("invalid rate for channel ") + to_string(ch.channel));
    }
    if (ch.rate == 0.0) continue;
    if (ch.channel == Channel::photon_gain) gain_rate += ch.rate;
    DenseMatrix o = jump_operator(ch.channel, n_dim);
    gen.jump_dag.push_back(o.adjoint());
    gen.anti.push_back(0.5 * gen.jump_dag.back() * o);
    gen.jumps.emplace_back(ch.rate, std::move(o));
  }

  const DenseMatrix rho = to_dense(s);
  const DenseMatrix k1 = gen(rho);
  const DenseMatrix k2 = gen(rho + 0.5 * dt * k1);
  const DenseMatrix k3 = gen(rho + 0.5 * dt * k2);
  const DenseMatrix k4 = gen(rho + dt * k3);
  DenseMatrix next = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  next = 0.5 * (next + next.adjoint()).eval();

  LindbladStep out;
  out.leakage = (next - symmetry_project(next)).cwiseAbs().maxCoeff();
  out.state = from_dense(symmetry_project(next));
  out.trace_change = out.state.trace() - s.trace();
  // Truncated a^dag annihilates the top level; the untruncated one would move
  // population N * p_top out of the ladder per unit rate and time.
  const double top = s.a.back() + s.b.back();
  out.edge_flux = gain_rate * static_cast<double>(n_dim) * top * dt;
  return out;
}

SmallTime small_time(const EvolutionSpec& spec) {
  spec.check();
  if (!(spec.lambda > 0.0) || !(spec.m > 0.0)) {
    throw DomainError("small_time needs lambda > 0 and m > 0");
  }
  SmallTime out;
  out.T = scaled_time(spec);
  const SymmetricState s = evolve_resonant(spec);
  for (std::size_t n = 1; n < s.qudit_dim(); ++n) {
    out.y_taylor.push_back(std::sqrt(static_cast<double>(n)) * out.T);
    out.y_exact.push_back(std::abs(s.c[n - 1]) / std::sqrt(s.b[n - 1] * s.b[n]));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < out.y_exact.size(); ++i) {
    worst = std::max(worst, std::abs(out.y_exact[i] - out.y_taylor[i]));
  }
  out.remainder = out.T > 0.0 ? worst / (out.T * out.T * out.T) : 0.0;
  return out;
}

namespace {

constexpr Eigen::Index kFock = 4;

DenseMatrix lowest_eigenvectors(const DenseMatrix& d, Eigen::Index k, double* next_eig) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (d + d.adjoint()));
  if (es.info() != Eigen::Success) throw InvalidStateError("eigensolver failed");
  *next_eig = es.eigenvalues()(k);
  return es.eigenvectors().leftCols(k);
}

DenseMatrix columns(const std::vector<DenseVector>& vs) {
  DenseMatrix m(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vs[j];
  return m;
}

double max_angle(const DenseMatrix& a, const DenseMatrix& b) {
  const auto angles = principal_angles(orthonormalize(a), orthonormalize(b));
  return angles.empty() ? 0.0 : *std::max_element(angles.begin(), angles.end());
}

}  // namespace

GenerationCertificate certify_generation(const EvolutionSpec& spec, const GenerationOptions& options) {
  spec.check();
  if (spec.ncut != kFock) throw DomainError("certify_generation works on four Fock levels (ncut = 4)");
  if (!(spec.lambda > 0.0) || !(spec.m > 0.0)) throw DomainError("certify_generation needs lambda > 0 and m > 0");
  GenerationCertificate cert;
  cert.T = scaled_time(spec);
  if (!(cert.T > 0.0)) throw DomainError("certify_generation needs T > 0");
  if (cert.T > options.max_T) {
    throw DomainError("T = " + std::to_string(cert.T) + " outside the small-time regime");
  }
  const double t = cert.T;
  const std::array<double, 3> y{t, std::sqrt(2.0) * t, std::sqrt(3.0) * t};
  cert.tau = tau_dense(make_tau({y[0], y[1], y[2]}));

  cert.ef = unique_separable_vector(y, 0.0);
  cert.ef.f /= y[2];
  const DenseVector ef = cert.ef.tensor();
  cert.weight = 27.0 / 43.0 * t * t;
  cert.tau1 = cert.tau - cert.weight * ef * ef.adjoint();
  const DenseMatrix tau1_pt = partial_transpose(cert.tau1);
  cert.reconstruction_error = (cert.tau1 + cert.weight * ef * ef.adjoint() - cert.tau).cwiseAbs().maxCoeff();

  cert.tau1_min_eig = eig_hermitian(cert.tau1).values.front();
  cert.tau1_pt_min_eig = eig_hermitian(tau1_pt).values.front();

  const std::vector<double> z{std::sqrt(6.0) / t, 2.0 * std::sqrt(2.0) / t, std::sqrt(3.0) / t, std::sqrt(3.0) / t};
  cert.zeta = DenseVector::Zero(2 * kFock);
  for (Eigen::Index n = 0; n < kFock; ++n) cert.zeta(n) = z[static_cast<std::size_t>(n)];
  cert.zeta(kFock + 0) = -std::sqrt(2.0);
  cert.zeta(kFock + 3) = 3.0;

  const AnalyticKernels k = analytic_kernels(y, false);
  const std::vector<DenseVector> k_tau1{k.tau.front(), cert.zeta};
  double gap = 0.0;
  double gap_pt = 0.0;
  const DenseMatrix num = lowest_eigenvectors(cert.tau1, 2, &gap);
  const DenseMatrix num_pt = lowest_eigenvectors(tau1_pt, 3, &gap_pt);
  cert.kernel_angle = max_angle(columns(k_tau1), num);
  cert.kernel_pt_angle = max_angle(columns(k.tau_pt), num_pt);
  for (const auto& v : k_tau1) cert.kernel_residual = std::max(cert.kernel_residual, (cert.tau1 * v).norm() / v.norm());
  for (const auto& v : k.tau_pt) cert.kernel_residual = std::max(cert.kernel_residual, (tau1_pt * v).norm() / v.norm());

  cert.zeta_min_overlap = std::numeric_limits<double>::infinity();
  for (int j = 0; j < options.theta_samples; ++j) {
    ProductVector pv = unique_separable_vector(y, 2.0 * std::numbers::pi * j / options.theta_samples);
    pv.f /= y[2];
    cert.zeta_min_overlap = std::min(cert.zeta_min_overlap, std::abs(cert.zeta.dot(pv.tensor())));
  }
  cert.pole_overlap = std::abs(cert.zeta(kFock));

  const double psd_tol = -1e-12;
  std::vector<std::string> failures;
  if (cert.tau1_min_eig < psd_tol) failures.emplace_back("tau1 not PSD");
  if (cert.tau1_pt_min_eig < psd_tol) failures.emplace_back("tau1 not PPT");
  if (cert.kernel_angle > options.angle_tol) failures.emplace_back("K(tau1) differs from span(chi3, zeta)");
  if (cert.kernel_pt_angle > options.angle_tol) failures.emplace_back("K(tau1^Gamma) differs from span(phi)");
  if (!(gap > 0.0) || !(gap_pt > 0.0)) failures.emplace_back("kernel larger than expected");
  if (cert.reconstruction_error > options.recon_tol) failures.emplace_back("reconstruction mismatch");
  if (!(cert.zeta_min_overlap > 1e-9) || !(cert.pole_overlap > 1e-9)) failures.emplace_back("zeta overlap vanishes");

  cert.ok = failures.empty();
  if (cert.ok) {
    cert.tau1_verdict = CertVerdict::bound_entangled_edge;
    cert.tau_verdict = CertVerdict::bound_entangled;
  } else {
    for (const auto& f : failures) cert.note += (cert.note.empty() ? "" : "; ") + f;
  }
  return cert;
}

const char* to_string(Region r) noexcept {
  switch (r) {
    case Region::region_i: return "REGION_I";
    case Region::region_ii: return "REGION_II";
    case Region::region_iii_candidate: return "REGION_III_CANDIDATE";
  }
  return "UNKNOWN";
}

RegionResult classify_region(double lambda, double m, double g, double t_max, int steps, int ncut) {
  if (!(t_max > 0.0) || steps < 1) throw DomainError("classify_region needs t_max > 0 and steps >= 1");
  RegionResult out;
  out.horizon = t_max;
  EvolutionSpec spec;
  spec.lambda = lambda;
  spec.m = m;
  spec.g = g;
  spec.ncut = ncut;
  for (int k = 1; k <= steps; ++k) {
    spec.t = t_max * k / steps;
    if (negativity(evolve_resonant(spec)) > kDetectTol) {
      if (k == 1) {
        out.region = Region::region_i;
      } else {
        out.region = Region::region_ii;
        out.t_bar = spec.t;
      }
      return out;
    }
  }
  return out;
}

}  // namespace jcbound
