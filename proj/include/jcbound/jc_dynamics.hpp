#pragma once

// Jaynes-Cummings dynamics of excitation-conserving atom-field states:
// closed-form resonant evolution from an unpolarized atom and a thermal
// field, block-exact unitary evolution with detuning, Lindblad integration,
// the small-time regime and the bound-entanglement generation certificate.
//
// H = w0 a^dag a + (w0 - delta) s^dag s - i g (s a^dag - s^dag a), s = |0><1|.

#include <optional>
#include <string>
#include <vector>

#include "jcbound/range_certifier.hpp"
#include "jcbound/state_core.hpp"

namespace jcbound {

/// paper: d rho/dt = i[rho, H] (the usual -i[H, rho]); reversed flips it.
enum class SignConvention { paper, reversed };

struct EvolutionSpec {
  double lambda = 0.5;  // excited-state probability of the atom
  double m = 1.0;       // mean photon number
  double g = 1.0;
  double omega0 = 0.0;
  double delta = 0.0;
  double t = 0.0;
  int ncut = 4;
  SignConvention sign = SignConvention::paper;

  void check() const;  // throws DomainError
};

struct ThermalWeights {
  std::vector<double> p;  // p_n, n < ncut
  double mass = 0.0;      // sum of p
};

ThermalWeights thermal_weights(double m, int ncut);

/// (1 - lambda)|0><0| + lambda|1><1| times the truncated thermal state.
SymmetricState initial_state(const EvolutionSpec& spec);

struct EvolutionTerms {
  std::vector<double> f;            // f_n, n = 0..ncut
  std::vector<double> alpha_minus;  // alpha_n^-
  std::vector<double> alpha_plus;   // alpha_n^+
  std::vector<double> beta;         // beta_n
  double T = 0.0;  // NaN when lambda = 0 or m = 0
};

/// Needs m > 0 (f_n diverges at m = 0).
EvolutionTerms evolution_terms(const EvolutionSpec& spec);

/// Closed-form resonant state: a_n = f_n alpha_n^-, b_n = f_{n+1} alpha_{n+1}^+,
/// c_n = |f_n beta_n|, evaluated through thermal weights so that m = 0 and
/// lambda = 0 are exact.  b_{ncut-1} keeps its f_{ncut} term, so the state is
/// not normalized.  Throws DomainError for delta != 0.
SymmetricState evolve_resonant(const EvolutionSpec& spec);

/// Conjugation by exp(-iHt) restricted to the ladder of s, one closed-form
/// 2x2 exponential per excitation sector.  spec.ncut is ignored.
SymmetricState evolve_unitary(const SymmetricState& s, const EvolutionSpec& spec);

/// Dense truncated Hamiltonian on 2N levels.
DenseMatrix jc_hamiltonian(std::size_t qudit_dim, const EvolutionSpec& spec);

enum class Channel { photon_loss, photon_gain, photon_dephasing, atom_decay, atom_pump, atom_dephasing };

const char* to_string(Channel c) noexcept;
std::optional<Channel> channel_from_string(const std::string& name);

struct LindbladSpec {
  Channel channel = Channel::photon_loss;
  double rate = 0.0;
};

/// Jump operator of a channel on the truncated 2N space.
DenseMatrix jump_operator(Channel c, std::size_t qudit_dim);

struct LindbladStep {
  SymmetricState state;
  double leakage = 0.0;       // max |off-pattern entry| before projection
  double trace_change = 0.0;  // trace after - trace before
  double edge_flux = 0.0;     // photon-gain probability pushed past the top level during dt
};

/// One classical RK4 step of the master equation.
LindbladStep lindblad_step(const SymmetricState& s, const std::vector<LindbladSpec>& channels,
                           const EvolutionSpec& h, double dt);

struct SmallTime {
  double T = 0.0;
  std::vector<double> y_taylor;  // sqrt(n) T
  std::vector<double> y_exact;   // filtered resonant state
  double remainder = 0.0;        // max_n |y_exact - y_taylor| / T^3
};

/// Throws DomainError for lambda = 0 or m = 0.
SmallTime small_time(const EvolutionSpec& spec);

struct GenerationOptions {
  double max_T = 0.2;
  double angle_tol = 1e-6;
  double recon_tol = 1e-12;
  int theta_samples = 32;
};

struct GenerationCertificate {
  bool ok = false;
  double T = 0.0;
  double weight = 0.0;  // 27/43 T^2 on |ef><ef| with ef normalized as below
  ProductVector ef;     // e = (1, 1/y3), f = (y1 y2/y3, y2, y3, y3)/y3
  DenseMatrix tau;
  DenseMatrix tau1;
  DenseVector zeta;
  double tau1_min_eig = 0.0;
  double tau1_pt_min_eig = 0.0;
  double kernel_angle = 0.0;     // K(tau1) vs span(chi_3, zeta)
  double kernel_pt_angle = 0.0;  // K(tau1^Gamma) vs span(phi_1..3)
  double kernel_residual = 0.0;  // max |tau1 v| over the analytic kernel vectors
  double reconstruction_error = 0.0;
  double zeta_min_overlap = 0.0;  // min over theta of |<zeta|ef>_theta|
  double pole_overlap = 0.0;      // |<zeta|1,0>|
  CertVerdict tau1_verdict = CertVerdict::inconclusive;
  CertVerdict tau_verdict = CertVerdict::inconclusive;
  std::string note;
};

/// Taylor-regime tau with y_n = sqrt(n) T on four Fock levels, split as
/// tau1 + w|ef><ef|.  Throws DomainError outside the regime.
GenerationCertificate certify_generation(const EvolutionSpec& spec, const GenerationOptions& options = {});

enum class Region { region_i, region_ii, region_iii_candidate };

const char* to_string(Region r) noexcept;

struct RegionResult {
  Region region = Region::region_iii_candidate;
  std::optional<double> t_bar;  // first NPT time for region II
  double horizon = 0.0;
};

RegionResult classify_region(double lambda, double m, double g, double t_max, int steps, int ncut = 16);

}  // namespace jcbound
