#include "dfs/dynamics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "dfs/logical.hpp"
#include "dfs/parallel.hpp"

namespace dfs {

double Pulse::max_amplitude() const {
  double m = 0.0;
  for (const auto& a : amps) m = std::max({m, std::abs(a[0]), std::abs(a[1])});
  return m;
}

void Pulse::validate(double amp_max_hz) const {
  if (amps.empty()) throw InvalidInput("pulse: at least one step required");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("pulse: dt must be positive");
  for (const auto& a : amps)
    if (!std::isfinite(a[0]) || !std::isfinite(a[1]))
      throw InvalidInput("pulse: non-finite amplitude");
  if (max_amplitude() > amp_max_hz)
    throw InvalidInput("pulse: amplitude exceeds amp_max (" + std::to_string(max_amplitude()) +
                       " > " + std::to_string(amp_max_hz) + " Hz)");
}

Pulse Pulse::zeros(std::size_t n_steps, double dt) { return constant(n_steps, dt, 0.0, 0.0); }

Pulse Pulse::constant(std::size_t n_steps, double dt, double ux, double uy) {
  Pulse p;
  p.dt = dt;
  p.amps.assign(n_steps, {ux, uy});
  return p;
}

Pulse Pulse::subdivided(std::size_t factor) const {
  if (factor == 0) throw InvalidInput("subdivided: factor must be positive");
  Pulse p;
  p.dt = dt / static_cast<double>(factor);
  p.amps.reserve(amps.size() * factor);
  for (const auto& a : amps)
    for (std::size_t k = 0; k < factor; ++k) p.amps.push_back(a);
  return p;
}

void Ensemble::validate() const {
  if (members.empty()) throw InvalidInput("ensemble: no members");
  double total = 0.0;
  for (const auto& m : members) {
    if (!(m.weight >= 0.0)) throw InvalidInput("ensemble: negative weight");
    if (!(m.eps > 0.0)) throw InvalidInput("ensemble: eps must be positive");
    total += m.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("ensemble: weights must sum to one");
}

Ensemble Ensemble::restricted(const std::vector<std::size_t>& spins) const {
  Ensemble out;
  out.seed = seed;
  for (const auto& m : members) out.members.push_back({m.system.subsystem(spins), m.eps, m.weight});
  return out;
}

Ensemble Ensemble::single(const SpinSystem& sys, double eps) {
  Ensemble e;
  e.members.push_back({sys, eps, 1.0});
  return e;
}

std::vector<PairCoupling> cnb_unknown_centers() {
  return {{1, 3, 116.0}, {1, 4, -64.0}, {2, 4, -170.0}};
}

namespace {

// 53-bit uniform in [0, 1) from the raw generator output; avoids the
// implementation-defined std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool same_member(const EnsembleMember& a, const EnsembleMember& b) {
  return a.eps == b.eps && a.system.nu == b.system.nu && a.system.d == b.system.d &&
         a.system.j == b.system.j;
}

}  // namespace

Ensemble make_ensemble(const SpinSystem& sys, const EnsembleSpec& spec) {
  sys.validate();
  if (spec.known_unc_hz < 0.0 || spec.unknown_unc_hz < 0.0)
    throw InvalidInput("make_ensemble: uncertainties must be non-negative");
  if (spec.n_members == 0) throw InvalidInput("make_ensemble: n_members must be positive");
  if (spec.eps_values.empty()) throw InvalidInput("make_ensemble: eps_values is empty");
  for (double e : spec.eps_values)
    if (!(e > 0.0)) throw InvalidInput("make_ensemble: eps values must be positive");

  const std::size_t n = sys.n_spins();
  SpinSystem nominal = sys;
  RMat unknown = RMat::Zero(n, n);
  for (const auto& c : spec.unknown_centers) {
    if (c.a < 1 || c.b < 1 || c.a > n || c.b > n || c.a == c.b)
      throw InvalidInput("make_ensemble: unknown center names an invalid spin pair");
    nominal.d(c.a - 1, c.b - 1) = nominal.d(c.b - 1, c.a - 1) = c.hz;
    unknown(c.a - 1, c.b - 1) = unknown(c.b - 1, c.a - 1) = 1.0;
  }

  std::vector<EnsembleMember> drawn;
  drawn.push_back({nominal, 1.0, 0.0});
  std::mt19937_64 rng(spec.seed);
  for (std::size_t m = 1; m < spec.n_members; ++m) {
    EnsembleMember member{nominal, spec.eps_values[(m - 1) % spec.eps_values.size()], 0.0};
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const double unc = unknown(a, b) != 0.0 ? spec.unknown_unc_hz : spec.known_unc_hz;
        const double delta = unc * (2.0 * unit_uniform(rng) - 1.0);
        member.system.d(a, b) += delta;
        member.system.d(b, a) = member.system.d(a, b);
      }
    }
    drawn.push_back(std::move(member));
  }

  Ensemble ens;
  ens.seed = spec.seed;
  const double w = 1.0 / static_cast<double>(drawn.size());
  for (auto& m : drawn) {
    auto it = std::find_if(ens.members.begin(), ens.members.end(),
                           [&](const EnsembleMember& e) { return same_member(e, m); });
    if (it != ens.members.end()) {
      it->weight += w;
    } else {
      m.weight = w;
      ens.members.push_back(std::move(m));
    }
  }
  // Renormalize so merged weights sum to one exactly.
  double total = 0.0;
  for (const auto& m : ens.members) total += m.weight;
  for (auto& m : ens.members) m.weight /= total;
  return ens;
}

MemberModel::MemberModel(const EnsembleMember& m)
    : h_int(internal_hamiltonian(m.system)),
      h_x(rf_hamiltonian(m.system.n_spins(), 1.0, 0.0, m.eps)),
      h_y(rf_hamiltonian(m.system.n_spins(), 0.0, 1.0, m.eps)) {}

StepSpectrum step_spectrum(const Mat& h_total, double dt) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h_total);
  if (es.info() != Eigen::Success) throw NumericalError("step_spectrum: eigensolver failed");
  StepSpectrum s;
  s.vectors = es.eigenvectors();
  s.values = es.eigenvalues();
  Vec phases(s.values.size());
  for (Eigen::Index k = 0; k < s.values.size(); ++k)
    phases(k) = std::polar(1.0, -s.values(k) * dt);
  s.propagator = s.vectors * phases.asDiagonal() * s.vectors.adjoint();
  return s;
}

Mat step_propagator(const Mat& h_total, double dt) {
  if (!is_hermitian(h_total, 1e-12))
    throw InvalidInput("step_propagator: generator is not Hermitian");
  return step_spectrum(h_total, dt).propagator;
}

Mat pulse_propagator(const Pulse& pulse, const MemberModel& model) {
  Mat u = Mat::Identity(model.dim(), model.dim());
  for (const auto& a : pulse.amps) {
    const Mat h = model.h_int + a[0] * model.h_x + a[1] * model.h_y;
    u = step_spectrum(h, pulse.dt).propagator * u;
  }
  return u;
}

Mat pulse_propagator(const Pulse& pulse, const EnsembleMember& member) {
  return pulse_propagator(pulse, MemberModel(member));
}

const GaussRule& gauss_hermite(int n_nodes) {
  if (n_nodes < 1 || n_nodes > 200) throw InvalidInput("gauss_hermite: node count out of range");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n_nodes);
  if (it != cache.end()) return it->second;

  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite
  // polynomials: off-diagonal sqrt(k).
  RMat jac = RMat::Zero(n_nodes, n_nodes);
  for (int k = 1; k < n_nodes; ++k) jac(k, k - 1) = jac(k - 1, k) = std::sqrt(double(k));
  Eigen::SelfAdjointEigenSolver<RMat> es(jac);
  GaussRule rule;
  double total = 0.0;
  for (int k = 0; k < n_nodes; ++k) {
    rule.nodes.push_back(es.eigenvalues()(k));
    const double v0 = es.eigenvectors()(0, k);
    rule.weights.push_back(v0 * v0);
    total += v0 * v0;
  }
  for (double& w : rule.weights) w /= total;
  return cache.emplace(n_nodes, std::move(rule)).first->second;
}

Mat collective_dephasing(const Mat& rho, double sigma_phi, int n_nodes) {
  if (!(sigma_phi >= 0.0)) throw InvalidInput("collective_dephasing: sigma_phi must be >= 0");
  if (rho.rows() != rho.cols() || rho.rows() < 2 || (rho.rows() & (rho.rows() - 1)) != 0)
    throw InvalidInput("collective_dephasing: expected a 2^n x 2^n matrix");
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < rho.rows()) ++n;
  if (sigma_phi == 0.0) return rho;

  const RVec fz = total_fz_diagonal(n);
  const GaussRule& rule = gauss_hermite(n_nodes);
  // F_z differences are integers in [-n, n]; tabulate one factor per difference.
  std::vector<cplx> factor(2 * n + 1, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < factor.size(); ++k) {
    const double delta = static_cast<double>(k) - static_cast<double>(n);
    for (std::size_t m = 0; m < rule.nodes.size(); ++m)
      factor[k] += rule.weights[m] * std::polar(1.0, -sigma_phi * rule.nodes[m] * delta);
  }
  factor[n] = 1.0;

  Mat out = rho;
  for (Eigen::Index a = 0; a < rho.rows(); ++a)
    for (Eigen::Index b = 0; b < rho.cols(); ++b) {
      const auto k = static_cast<std::size_t>(std::lround(fz(a) - fz(b)) + static_cast<long>(n));
      out(a, b) *= factor[k];
    }
  return out;
}

double ensemble_fidelity(const Pulse& pulse, const Ensemble& ens, const Mat& target_l) {
  ens.validate();
  std::vector<double> f(ens.members.size());
  parallel_for(ens.members.size(), [&](std::size_t m) {
    f[m] = logical_gate_fidelity(pulse_propagator(pulse, ens.members[m]), target_l);
  });
  double total = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m) total += ens.members[m].weight * f[m];
  return total;
}

}  // namespace dfs
