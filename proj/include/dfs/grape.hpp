#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dfs/dynamics.hpp"
#include "dfs/types.hpp"

namespace dfs {

/// Goodness of a propagator U, with the cotangent needed for gradients.
///
/// Gate objectives score |Tr(W^dag U E)|^2 / d^2 where E (n x d) spans the
/// input subspace and W (n x d) is the wanted image of E. Taking W = E T
/// gives the logical subspace fidelity with target T; out-of-subspace
/// amplitude shrinks the trace, so leakage is penalized automatically.
///
/// State-transfer objectives score Re Tr(rho_t u rho_in u^dag) / Tr(rho_t^2)
/// with u = E^dag U E.
class Objective {
 public:
  static Objective logical_gate(const Mat& target_l);
  static Objective full_gate(const Mat& target);
  static Objective isometry(const Mat& input, const Mat& output);
  static Objective logical_state_transfer(const Mat& rho_in_l, const Mat& rho_target_l);

  double value(const Mat& u) const;
  /// C such that dF = Re Tr(C dU) at U.
  Mat cotangent(const Mat& u) const;

  std::size_t full_dim() const { return static_cast<std::size_t>(input_.rows()); }

 private:
  enum class Kind { Gate, StateTransfer };
  Kind kind_ = Kind::Gate;
  Mat input_;
  Mat output_;
  Mat rho_in_;
  Mat rho_target_;
  double norm_ = 1.0;
};

struct GrapeConfig {
  std::size_t n_steps = 150;
  double dt = 1e-5;
  std::size_t max_iters = 2000;
  double step_size = 0.05;  // first trial step as a fraction of amp_max
  double tol = 1e-10;
  double amp_max = kDefaultAmpMaxHz;
  std::uint64_t seed = 42;
  double target_fidelity = 0.995;

  void validate() const;
};

struct ValueGradient {
  double value = 0.0;
  RMat gradient;  // n_steps x 2, dF/d(ux_k), dF/d(uy_k) in 1/Hz
};

/// Exact gradient of the objective for one member from forward and backward
/// propagator products and the divided-difference derivative of each step
/// exponential.
ValueGradient grape_gradient(const Pulse& pulse, const MemberModel& model, const Objective& obj);
ValueGradient grape_gradient(const Pulse& pulse, const EnsembleMember& member, const Objective& obj);
ValueGradient grape_gradient(const Pulse& pulse, const EnsembleMember& member, const Mat& target_l);

/// Central differences with step h (Hz). Test oracle.
RMat fd_gradient(const Pulse& pulse, const EnsembleMember& member, const Objective& obj, double h);
RMat fd_gradient(const Pulse& pulse, const EnsembleMember& member, const Mat& target_l, double h);

/// Member models plus weights, built once per optimization.
class EnsembleModel {
 public:
  explicit EnsembleModel(const Ensemble& ens);
  double value(const Pulse& pulse, const Objective& obj) const;
  ValueGradient value_gradient(const Pulse& pulse, const Objective& obj) const;
  std::size_t size() const { return models_.size(); }

 private:
  std::vector<MemberModel> models_;
  std::vector<double> weights_;
};

double ensemble_value(const Pulse& pulse, const Ensemble& ens, const Objective& obj);

enum class Termination { TargetReached, Converged, LineSearchFailed, ZeroGradient, MaxIterations };
std::string to_string(Termination t);

struct OptimizationTrace {
  std::vector<double> fidelity;       // entry 0 is the initial pulse
  std::vector<double> gradient_norm;  // max-norm of the ensemble gradient
  std::vector<double> step;           // accepted max amplitude change (Hz)
  Termination reason = Termination::MaxIterations;
  std::size_t iterations() const { return fidelity.empty() ? 0 : fidelity.size() - 1; }
};

struct OptimizeResult {
  Pulse pulse;
  OptimizationTrace trace;
  double fidelity() const { return trace.fidelity.empty() ? 0.0 : trace.fidelity.back(); }
};

/// Seeded amplitudes uniform in +/- 10% of amp_max.
Pulse random_initial_pulse(const GrapeConfig& cfg);

/// Steepest ascent with backtracking line search (up to 20 halvings, step
/// doubled after each accepted move). Amplitudes are clipped per channel to
/// amp_max. Stops when the target is reached, an accepted step improves by
/// less than tol, the line search fails, or max_iters is exhausted.
OptimizeResult optimize(const GrapeConfig& cfg, const Ensemble& ens, const Objective& obj,
                        const Pulse& init);
OptimizeResult optimize(const GrapeConfig& cfg, const Ensemble& ens, const Objective& obj);

}  // namespace dfs
