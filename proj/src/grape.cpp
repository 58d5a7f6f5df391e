#include "dfs/grape.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dfs/logical.hpp"
#include "dfs/parallel.hpp"

namespace dfs {

Objective Objective::logical_gate(const Mat& target_l) {
  if (target_l.rows() != 4 || target_l.cols() != 4)
    throw InvalidInput("logical_gate objective: target must be 4x4");
  if (!is_unitary(target_l, 1e-10)) throw InvalidInput("logical_gate objective: target not unitary");
  const Mat& e = logical_basis().basis;
  return isometry(e, e * target_l);
}

Objective Objective::full_gate(const Mat& target) {
  if (target.rows() != target.cols()) throw InvalidInput("full_gate objective: target not square");
  if (!is_unitary(target, 1e-10)) throw InvalidInput("full_gate objective: target not unitary");
  return isometry(Mat::Identity(target.rows(), target.cols()), target);
}

Objective Objective::isometry(const Mat& input, const Mat& output) {
  if (input.rows() != output.rows() || input.cols() != output.cols() || input.cols() == 0)
    throw InvalidInput("isometry objective: input and output shapes differ");
  const Mat id = Mat::Identity(input.cols(), input.cols());
  if (max_abs(input.adjoint() * input - id) > 1e-10 || max_abs(output.adjoint() * output - id) > 1e-10)
    throw InvalidInput("isometry objective: columns must be orthonormal");
  Objective o;
  o.kind_ = Kind::Gate;
  o.input_ = input;
  o.output_ = output;
  const double d = static_cast<double>(input.cols());
  o.norm_ = d * d;
  return o;
}

Objective Objective::logical_state_transfer(const Mat& rho_in_l, const Mat& rho_target_l) {
  if (rho_in_l.rows() != 4 || rho_in_l.cols() != 4 || rho_target_l.rows() != 4 ||
      rho_target_l.cols() != 4)
    throw InvalidInput("state transfer objective: logical operators must be 4x4");
  if (!is_hermitian(rho_in_l) || !is_hermitian(rho_target_l))
    throw InvalidInput("state transfer objective: operators must be Hermitian");
  Objective o;
  o.kind_ = Kind::StateTransfer;
  o.input_ = logical_basis().basis;
  o.rho_in_ = rho_in_l;
  o.rho_target_ = rho_target_l;
  o.norm_ = (rho_target_l * rho_target_l).trace().real();
  if (!(o.norm_ > 0.0)) throw InvalidInput("state transfer objective: zero target");
  return o;
}

double Objective::value(const Mat& u) const {
  if (kind_ == Kind::Gate) {
    const cplx g = (output_.adjoint() * u * input_).trace();
    return std::norm(g) / norm_;
  }
  const Mat b = input_.adjoint() * u * input_;
  return (rho_target_ * b * rho_in_ * b.adjoint()).trace().real() / norm_;
}

Mat Objective::cotangent(const Mat& u) const {
  if (kind_ == Kind::Gate) {
    const cplx g = (output_.adjoint() * u * input_).trace();
    return (2.0 * std::conj(g) / norm_) * (input_ * output_.adjoint());
  }
  const Mat b = input_.adjoint() * u * input_;
  return (2.0 / norm_) * (input_ * rho_in_ * b.adjoint() * rho_target_ * input_.adjoint());
}

void GrapeConfig::validate() const {
  if (n_steps == 0) throw InvalidInput("grape: n_steps must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("grape: dt must be positive");
  if (!(tol > 0.0)) throw InvalidInput("grape: tol must be positive");
  if (!(amp_max > 0.0)) throw InvalidInput("grape: amp_max must be positive");
  if (!(step_size > 0.0)) throw InvalidInput("grape: step_size must be positive");
  if (!(target_fidelity > 0.0 && target_fidelity <= 1.0))
    throw InvalidInput("grape: target_fidelity must lie in (0, 1]");
}

namespace {

// Divided differences of x -> exp(-i x dt) over all eigenvalue pairs.
// Close pairs use the sinc form, which stays accurate at degeneracy.
void exp_divided_differences(const RVec& lambda, double dt, Mat& out) {
  const Eigen::Index n = lambda.size();
  Vec phase(n);
  for (Eigen::Index p = 0; p < n; ++p) phase(p) = std::polar(1.0, -lambda(p) * dt);
  for (Eigen::Index p = 0; p < n; ++p) {
    out(p, p) = cplx{0.0, -dt} * phase(p);
    for (Eigen::Index q = p + 1; q < n; ++q) {
      const double gap = lambda(p) - lambda(q);
      const double half = 0.5 * gap * dt;
      cplx v;
      if (std::abs(half) < 1e-3) {
        const double h2 = half * half;
        const double sinc = 1.0 - h2 / 6.0 * (1.0 - h2 / 20.0);
        v = cplx{0.0, -dt} * std::polar(1.0, -0.5 * (lambda(p) + lambda(q)) * dt) * sinc;
      } else {
        v = (phase(p) - phase(q)) / gap;
      }
      out(p, q) = v;
      out(q, p) = v;
    }
  }
}

}  // namespace

ValueGradient grape_gradient(const Pulse& pulse, const MemberModel& model, const Objective& obj) {
  const std::size_t n_steps = pulse.n_steps();
  const auto dim = static_cast<Eigen::Index>(model.dim());
  if (obj.full_dim() != model.dim()) throw InvalidInput("grape_gradient: objective dimension mismatch");

  std::vector<StepSpectrum> steps;
  steps.reserve(n_steps);
  // before[k] = U_{k-1} ... U_1, i.e. everything applied before step k.
  std::vector<Mat> before;
  before.reserve(n_steps + 1);
  before.push_back(Mat::Identity(dim, dim));
  for (const auto& a : pulse.amps) {
    steps.push_back(step_spectrum(model.h_int + a[0] * model.h_x + a[1] * model.h_y, pulse.dt));
    before.push_back(steps.back().propagator * before.back());
  }
  const Mat& total = before.back();

  ValueGradient out;
  out.value = obj.value(total);
  out.gradient = RMat::Zero(static_cast<Eigen::Index>(n_steps), 2);

  // after = C U_N ... U_{k+1}, built backwards.
  Mat after = obj.cotangent(total);
  Mat g(dim, dim);
  for (std::size_t k = n_steps; k-- > 0;) {
    const StepSpectrum& s = steps[k];
    exp_divided_differences(s.values, pulse.dt, g);
    // dF = Re Tr(M dU_k) with M = before_k * after_k and
    // dU_k = V (G o V^dag dH V) V^dag, so dF = Re Tr(B dH) with
    // B = V (G o (V^dag M V)^T)^T V^dag.
    const Mat m_eig = s.vectors.adjoint() * (before[k] * after) * s.vectors;
    const Mat b = s.vectors * m_eig.cwiseProduct(g.transpose()) * s.vectors.adjoint();
    out.gradient(static_cast<Eigen::Index>(k), 0) = b.transpose().cwiseProduct(model.h_x).sum().real();
    out.gradient(static_cast<Eigen::Index>(k), 1) = b.transpose().cwiseProduct(model.h_y).sum().real();
    after = after * s.propagator;
  }
  return out;
}

ValueGradient grape_gradient(const Pulse& pulse, const EnsembleMember& member, const Objective& obj) {
  return grape_gradient(pulse, MemberModel(member), obj);
}

ValueGradient grape_gradient(const Pulse& pulse, const EnsembleMember& member, const Mat& target_l) {
  return grape_gradient(pulse, member, Objective::logical_gate(target_l));
}

RMat fd_gradient(const Pulse& pulse, const EnsembleMember& member, const Objective& obj, double h) {
  if (!(h > 0.0)) throw InvalidInput("fd_gradient: h must be positive");
  const MemberModel model(member);
  RMat grad(static_cast<Eigen::Index>(pulse.n_steps()), 2);
  Pulse work = pulse;
  for (std::size_t k = 0; k < pulse.n_steps(); ++k) {
    for (int c = 0; c < 2; ++c) {
      const double base = pulse.amps[k][c];
      work.amps[k][c] = base + h;
      const double up = obj.value(pulse_propagator(work, model));
      work.amps[k][c] = base - h;
      const double down = obj.value(pulse_propagator(work, model));
      work.amps[k][c] = base;
      grad(static_cast<Eigen::Index>(k), c) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

RMat fd_gradient(const Pulse& pulse, const EnsembleMember& member, const Mat& target_l, double h) {
  return fd_gradient(pulse, member, Objective::logical_gate(target_l), h);
}

EnsembleModel::EnsembleModel(const Ensemble& ens) {
  ens.validate();
  for (const auto& m : ens.members) {
    models_.emplace_back(m);
    weights_.push_back(m.weight);
  }
}

double EnsembleModel::value(const Pulse& pulse, const Objective& obj) const {
  std::vector<double> f(models_.size());
  parallel_for(models_.size(), [&](std::size_t m) { f[m] = obj.value(pulse_propagator(pulse, models_[m])); });
  double total = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m) total += weights_[m] * f[m];
  return total;
}

ValueGradient EnsembleModel::value_gradient(const Pulse& pulse, const Objective& obj) const {
  std::vector<ValueGradient> parts(models_.size());
  parallel_for(models_.size(), [&](std::size_t m) { parts[m] = grape_gradient(pulse, models_[m], obj); });
  ValueGradient out;
  out.gradient = RMat::Zero(static_cast<Eigen::Index>(pulse.n_steps()), 2);
  for (std::size_t m = 0; m < parts.size(); ++m) {
    out.value += weights_[m] * parts[m].value;
    out.gradient += weights_[m] * parts[m].gradient;
  }
  return out;
}

double ensemble_value(const Pulse& pulse, const Ensemble& ens, const Objective& obj) {
  return EnsembleModel(ens).value(pulse, obj);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::TargetReached:
      return "target_reached";
    case Termination::Converged:
      return "converged";
    case Termination::LineSearchFailed:
      return "line_search_failed";
    case Termination::ZeroGradient:
      return "zero_gradient";
    case Termination::MaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

Pulse random_initial_pulse(const GrapeConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  Pulse p = Pulse::zeros(cfg.n_steps, cfg.dt);
  for (auto& a : p.amps)
    for (double& v : a) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      v = 0.1 * cfg.amp_max * (2.0 * u - 1.0);
    }
  return p;
}

namespace {

Pulse clipped(Pulse p, double amp_max) {
  for (auto& a : p.amps)
    for (double& v : a) v = std::clamp(v, -amp_max, amp_max);
  return p;
}

}  // namespace

OptimizeResult optimize(const GrapeConfig& cfg, const Ensemble& ens, const Objective& obj,
                        const Pulse& init) {
  cfg.validate();
  if (init.n_steps() != cfg.n_steps || init.dt != cfg.dt)
    throw InvalidInput("optimize: initial pulse does not match the configured grid");
  const EnsembleModel model(ens);

  OptimizeResult result;
  result.pulse = clipped(init, cfg.amp_max);
  ValueGradient current = model.value_gradient(result.pulse, obj);
  auto& trace = result.trace;
  trace.fidelity.push_back(current.value);
  trace.gradient_norm.push_back(current.gradient.cwiseAbs().maxCoeff());
  trace.step.push_back(0.0);

  if (current.value < cfg.target_fidelity && cfg.amp_max * static_cast<double>(cfg.n_steps) * cfg.dt < 0.25)
    throw InvalidInput("optimize: pulse grid cannot reach a quarter nutation turn (amp_max * n_steps * dt < 0.25)");

  double alpha = cfg.step_size * cfg.amp_max;
  trace.reason = Termination::MaxIterations;
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    if (current.value >= cfg.target_fidelity) {
      trace.reason = Termination::TargetReached;
      break;
    }
    const double gmax = current.gradient.cwiseAbs().maxCoeff();
    if (!(gmax > 0.0)) {
      trace.reason = Termination::ZeroGradient;
      break;
    }
    bool accepted = false;
    Pulse trial;
    double trial_value = 0.0;
    for (int halving = 0; halving <= 20; ++halving) {
      trial = result.pulse;
      for (std::size_t k = 0; k < trial.n_steps(); ++k)
        for (int c = 0; c < 2; ++c)
          trial.amps[k][c] += alpha / gmax * current.gradient(static_cast<Eigen::Index>(k), c);
      trial = clipped(std::move(trial), cfg.amp_max);
      trial_value = model.value(trial, obj);
      if (trial_value > current.value) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      trace.reason = Termination::LineSearchFailed;
      break;
    }
    const double gain = trial_value - current.value;
    result.pulse = std::move(trial);
    current = model.value_gradient(result.pulse, obj);
    trace.fidelity.push_back(current.value);
    trace.gradient_norm.push_back(current.gradient.cwiseAbs().maxCoeff());
    trace.step.push_back(alpha);
    if (gain < cfg.tol) {
      trace.reason = Termination::Converged;
      break;
    }
    alpha = std::min(2.0 * alpha, cfg.amp_max);
  }
  if (trace.reason == Termination::MaxIterations && current.value >= cfg.target_fidelity)
    trace.reason = Termination::TargetReached;
  return result;
}

OptimizeResult optimize(const GrapeConfig& cfg, const Ensemble& ens, const Objective& obj) {
  return optimize(cfg, ens, obj, random_initial_pulse(cfg));
}

}  // namespace dfs
