#include "qdm/training.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace qdm {

const char* loss_name(LossKind kind) {
  switch (kind) {
    case LossKind::DistMAE: return "mae";
    case LossKind::StateInfidelity: return "infidelity";
    case LossKind::AmplitudeL2: return "l2";
  }
  return "?";
}

const char* grad_name(GradMethod method) {
  switch (method) {
    case GradMethod::Adjoint: return "adjoint";
    case GradMethod::ParamShift: return "pshift";
    case GradMethod::FiniteDiff: return "fd";
  }
  return "?";
}

const char* mode_name(TrainMode mode) {
  return mode == TrainMode::EndToEnd ? "endtoend" : "stepwise";
}

std::optional<LossKind> loss_from_name(const std::string& name) {
  if (name == "mae") return LossKind::DistMAE;
  if (name == "infidelity") return LossKind::StateInfidelity;
  if (name == "l2") return LossKind::AmplitudeL2;
  return std::nullopt;
}

std::optional<GradMethod> grad_from_name(const std::string& name) {
  if (name == "adjoint") return GradMethod::Adjoint;
  if (name == "pshift") return GradMethod::ParamShift;
  if (name == "fd") return GradMethod::FiniteDiff;
  return std::nullopt;
}

std::optional<TrainMode> mode_from_name(const std::string& name) {
  if (name == "endtoend") return TrainMode::EndToEnd;
  if (name == "stepwise") return TrainMode::Stepwise;
  return std::nullopt;
}

namespace {

void check_target(LossKind kind, const QunetNetwork& net, const Target& target) {
  const std::size_t dim = std::size_t{1} << net.circuit.n_qubits;
  if (kind == LossKind::DistMAE) {
    if (!target.dist || target.dist->size() != dim) {
      throw std::invalid_argument("loss: DistMAE needs a matching ProbDist target");
    }
  } else {
    if (!target.state || target.state->dim() != dim) {
      throw std::invalid_argument("loss: state loss needs a matching state target");
    }
  }
}

double loss_of_output(LossKind kind, const QubitState& output, const Target& target) {
  const std::size_t dim = output.dim();
  switch (kind) {
    case LossKind::DistMAE: {
      const ProbDist p = probabilities(output);
      double sum = 0.0;
      for (std::size_t k = 0; k < dim; ++k) sum += std::abs(p[k] - (*target.dist)[k]);
      return sum / static_cast<double>(dim);
    }
    case LossKind::StateInfidelity:
      return 1.0 - fidelity(*target.state, output);
    case LossKind::AmplitudeL2: {
      double sum = 0.0;
      const auto& a = output.amplitudes();
      const auto& t = target.state->amplitudes();
      for (std::size_t k = 0; k < dim; ++k) sum += std::norm(a[k] - t[k]);
      return sum;
    }
  }
  return 0.0;
}

// Conjugate Wirtinger cotangent dL/d(output*) of the loss.
std::vector<cdouble> loss_cotangent(LossKind kind, const QubitState& output,
                                    const Target& target) {
  const std::size_t dim = output.dim();
  const auto& a = output.amplitudes();
  std::vector<cdouble> lambda(dim);
  switch (kind) {
    case LossKind::DistMAE: {
      const double inv_dim = 1.0 / static_cast<double>(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = std::norm(a[k]) - (*target.dist)[k];
        const double s = diff > 0.0 ? 1.0 : diff < 0.0 ? -1.0 : 0.0;
        lambda[k] = inv_dim * s * a[k];
      }
      break;
    }
    case LossKind::StateInfidelity: {
      const auto& t = target.state->amplitudes();
      const cdouble overlap = inner(*target.state, output);  // <t|a>
      for (std::size_t k = 0; k < dim; ++k) lambda[k] = -overlap * t[k];
      break;
    }
    case LossKind::AmplitudeL2: {
      const auto& t = target.state->amplitudes();
      for (std::size_t k = 0; k < dim; ++k) lambda[k] = a[k] - t[k];
      break;
    }
  }
  return lambda;
}

cdouble dot_conj(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  cdouble s{0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

}  // namespace

double loss_eval(LossKind kind, const QunetNetwork& net, const ParamVector& params,
                 const QubitState& input, const Target& target) {
  check_target(kind, net, target);
  return loss_of_output(kind, run_network(net, params, input).output, target);
}

std::vector<double> grad_adjoint(LossKind kind, const QunetNetwork& net,
                                 const ParamVector& params, const QubitState& input,
                                 const Target& target) {
  check_target(kind, net, target);
  const Circuit bound = bind(net.circuit, params);
  const int n = net.circuit.n_qubits;
  const std::size_t bridge = net.desc.bridge_gate_index;

  // Forward pass, checkpointing the state just before the bridge projection.
  QubitState state = input;
  auto& amps = state.amplitudes();
  for (std::size_t i = 0; i < bridge; ++i) apply_gate_inplace(amps, n, bound.gates[i]);
  const QubitState pre_bridge = state;
  double kept = 1.0;
  const std::vector<int> resets = net.reset_qubits();
  if (net.bridge_reset > 0) {
    kept = project_zero_inplace(amps, n, resets);
    if (kept < 1e-30) {
      throw std::runtime_error("grad_adjoint: bridge projection annihilated the state");
    }
    const double inv = 1.0 / std::sqrt(kept);
    for (cdouble& a : amps) a *= inv;
  }
  const QubitState bridge_state = state;
  for (std::size_t i = bridge; i < bound.gates.size(); ++i) {
    apply_gate_inplace(amps, n, bound.gates[i]);
  }

  std::vector<double> grad(params.size(), 0.0);
  std::vector<cdouble> lambda = loss_cotangent(kind, state, target);
  std::vector<cdouble> psi = state.amplitudes();
  std::vector<cdouble> tmp;

  const auto sweep = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = hi; i-- > lo;) {
      const GateInstance& g = bound.gates[i];
      apply_gate_adjoint_inplace(psi, n, g);  // psi = state before gate i
      const GateInstance& raw = net.circuit.gates[i];
      if (raw.param.tag == GateParam::Tag::Slot) {
        tmp = psi;
        apply_gate_deriv_inplace(tmp, n, g);
        grad[raw.param.slot] += 2.0 * dot_conj(lambda, tmp).real();
      }
      apply_gate_adjoint_inplace(lambda, n, g);
    }
  };

  sweep(bridge, bound.gates.size());
  if (net.bridge_reset > 0) {
    // Pull the cotangent through chi = P rho / sqrt(N): lambda_rho =
    // N^{-1/2} (P lambda - Re<lambda, chi> chi).
    const auto& chi = bridge_state.amplitudes();
    std::size_t mask = 0;
    for (int q : resets) mask |= qubit_weight(n, q);
    const double re_overlap = dot_conj(lambda, chi).real();
    const double inv_sqrt = 1.0 / std::sqrt(kept);
    for (std::size_t k = 0; k < lambda.size(); ++k) {
      const cdouble projected = (k & mask) != 0 ? cdouble{0.0, 0.0} : lambda[k];
      lambda[k] = inv_sqrt * (projected - re_overlap * chi[k]);
    }
    psi = pre_bridge.amplitudes();
  }
  sweep(0, bridge);
  return grad;
}

namespace {

// Unnormalized forward pass: down gates, bridge projection without
// renormalization, up gates. Returns the raw amplitudes.
std::vector<cdouble> raw_output(const QunetNetwork& net, const Circuit& slotted,
                                const ParamVector& params, const QubitState& input) {
  const Circuit bound = bind(slotted, params);
  const int n = slotted.n_qubits;
  std::vector<cdouble> amps = input.amplitudes();
  for (std::size_t i = 0; i < net.desc.bridge_gate_index; ++i) {
    apply_gate_inplace(amps, n, bound.gates[i]);
  }
  if (net.bridge_reset > 0) project_zero_inplace(amps, n, net.reset_qubits());
  for (std::size_t i = net.desc.bridge_gate_index; i < bound.gates.size(); ++i) {
    apply_gate_inplace(amps, n, bound.gates[i]);
  }
  return amps;
}

struct RawEval {
  std::vector<double> f;  // unnormalized probabilities
  double norm = 1.0;      // squared norm surviving the projection
  cdouble overlap{0.0, 0.0};  // <t|raw> (state targets only)
};

RawEval raw_eval(const QunetNetwork& net, const ParamVector& params,
                 const QubitState& input, const QubitState* target_state) {
  RawEval out;
  const std::vector<cdouble> amps = raw_output(net, net.circuit, params, input);
  out.f.resize(amps.size());
  double norm = 0.0;
  for (std::size_t k = 0; k < amps.size(); ++k) {
    out.f[k] = std::norm(amps[k]);
    norm += out.f[k];
  }
  out.norm = norm;
  if (target_state) {
    const auto& t = target_state->amplitudes();
    for (std::size_t k = 0; k < amps.size(); ++k) {
      out.overlap += std::conj(t[k]) * amps[k];
    }
  }
  return out;
}

ParamVector shifted(const ParamVector& params, std::size_t j, double delta) {
  ParamVector out = params;
  out.values[j] += delta;
  return out;
}

}  // namespace

std::vector<double> grad_param_shift(LossKind kind, const QunetNetwork& net,
                                     const ParamVector& params,
                                     const QubitState& input, const Target& target) {
  check_target(kind, net, target);
  const QubitState* tgt = target.state ? &*target.state : nullptr;
  const RawEval base = raw_eval(net, params, input, tgt);
  const double N = base.norm;
  if (N < 1e-30) {
    throw std::runtime_error("grad_param_shift: bridge projection annihilated the state");
  }
  const std::size_t dim = base.f.size();
  const double half_pi = kPi / 2.0;

  std::vector<double> grad(params.size(), 0.0);
  for (std::size_t j = 0; j < params.size(); ++j) {
    const RawEval plus = raw_eval(net, shifted(params, j, half_pi), input, tgt);
    const RawEval minus = raw_eval(net, shifted(params, j, -half_pi), input, tgt);
    const double dN = (plus.norm - minus.norm) / 2.0;
    switch (kind) {
      case LossKind::DistMAE: {
        double sum = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          const double p = base.f[k] / N;
          const double diff = p - (*target.dist)[k];
          const double s = diff > 0.0 ? 1.0 : diff < 0.0 ? -1.0 : 0.0;
          const double df = (plus.f[k] - minus.f[k]) / 2.0;
          sum += s * (df * N - base.f[k] * dN) / (N * N);
        }
        grad[j] = sum / static_cast<double>(dim);
        break;
      }
      case LossKind::StateInfidelity: {
        // L = 1 - F/N with F = |<t|raw>|^2
        const double F = std::norm(base.overlap);
        const double dF = (std::norm(plus.overlap) - std::norm(minus.overlap)) / 2.0;
        grad[j] = -(dF * N - F * dN) / (N * N);
        break;
      }
      case LossKind::AmplitudeL2: {
        // L = 2 - 2 Re<t|raw>/sqrt(N); the amplitude-linear part uses the
        // pi-shift rule g' = (g(+pi) - g(-pi))/4.
        const RawEval pp = raw_eval(net, shifted(params, j, kPi), input, tgt);
        const RawEval mm = raw_eval(net, shifted(params, j, -kPi), input, tgt);
        const double g = base.overlap.real();
        const double dg = (pp.overlap.real() - mm.overlap.real()) / 4.0;
        grad[j] = -2.0 * (dg / std::sqrt(N) - g * dN / (2.0 * N * std::sqrt(N)));
        break;
      }
    }
  }
  return grad;
}

std::vector<double> grad_finite_diff(LossKind kind, const QunetNetwork& net,
                                     const ParamVector& params,
                                     const QubitState& input, const Target& target,
                                     double h) {
  check_target(kind, net, target);
  std::vector<double> grad(params.size(), 0.0);
  for (std::size_t j = 0; j < params.size(); ++j) {
    const double lp = loss_eval(kind, net, shifted(params, j, h), input, target);
    const double lm = loss_eval(kind, net, shifted(params, j, -h), input, target);
    grad[j] = (lp - lm) / (2.0 * h);
  }
  return grad;
}

AdamState AdamState::init(std::size_t n_params, double lr) {
  AdamState s;
  s.m.assign(n_params, 0.0);
  s.v.assign(n_params, 0.0);
  s.lr = lr;
  return s;
}

void adam_step(AdamState& adam, ParamVector& params,
               const std::vector<double>& gradient) {
  if (adam.m.size() != params.size() || gradient.size() != params.size()) {
    throw std::invalid_argument("adam_step: length mismatch");
  }
  for (double g : gradient) {
    if (!std::isfinite(g)) throw std::runtime_error("adam_step: non-finite gradient");
  }
  adam.step += 1;
  const double bc1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.step));
  const double bc2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.step));
  for (std::size_t j = 0; j < params.size(); ++j) {
    adam.m[j] = adam.beta1 * adam.m[j] + (1.0 - adam.beta1) * gradient[j];
    adam.v[j] = adam.beta2 * adam.v[j] + (1.0 - adam.beta2) * gradient[j] * gradient[j];
    const double mhat = adam.m[j] / bc1;
    const double vhat = adam.v[j] / bc2;
    params.values[j] -= adam.lr * mhat / (std::sqrt(vhat) + adam.eps);
  }
}

std::vector<TrainSample> make_train_samples(const Dataset& dataset) {
  std::vector<TrainSample> out;
  out.reserve(dataset.samples.size());
  for (const SampleParams& p : dataset.samples) {
    out.push_back({class_state(p), target_dist(p)});
  }
  return out;
}

void TrainConfig::validate() const {
  if (epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("train: batch size must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("train: lr must be > 0");
  if (workers < 1) throw std::invalid_argument("train: workers must be >= 1");
  if (!(init_span >= 0.0))
    throw std::invalid_argument("train: init span must be >= 0");
  if (schedule.n_steps < 1) throw std::invalid_argument("train: n_steps must be >= 1");
}

namespace {

constexpr std::uint64_t kInitStream = 0x696e6974u;    // parameter init
constexpr std::uint64_t kNoiseStream = 0x6e6f6973u;   // per-sample inputs

std::vector<double> sample_gradient(GradMethod method, LossKind kind,
                                    const QunetNetwork& net, const ParamVector& params,
                                    const QubitState& input, const Target& target) {
  switch (method) {
    case GradMethod::Adjoint: return grad_adjoint(kind, net, params, input, target);
    case GradMethod::ParamShift:
      return grad_param_shift(kind, net, params, input, target);
    case GradMethod::FiniteDiff:
      return grad_finite_diff(kind, net, params, input, target);
  }
  return {};
}

struct StageResult {
  ParamVector params;
  std::vector<double> loss_curve;
};

// Trains one stage. input_of(sample_index, epoch) supplies the per-epoch
// noisy input and target for that sample.
template <typename InputFn>
StageResult train_stage(const TrainConfig& config, const QunetNetwork& net,
                        std::size_t n_samples, std::uint64_t stage_id,
                        InputFn input_of) {
  StageResult result;
  if (stage_id < config.resume_stages.size()) {
    result.params = config.resume_stages[stage_id];
    if (result.params.values.size() != net.param_count()) {
      throw std::invalid_argument("train: resume stage has wrong parameter count");
    }
  } else {
    Rng rng = Rng::stream(config.seed, {kInitStream, stage_id});
    result.params.values.resize(net.param_count());
    for (double& v : result.params.values)
      v = rng.uniform(-config.init_span, config.init_span);
  }
  AdamState adam = AdamState::init(net.param_count(), config.learning_rate);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (std::size_t batch_lo = 0; batch_lo < n_samples;
         batch_lo += config.batch_size) {
      const std::size_t batch_hi =
          std::min(n_samples, batch_lo + config.batch_size);
      const std::size_t batch_n = batch_hi - batch_lo;
      std::vector<std::vector<double>> grads(batch_n);
      std::vector<double> losses(batch_n, 0.0);

      const auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
          auto [input, target] = input_of(batch_lo + s, epoch);
          grads[s] = sample_gradient(config.grad, config.loss, net, result.params,
                                     input, target);
          losses[s] = loss_eval(config.loss, net, result.params, input, target);
        }
      };
      if (config.workers <= 1 || batch_n == 1) {
        worker(0, batch_n);
      } else {
        const std::size_t n_threads =
            std::min<std::size_t>(config.workers, batch_n);
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < n_threads; ++t) {
          const std::size_t begin = batch_n * t / n_threads;
          const std::size_t end = batch_n * (t + 1) / n_threads;
          threads.emplace_back(worker, begin, end);
        }
        for (std::thread& t : threads) t.join();
      }

      // Fixed-order reduction keeps results independent of worker count.
      std::vector<double> mean_grad(net.param_count(), 0.0);
      for (std::size_t s = 0; s < batch_n; ++s) {
        for (std::size_t j = 0; j < mean_grad.size(); ++j) {
          mean_grad[j] += grads[s][j];
        }
        epoch_loss += losses[s];
      }
      const double inv = 1.0 / static_cast<double>(batch_n);
      for (double& g : mean_grad) g *= inv;
      adam_step(adam, result.params, mean_grad);
    }
    result.loss_curve.push_back(epoch_loss / static_cast<double>(n_samples));

    const std::size_t e = result.loss_curve.size();
    if (config.early_stop_tol >= 0.0 && e > 10 &&
        result.loss_curve[e - 11] - result.loss_curve[e - 1] <
            config.early_stop_tol) {
      break;
    }
  }
  return result;
}

}  // namespace

Checkpoint train(const TrainConfig& config, const std::vector<TrainSample>& samples,
                 const QunetNetwork& net) {
  config.validate();
  if (samples.empty()) throw std::invalid_argument("train: empty dataset");
  if (!config.resume_stages.empty() && config.mode != TrainMode::EndToEnd) {
    throw std::invalid_argument("train: resume is only supported in endtoend mode");
  }
  for (const TrainSample& s : samples) {
    if (s.clean.n_qubits() != net.circuit.n_qubits) {
      throw std::invalid_argument("train: sample qubit count does not match network");
    }
  }

  Checkpoint ck;
  ck.n_qubits = net.circuit.n_qubits;
  ck.bridge_reset = net.bridge_reset;
  ck.disentangler_template = net.desc.disentangler_template;
  ck.isometry_template = net.desc.isometry_template;
  ck.meta.mode = mode_name(config.mode);
  ck.meta.loss = loss_name(config.loss);
  ck.meta.grad = grad_name(config.grad);
  ck.meta.epochs = config.epochs;
  ck.meta.batch_size = config.batch_size;
  ck.meta.learning_rate = config.learning_rate;
  ck.meta.seed = config.seed;
  ck.meta.n_steps = config.schedule.n_steps;
  ck.meta.noise_scale = config.schedule.scale;

  const int n = net.circuit.n_qubits;
  if (config.mode == TrainMode::EndToEnd) {
    const auto input_of = [&](std::size_t i, int epoch) {
      Rng rng = Rng::stream(config.seed,
                            {kNoiseStream, 0, static_cast<std::uint64_t>(epoch),
                             static_cast<std::uint64_t>(i)});
      QubitState input =
          config.forward_inputs
              ? forward_noise(samples[i].clean, config.schedule,
                              config.schedule.n_steps, rng)
                    .states.back()
              : sample_full_noise_state(n, rng);
      Target target = config.loss == LossKind::DistMAE
                          ? Target::of(samples[i].target_dist)
                          : Target::of(samples[i].clean);
      return std::pair<QubitState, Target>{std::move(input), std::move(target)};
    };
    StageResult stage = train_stage(config, net, samples.size(), 0, input_of);
    ck.stages.push_back(std::move(stage.params));
    ck.meta.loss_curve = std::move(stage.loss_curve);
  } else {
    // Stepwise: the stage trained for step i maps the step-i state back to
    // step i-1; generation applies stages from the noisiest step downward.
    for (int step = config.schedule.n_steps; step >= 1; --step) {
      const auto input_of = [&](std::size_t i, int epoch) {
        Rng rng = Rng::stream(config.seed,
                              {kNoiseStream, static_cast<std::uint64_t>(step),
                               static_cast<std::uint64_t>(epoch),
                               static_cast<std::uint64_t>(i)});
        ForwardTrace trace = forward_noise(samples[i].clean, config.schedule, step, rng);
        QubitState input = trace.states[step];
        QubitState prev = trace.states[step - 1];
        Target target = config.loss == LossKind::DistMAE
                            ? Target::of(probabilities(prev))
                            : Target::of(std::move(prev));
        return std::pair<QubitState, Target>{std::move(input), std::move(target)};
      };
      StageResult stage = train_stage(config, net, samples.size(),
                                      static_cast<std::uint64_t>(step), input_of);
      ck.stages.push_back(std::move(stage.params));
      for (double v : stage.loss_curve) ck.meta.loss_curve.push_back(v);
    }
  }
  ck.meta.final_loss =
      ck.meta.loss_curve.empty() ? 0.0 : ck.meta.loss_curve.back();
  ck.validate();
  return ck;
}

}  // namespace qdm
