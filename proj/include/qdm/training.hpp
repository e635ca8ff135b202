#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdm/checkpoint.hpp"
#include "qdm/dataset.hpp"
#include "qdm/diffusion.hpp"
#include "qdm/network.hpp"
#include "qdm/rng.hpp"

namespace qdm {

enum class LossKind { DistMAE, StateInfidelity, AmplitudeL2 };
enum class GradMethod { Adjoint, ParamShift, FiniteDiff };
enum class TrainMode { EndToEnd, Stepwise };

const char* loss_name(LossKind kind);
const char* grad_name(GradMethod method);
const char* mode_name(TrainMode mode);
std::optional<LossKind> loss_from_name(const std::string& name);
std::optional<GradMethod> grad_from_name(const std::string& name);
std::optional<TrainMode> mode_from_name(const std::string& name);

// Loss target: a distribution for DistMAE, a state for the state losses.
struct Target {
  std::optional<ProbDist> dist;
  std::optional<QubitState> state;

  static Target of(ProbDist d) { return {std::move(d), std::nullopt}; }
  static Target of(QubitState s) { return {std::nullopt, std::move(s)}; }
};

double loss_eval(LossKind kind, const QunetNetwork& net, const ParamVector& params,
                 const QubitState& input, const Target& target);

// Exact reverse-mode gradient; two state-sized sweeps, checkpointed at the
// bridge projection.
std::vector<double> grad_adjoint(LossKind kind, const QunetNetwork& net,
                                 const ParamVector& params, const QubitState& input,
                                 const Target& target);

// Shift-rule gradient on the unnormalized bridge-projected outputs, chained
// through the renormalization by the quotient rule.
std::vector<double> grad_param_shift(LossKind kind, const QunetNetwork& net,
                                     const ParamVector& params,
                                     const QubitState& input, const Target& target);

std::vector<double> grad_finite_diff(LossKind kind, const QunetNetwork& net,
                                     const ParamVector& params,
                                     const QubitState& input, const Target& target,
                                     double h = 1e-5);

struct AdamState {
  std::size_t step = 0;
  std::vector<double> m;  // first moments
  std::vector<double> v;  // second moments
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState init(std::size_t n_params, double lr = 0.01);
};

void adam_step(AdamState& adam, ParamVector& params,
               const std::vector<double>& gradient);

// Training inputs the engine consumes: clean state plus its class target.
struct TrainSample {
  QubitState clean;
  ProbDist target_dist;
};

std::vector<TrainSample> make_train_samples(const Dataset& dataset);

struct TrainConfig {
  TrainMode mode = TrainMode::EndToEnd;
  LossKind loss = LossKind::DistMAE;
  GradMethod grad = GradMethod::Adjoint;
  int epochs = 150;
  int batch_size = 50;
  double learning_rate = 0.01;
  std::uint64_t seed = 1;
  NoiseSchedule schedule;
  // true: inputs are forward-process endpoints of each clean state;
  // false: inputs are fresh full-noise states.
  bool forward_inputs = true;
  int workers = 1;
  // half-width of the uniform parameter initialization interval
  double init_span = 0.1;
  // warm start: stage parameters to continue from (empty = fresh init)
  std::vector<ParamVector> resume_stages;
  // stop when the loss improves by less than this over 10 epochs;
  // negative disables early stopping
  double early_stop_tol = 1e-6;

  void validate() const;
};

// Trains the network stages and packages them with metadata. EndToEnd: one
// stage minimizing the batch-mean loss against each sample's own target.
// Stepwise: schedule.n_steps stages; stage for step i learns to map the
// step-i noisy state back to the step-(i-1) state.
Checkpoint train(const TrainConfig& config, const std::vector<TrainSample>& samples,
                 const QunetNetwork& net);

}  // namespace qdm
