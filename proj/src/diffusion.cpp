#include "qdm/diffusion.hpp"

#include <cmath>
#include <stdexcept>

#include "qdm/circuit.hpp"

namespace qdm {

double NoiseSchedule::stddev(int step) const {
  if (step < 1 || step > n_steps) {
    throw std::out_of_range("NoiseSchedule: step out of range");
  }
  return (static_cast<double>(step) / n_steps) * scale;
}

NoiseSchedule NoiseSchedule::defaults_for(int n_qubits) {
  NoiseSchedule s;
  s.n_steps = n_qubits >= 16 ? 32 : 16;
  return s;
}

StepAngles sample_step_angles(const NoiseSchedule& schedule, int step, int n_qubits,
                              Rng& rng) {
  const double sd = schedule.stddev(step);
  StepAngles angles(n_qubits);
  for (int q = 0; q < n_qubits; ++q) {
    for (int axis = 0; axis < 3; ++axis) angles[q][axis] = rng.normal(sd);
  }
  return angles;
}

QubitState forward_step(const QubitState& state, const StepAngles& angles) {
  if (angles.size() != static_cast<std::size_t>(state.n_qubits())) {
    throw std::invalid_argument("forward_step: angle tensor shape mismatch");
  }
  QubitState out = state;
  auto& amps = out.amplitudes();
  cdouble m[2][2];
  for (int q = 0; q < state.n_qubits(); ++q) {
    gate_matrix_1q(GateKind::Rz, angles[q][2], m);
    apply_1q_inplace(amps, out.n_qubits(), m, q);
    gate_matrix_1q(GateKind::Ry, angles[q][1], m);
    apply_1q_inplace(amps, out.n_qubits(), m, q);
    gate_matrix_1q(GateKind::Rx, angles[q][0], m);
    apply_1q_inplace(amps, out.n_qubits(), m, q);
  }
  return out;
}

ForwardTrace forward_noise(const QubitState& clean, const NoiseSchedule& schedule,
                           int upto_step, Rng& rng) {
  if (upto_step < 0 || upto_step > schedule.n_steps) {
    throw std::out_of_range("forward_noise: step out of range");
  }
  ForwardTrace trace{clean, {clean}, {}};
  for (int i = 1; i <= upto_step; ++i) {
    trace.angles.push_back(sample_step_angles(schedule, i, clean.n_qubits(), rng));
    trace.states.push_back(forward_step(trace.states.back(), trace.angles.back()));
  }
  return trace;
}

QubitState sample_full_noise_state(int n_qubits, Rng& rng, PhaseMode mode) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const double mag = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<cdouble> amps(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    if (mode == PhaseMode::Zero) {
      amps[k] = cdouble{mag, 0.0};
    } else {
      const double phi = rng.uniform(0.0, 2.0 * kPi);
      amps[k] = cdouble{mag * std::cos(phi), mag * std::sin(phi)};
    }
  }
  return QubitState(n_qubits, std::move(amps));
}

GenerationResult generate(const Checkpoint& checkpoint, const QubitState& initial) {
  checkpoint.validate();
  if (initial.n_qubits() != checkpoint.n_qubits) {
    throw std::invalid_argument("generate: state does not match checkpoint topology");
  }
  const QunetNetwork net = checkpoint.build_network();
  GenerationResult result{initial, {}, initial};
  for (std::size_t s = 0; s < checkpoint.stages.size(); ++s) {
    NetworkRun run = run_network(net, checkpoint.stages[s], result.final);
    if (s == 0) result.first_bridge = run.bridge;
    result.final = std::move(run.output);
    result.intermediates.push_back(result.final);
  }
  return result;
}

}  // namespace qdm
