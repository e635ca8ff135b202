#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qdm/checkpoint.hpp"
#include "qdm/rng.hpp"
#include "qdm/state.hpp"

namespace qdm {

inline constexpr double kPi = 3.14159265358979323846;

// Linear-in-step Gaussian angle schedule: std(i) = (i/n_steps) * scale.
struct NoiseSchedule {
  int n_steps = 16;
  double scale = kPi / 3.0;

  double stddev(int step) const;
  static NoiseSchedule defaults_for(int n_qubits);
};

// Per-qubit (x, y, z) rotation angles of one forward step.
using StepAngles = std::vector<std::array<double, 3>>;

struct ForwardTrace {
  QubitState clean;
  std::vector<QubitState> states;   // states[0] = clean
  std::vector<StepAngles> angles;   // angles[j] produced states[j+1]
};

StepAngles sample_step_angles(const NoiseSchedule& schedule, int step, int n_qubits,
                              Rng& rng);

// Applies, per qubit in ascending order, the unitary Rx(ax)·Ry(ay)·Rz(az).
QubitState forward_step(const QubitState& state, const StepAngles& angles);

ForwardTrace forward_noise(const QubitState& clean, const NoiseSchedule& schedule,
                           int upto_step, Rng& rng);

enum class PhaseMode { RandomUniform, Zero };

// Equal-magnitude state 2^(-n/2) * sum_k e^{i phi_k} |k>.
QubitState sample_full_noise_state(int n_qubits, Rng& rng,
                                   PhaseMode mode = PhaseMode::RandomUniform);

struct GenerationResult {
  QubitState final;
  std::vector<QubitState> intermediates;  // output of every applied stage
  QubitState first_bridge;                // bottleneck snapshot of stage one
};

// Binds each stored stage into the network and applies them in order.
GenerationResult generate(const Checkpoint& checkpoint, const QubitState& initial);

}  // namespace qdm
