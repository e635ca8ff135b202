#pragma once

#include "qdm/qunet.hpp"

namespace qdm {

// A built QUNET plus its pooling behaviour. bridge_reset = k resets the k
// earliest-pooled qubits to |0> at the bottleneck (projective reset with
// renormalization); k = 0 is the fully unitary network.
struct QunetNetwork {
  Circuit circuit;
  QunetDescriptor desc;
  int bridge_reset = 0;

  std::size_t param_count() const { return circuit.param_count; }
  // Qubits reset at the bridge, in pooling order.
  std::vector<int> reset_qubits() const;
};

QunetNetwork make_network(int n_qubits, int bridge_reset);
QunetNetwork make_network(int n_qubits, int bridge_reset,
                          const BlockTemplate& disentangler,
                          const BlockTemplate& isometry);

struct NetworkRun {
  QubitState bridge;   // normalized state after the down path and resets
  QubitState output;   // final normalized state
  double kept_weight;  // squared norm surviving the bridge projection
};

// Runs the network with the given parameters bound into it.
NetworkRun run_network(const QunetNetwork& net, const ParamVector& params,
                       const QubitState& input);

// Projects the listed qubits onto |0> in place; returns the surviving
// squared norm (state left unnormalized).
double project_zero_inplace(std::vector<cdouble>& amps, int n_qubits,
                            const std::vector<int>& qubits);

}  // namespace qdm
