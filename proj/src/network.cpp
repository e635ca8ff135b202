#include "qdm/network.hpp"

#include <cmath>
#include <stdexcept>

namespace qdm {

std::vector<int> QunetNetwork::reset_qubits() const {
  if (bridge_reset < 0 ||
      bridge_reset > static_cast<int>(desc.pooled_qubits.size())) {
    throw std::logic_error("bridge_reset out of range");
  }
  return {desc.pooled_qubits.begin(), desc.pooled_qubits.begin() + bridge_reset};
}

QunetNetwork make_network(int n_qubits, int bridge_reset,
                          const BlockTemplate& disentangler,
                          const BlockTemplate& isometry) {
  auto [circuit, desc] = build_qunet(n_qubits, disentangler, isometry);
  QunetNetwork net{std::move(circuit), std::move(desc), bridge_reset};
  net.reset_qubits();  // range check
  return net;
}

QunetNetwork make_network(int n_qubits, int bridge_reset) {
  auto [dis, iso] = default_templates();
  return make_network(n_qubits, bridge_reset, dis, iso);
}

double project_zero_inplace(std::vector<cdouble>& amps, int n_qubits,
                            const std::vector<int>& qubits) {
  std::size_t mask = 0;
  for (int q : qubits) mask |= qubit_weight(n_qubits, q);
  double kept = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & mask) != 0) {
      amps[i] = cdouble{0.0, 0.0};
    } else {
      kept += std::norm(amps[i]);
    }
  }
  return kept;
}

NetworkRun run_network(const QunetNetwork& net, const ParamVector& params,
                       const QubitState& input) {
  if (input.n_qubits() != net.circuit.n_qubits) {
    throw std::invalid_argument("run_network: qubit count mismatch");
  }
  const Circuit bound = bind(net.circuit, params);
  QubitState state = input;
  auto& amps = state.amplitudes();
  for (std::size_t i = 0; i < net.desc.bridge_gate_index; ++i) {
    apply_gate_inplace(amps, state.n_qubits(), bound.gates[i]);
  }
  double kept = 1.0;
  if (net.bridge_reset > 0) {
    kept = project_zero_inplace(amps, state.n_qubits(), net.reset_qubits());
    if (kept < 1e-30) {
      throw std::runtime_error("run_network: bridge projection annihilated the state");
    }
    const double inv = 1.0 / std::sqrt(kept);
    for (cdouble& a : amps) a *= inv;
  }
  QubitState bridge = state;
  for (std::size_t i = net.desc.bridge_gate_index; i < bound.gates.size(); ++i) {
    apply_gate_inplace(amps, state.n_qubits(), bound.gates[i]);
  }
  return {std::move(bridge), std::move(state), kept};
}

}  // namespace qdm
