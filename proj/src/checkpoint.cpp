#include "qdm/checkpoint.hpp"

#include <stdexcept>

namespace qdm {

QunetNetwork Checkpoint::build_network() const {
  return make_network(n_qubits, bridge_reset, disentangler_template,
                      isometry_template);
}

void Checkpoint::validate() const {
  if (stages.empty()) {
    throw std::invalid_argument("checkpoint: no stages");
  }
  const QunetNetwork net = build_network();
  for (const ParamVector& stage : stages) {
    if (stage.size() != net.param_count()) {
      throw std::invalid_argument("checkpoint: stage length != network parameter count");
    }
  }
}

}  // namespace qdm
