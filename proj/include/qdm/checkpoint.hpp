#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdm/network.hpp"

namespace qdm {

struct CheckpointMeta {
  std::string mode = "endtoend";
  std::string loss = "mae";
  std::string grad = "adjoint";
  int epochs = 0;
  int batch_size = 0;
  double learning_rate = 0.0;
  std::uint64_t seed = 0;
  int n_steps = 0;
  double noise_scale = 0.0;
  double final_loss = 0.0;
  std::vector<double> loss_curve;
};

// Trained parameters: one ParamVector per backward stage, applied in the
// serialized order, plus everything needed to rebuild the network.
struct Checkpoint {
  int format_version = 1;
  int n_qubits = 0;
  int bridge_reset = 0;
  BlockTemplate disentangler_template;
  BlockTemplate isometry_template;
  std::vector<ParamVector> stages;
  CheckpointMeta meta;

  QunetNetwork build_network() const;
  void validate() const;
};

}  // namespace qdm
