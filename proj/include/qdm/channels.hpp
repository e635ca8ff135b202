#pragma once

#include <optional>
#include <vector>

#include "qdm/rng.hpp"
#include "qdm/state.hpp"

namespace qdm {

enum class ChannelKind { EpsilonI, EpsilonII, EpsilonIII };

// Test-noise environment. Angles are drawn from Uniform[0, eta*pi] unless
// fixed_theta pins them (the depolarizing limit of EpsilonII).
struct ChannelSpec {
  ChannelKind kind = ChannelKind::EpsilonI;
  double eta = 0.25;
  double p = 0.75;                    // mixing weight, EpsilonII only
  std::vector<int> scope;             // empty = all qubits
  std::optional<double> fixed_theta;

  void validate(int n_qubits) const;
  std::vector<int> qubits(int n_qubits) const;
};

struct NoisyEnsemble {
  std::vector<QubitState> trajectories;
  ProbDist mean_dist;
  std::vector<double> std_error;  // per-entry standard error of the mean
};

// One unitary unraveling of the channel.
QubitState apply_channel_trajectory(const QubitState& state, const ChannelSpec& spec,
                                    Rng& rng);

NoisyEnsemble ensemble_dist(const QubitState& state, const ChannelSpec& spec,
                            int n_trajectories, Rng& rng);

// Exact density-matrix evaluation of the channel (n_qubits <= 3): discrete
// branches analytically, continuous angles by Gauss-Legendre quadrature.
ProbDist exact_channel_dist(const QubitState& state, const ChannelSpec& spec,
                            int quadrature_points = 256);

// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace qdm
