#include "qdm/channels.hpp"

#include <cmath>
#include <stdexcept>

#include "qdm/circuit.hpp"
#include "qdm/diffusion.hpp"

namespace qdm {

void ChannelSpec::validate(int n_qubits) const {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("channel: eta must be in (0, 1]");
  }
  if (kind == ChannelKind::EpsilonII && !(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("channel: p must be in [0, 1]");
  }
  for (int q : scope) {
    if (q < 0 || q >= n_qubits) {
      throw std::invalid_argument("channel: scope qubit out of range");
    }
  }
}

std::vector<int> ChannelSpec::qubits(int n_qubits) const {
  if (!scope.empty()) return scope;
  std::vector<int> all(n_qubits);
  for (int q = 0; q < n_qubits; ++q) all[q] = q;
  return all;
}

namespace {

void rot_inplace(std::vector<cdouble>& amps, int n_qubits, GateKind kind,
                 double angle, int q) {
  cdouble m[2][2];
  gate_matrix_1q(kind, angle, m);
  apply_1q_inplace(amps, n_qubits, m, q);
}

}  // namespace

QubitState apply_channel_trajectory(const QubitState& state, const ChannelSpec& spec,
                                    Rng& rng) {
  spec.validate(state.n_qubits());
  QubitState out = state;
  auto& amps = out.amplitudes();
  const int n = out.n_qubits();
  for (int q : spec.qubits(n)) {
    switch (spec.kind) {
      case ChannelKind::EpsilonI: {
        const double tx = spec.fixed_theta ? *spec.fixed_theta
                                           : rng.uniform(0.0, spec.eta * kPi);
        const double ty = spec.fixed_theta ? *spec.fixed_theta
                                           : rng.uniform(0.0, spec.eta * kPi);
        rot_inplace(amps, n, GateKind::Rx, tx, q);
        rot_inplace(amps, n, GateKind::Ry, ty, q);
        break;
      }
      case ChannelKind::EpsilonII: {
        const double theta = spec.fixed_theta ? *spec.fixed_theta
                                              : rng.uniform(0.0, spec.eta * kPi);
        const double branch = rng.uniform();
        if (branch < 1.0 - spec.p) break;
        const double u = (branch - (1.0 - spec.p)) / spec.p;
        const GateKind axis = u < 1.0 / 3.0   ? GateKind::Rx
                              : u < 2.0 / 3.0 ? GateKind::Ry
                                              : GateKind::Rz;
        rot_inplace(amps, n, axis, theta, q);
        break;
      }
      case ChannelKind::EpsilonIII: {
        const double theta = spec.fixed_theta ? *spec.fixed_theta
                                              : rng.uniform(0.0, spec.eta * kPi);
        rot_inplace(amps, n, GateKind::Rz, theta, q);
        rot_inplace(amps, n, GateKind::Ry, theta, q);
        rot_inplace(amps, n, GateKind::Rx, theta, q);
        break;
      }
    }
  }
  return out;
}

NoisyEnsemble ensemble_dist(const QubitState& state, const ChannelSpec& spec,
                            int n_trajectories, Rng& rng) {
  if (n_trajectories < 1) {
    throw std::invalid_argument("ensemble_dist: need at least one trajectory");
  }
  NoisyEnsemble out;
  const std::size_t dim = state.dim();
  std::vector<double> sum(dim, 0.0), sum_sq(dim, 0.0);
  const bool keep = n_trajectories <= 1000;
  for (int t = 0; t < n_trajectories; ++t) {
    QubitState traj = apply_channel_trajectory(state, spec, rng);
    const ProbDist d = probabilities(traj);
    for (std::size_t k = 0; k < dim; ++k) {
      sum[k] += d.probs[k];
      sum_sq[k] += d.probs[k] * d.probs[k];
    }
    if (keep) out.trajectories.push_back(std::move(traj));
  }
  out.mean_dist.probs.resize(dim);
  out.std_error.resize(dim);
  const double m = n_trajectories;
  for (std::size_t k = 0; k < dim; ++k) {
    const double mean = sum[k] / m;
    out.mean_dist.probs[k] = mean;
    const double var = std::max(0.0, sum_sq[k] / m - mean * mean);
    out.std_error[k] = n_trajectories > 1 ? std::sqrt(var / (m - 1.0)) : 0.0;
  }
  return out;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev estimate.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = a + 0.5 * (b - a) * (1.0 - x);
    weights[i] = (b - a) / ((1.0 - x * x) * pp * pp);
  }
}

namespace {

// Dense density matrix, row-major dim x dim.
using Density = std::vector<cdouble>;

// rho <- U rho U^dagger with a single-qubit unitary on qubit q.
void conjugate_1q(Density& rho, int n_qubits, const cdouble u[2][2], int q) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t w = qubit_weight(n_qubits, q);
  // left multiply columns
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t r = 0; r < dim; ++r) {
      if ((r & w) != 0) continue;
      const cdouble a0 = rho[r * dim + c];
      const cdouble a1 = rho[(r | w) * dim + c];
      rho[r * dim + c] = u[0][0] * a0 + u[0][1] * a1;
      rho[(r | w) * dim + c] = u[1][0] * a0 + u[1][1] * a1;
    }
  }
  // right multiply rows by U^dagger
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if ((c & w) != 0) continue;
      const cdouble a0 = rho[r * dim + c];
      const cdouble a1 = rho[r * dim + (c | w)];
      rho[r * dim + c] = a0 * std::conj(u[0][0]) + a1 * std::conj(u[0][1]);
      rho[r * dim + (c | w)] = a0 * std::conj(u[1][0]) + a1 * std::conj(u[1][1]);
    }
  }
}

void axpy(Density& acc, const Density& x, double alpha) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += alpha * x[i];
}

// Averages U(theta) rho U(theta)^dagger over theta in [0, eta*pi] where
// U is built by `fill`.
template <typename Fill>
Density average_angle(const Density& rho, int n_qubits, int q, double eta,
                      std::optional<double> fixed_theta, int points, Fill fill) {
  cdouble u[2][2];
  if (fixed_theta) {
    Density out = rho;
    fill(*fixed_theta, u);
    conjugate_1q(out, n_qubits, u, q);
    return out;
  }
  std::vector<double> nodes, weights;
  gauss_legendre(points, 0.0, eta * kPi, nodes, weights);
  Density acc(rho.size(), cdouble{0.0, 0.0});
  const double norm = 1.0 / (eta * kPi);
  for (int i = 0; i < points; ++i) {
    Density tmp = rho;
    fill(nodes[i], u);
    conjugate_1q(tmp, n_qubits, u, q);
    axpy(acc, tmp, weights[i] * norm);
  }
  return acc;
}

void fill_rotation(GateKind kind, double theta, cdouble u[2][2]) {
  gate_matrix_1q(kind, theta, u);
}

void fill_xyz(double theta, cdouble u[2][2]) {
  // Rx(t) Ry(t) Rz(t)
  cdouble rx[2][2], ry[2][2], rz[2][2], tmp[2][2];
  gate_matrix_1q(GateKind::Rx, theta, rx);
  gate_matrix_1q(GateKind::Ry, theta, ry);
  gate_matrix_1q(GateKind::Rz, theta, rz);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      tmp[r][c] = ry[r][0] * rz[0][c] + ry[r][1] * rz[1][c];
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      u[r][c] = rx[r][0] * tmp[0][c] + rx[r][1] * tmp[1][c];
}

}  // namespace

ProbDist exact_channel_dist(const QubitState& state, const ChannelSpec& spec,
                            int quadrature_points) {
  spec.validate(state.n_qubits());
  const int n = state.n_qubits();
  if (n > 3) {
    throw std::invalid_argument("exact_channel_dist: oracle limited to n <= 3");
  }
  const std::size_t dim = state.dim();
  Density rho(dim * dim);
  const auto& amps = state.amplitudes();
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      rho[r * dim + c] = amps[r] * std::conj(amps[c]);

  for (int q : spec.qubits(n)) {
    switch (spec.kind) {
      case ChannelKind::EpsilonI:
        rho = average_angle(rho, n, q, spec.eta, spec.fixed_theta, quadrature_points,
                            [](double t, cdouble u[2][2]) { fill_rotation(GateKind::Rx, t, u); });
        rho = average_angle(rho, n, q, spec.eta, spec.fixed_theta, quadrature_points,
                            [](double t, cdouble u[2][2]) { fill_rotation(GateKind::Ry, t, u); });
        break;
      case ChannelKind::EpsilonII: {
        Density mixed(rho.size(), cdouble{0.0, 0.0});
        axpy(mixed, rho, 1.0 - spec.p);
        for (GateKind axis : {GateKind::Rx, GateKind::Ry, GateKind::Rz}) {
          Density part = average_angle(
              rho, n, q, spec.eta, spec.fixed_theta, quadrature_points,
              [axis](double t, cdouble u[2][2]) { fill_rotation(axis, t, u); });
          axpy(mixed, part, spec.p / 3.0);
        }
        rho = std::move(mixed);
        break;
      }
      case ChannelKind::EpsilonIII:
        rho = average_angle(rho, n, q, spec.eta, spec.fixed_theta, quadrature_points,
                            fill_xyz);
        break;
    }
  }
  ProbDist out;
  out.probs.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) out.probs[k] = rho[k * dim + k].real();
  return out;
}

}  // namespace qdm
