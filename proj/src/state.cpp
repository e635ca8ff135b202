#include "qdm/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qdm {

QubitState::QubitState(int n_qubits, std::vector<cdouble> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits < 1) {
    throw std::invalid_argument("QubitState: n_qubits must be >= 1");
  }
  if (amps_.size() != (std::size_t{1} << n_qubits)) {
    throw std::invalid_argument("QubitState: amplitude count must be 2^n_qubits");
  }
}

QubitState QubitState::zero(int n_qubits) {
  std::vector<cdouble> amps(std::size_t{1} << n_qubits, cdouble{0.0, 0.0});
  amps[0] = cdouble{1.0, 0.0};
  return QubitState(n_qubits, std::move(amps));
}

double QubitState::norm_sq() const {
  double s = 0.0;
  for (const cdouble& a : amps_) s += std::norm(a);
  return s;
}

void apply_1q_inplace(std::vector<cdouble>& amps, int n_qubits,
                      const cdouble gate[2][2], int target) {
  if (target < 0 || target >= n_qubits) {
    throw std::out_of_range("apply_1q: target qubit out of range");
  }
  const std::size_t w = qubit_weight(n_qubits, target);
  const std::size_t dim = amps.size();
  for (std::size_t base = 0; base < dim; base += 2 * w) {
    for (std::size_t i = base; i < base + w; ++i) {
      const cdouble a0 = amps[i];
      const cdouble a1 = amps[i + w];
      amps[i] = gate[0][0] * a0 + gate[0][1] * a1;
      amps[i + w] = gate[1][0] * a0 + gate[1][1] * a1;
    }
  }
}

void apply_2q_inplace(std::vector<cdouble>& amps, int n_qubits,
                      const cdouble gate[4][4], int first, int second) {
  if (first < 0 || first >= n_qubits || second < 0 || second >= n_qubits) {
    throw std::out_of_range("apply_2q: qubit index out of range");
  }
  if (first == second) {
    throw std::invalid_argument("apply_2q: qubit indices must be distinct");
  }
  const std::size_t w1 = qubit_weight(n_qubits, first);
  const std::size_t w2 = qubit_weight(n_qubits, second);
  const std::size_t dim = amps.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & w1) != 0 || (i & w2) != 0) continue;
    const std::size_t i00 = i;
    const std::size_t i01 = i | w2;
    const std::size_t i10 = i | w1;
    const std::size_t i11 = i | w1 | w2;
    const cdouble a00 = amps[i00];
    const cdouble a01 = amps[i01];
    const cdouble a10 = amps[i10];
    const cdouble a11 = amps[i11];
    amps[i00] = gate[0][0] * a00 + gate[0][1] * a01 + gate[0][2] * a10 + gate[0][3] * a11;
    amps[i01] = gate[1][0] * a00 + gate[1][1] * a01 + gate[1][2] * a10 + gate[1][3] * a11;
    amps[i10] = gate[2][0] * a00 + gate[2][1] * a01 + gate[2][2] * a10 + gate[2][3] * a11;
    amps[i11] = gate[3][0] * a00 + gate[3][1] * a01 + gate[3][2] * a10 + gate[3][3] * a11;
  }
}

QubitState apply_1q(const QubitState& state, const cdouble gate[2][2], int target) {
  QubitState out = state;
  apply_1q_inplace(out.amplitudes(), out.n_qubits(), gate, target);
  return out;
}

QubitState apply_2q(const QubitState& state, const cdouble gate[4][4], int first,
                    int second) {
  QubitState out = state;
  apply_2q_inplace(out.amplitudes(), out.n_qubits(), gate, first, second);
  return out;
}

ProbDist probabilities(const QubitState& state) {
  ProbDist d;
  d.probs.reserve(state.dim());
  for (const cdouble& a : state.amplitudes()) d.probs.push_back(std::norm(a));
  return d;
}

std::complex<double> inner(const QubitState& a, const QubitState& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("inner: qubit counts differ");
  }
  cdouble s{0.0, 0.0};
  const auto& av = a.amplitudes();
  const auto& bv = b.amplitudes();
  for (std::size_t k = 0; k < av.size(); ++k) s += std::conj(av[k]) * bv[k];
  return s;
}

double fidelity(const QubitState& a, const QubitState& b) {
  return std::norm(inner(a, b));
}

}  // namespace qdm
