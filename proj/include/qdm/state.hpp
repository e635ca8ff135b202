#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qdm {

using cdouble = std::complex<double>;

// Probability distribution over the 2^n computational basis states.
struct ProbDist {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t k) const { return probs[k]; }
};

// Dense normalized state vector over 2^n basis states.
//
// Bit convention is big-endian: qubit 0 is the leftmost bit of the ket
// label, so |10000000> on 8 qubits sits at index 128.
class QubitState {
 public:
  QubitState(int n_qubits, std::vector<cdouble> amplitudes);

  // |0...0>
  static QubitState zero(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<cdouble>& amplitudes() const { return amps_; }
  std::vector<cdouble>& amplitudes() { return amps_; }

  double norm_sq() const;

 private:
  int n_qubits_;
  std::vector<cdouble> amps_;
};

// Index weight of a qubit under the big-endian convention.
inline std::size_t qubit_weight(int n_qubits, int qubit) {
  return std::size_t{1} << (n_qubits - 1 - qubit);
}

// Applies a 2x2 unitary on the target qubit.
QubitState apply_1q(const QubitState& state, const cdouble gate[2][2], int target);

// Applies a 4x4 unitary on the ordered qubit pair (first, second), where
// basis order of the 4x4 matrix is |first second> in {00,01,10,11}.
QubitState apply_2q(const QubitState& state, const cdouble gate[4][4], int first,
                    int second);

// In-place kernels used by the circuit runner.
void apply_1q_inplace(std::vector<cdouble>& amps, int n_qubits,
                      const cdouble gate[2][2], int target);
void apply_2q_inplace(std::vector<cdouble>& amps, int n_qubits,
                      const cdouble gate[4][4], int first, int second);

ProbDist probabilities(const QubitState& state);

// |<a|b>|^2
double fidelity(const QubitState& a, const QubitState& b);

std::complex<double> inner(const QubitState& a, const QubitState& b);

}  // namespace qdm
