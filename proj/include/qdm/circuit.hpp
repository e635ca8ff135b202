#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qdm/state.hpp"

namespace qdm {

enum class GateKind { Rx, Ry, Rz, Rxx, Ryy, Rzz, CNOT, H, X };

// 1 for rotations, 0 for fixed gates
int param_arity(GateKind kind);
// 1 or 2 qubits
int qubit_arity(GateKind kind);

const char* gate_name(GateKind kind);
std::optional<GateKind> gate_from_name(const std::string& name);

// Parameter of a gate: either a bound angle or a slot into a ParamVector.
struct GateParam {
  enum class Tag { None, Bound, Slot } tag = Tag::None;
  double angle = 0.0;   // valid when Bound
  std::size_t slot = 0; // valid when Slot

  static GateParam none() { return {}; }
  static GateParam bound(double a) { return {Tag::Bound, a, 0}; }
  static GateParam slotted(std::size_t s) { return {Tag::Slot, 0.0, s}; }
};

struct GateInstance {
  GateKind kind;
  int q0 = 0;
  int q1 = 0;  // unused for single-qubit gates
  GateParam param;
};

struct ParamVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

// Ordered parameterized gate list over a fixed qubit register.
struct Circuit {
  int n_qubits = 0;
  std::vector<GateInstance> gates;
  std::size_t param_count = 0;

  bool fully_bound() const;
};

// Convenience builders (validate qubit/slot bookkeeping).
void add_gate(Circuit& c, GateKind kind, int q0);
void add_gate(Circuit& c, GateKind kind, int q0, int q1);
void add_bound(Circuit& c, GateKind kind, int q0, double angle);
void add_bound(Circuit& c, GateKind kind, int q0, int q1, double angle);
void add_slot(Circuit& c, GateKind kind, int q0);            // next dense slot
void add_slot(Circuit& c, GateKind kind, int q0, int q1);

// Fills 2x2 / 4x4 matrices for a gate at a given angle. Conventions:
// Ra(t) = exp(-i t a/2), Raa(t) = exp(-i t (a⊗a)/2), CNOT = controlled-X
// with q0 as control.
void gate_matrix_1q(GateKind kind, double angle, cdouble out[2][2]);
void gate_matrix_2q(GateKind kind, double angle, cdouble out[4][4]);
// Derivative of the gate matrix w.r.t. its angle.
void gate_matrix_1q_deriv(GateKind kind, double angle, cdouble out[2][2]);
void gate_matrix_2q_deriv(GateKind kind, double angle, cdouble out[4][4]);

// Replaces every Slot(i) with Bound(params[i]).
Circuit bind(const Circuit& circuit, const ParamVector& params);

// Applies the fully bound gate list in order.
QubitState run(const Circuit& circuit, const QubitState& input);

// Applies conjugate-transposed gates in reverse order.
QubitState run_adjoint(const Circuit& circuit, const QubitState& input);

// Concatenation (a then b); slot indices of b re-based by a.param_count.
Circuit compose(const Circuit& a, const Circuit& b);

// Single-gate application helpers used by the runner and gradient code.
void apply_gate_inplace(std::vector<cdouble>& amps, int n_qubits,
                        const GateInstance& g);
void apply_gate_adjoint_inplace(std::vector<cdouble>& amps, int n_qubits,
                                const GateInstance& g);
void apply_gate_deriv_inplace(std::vector<cdouble>& amps, int n_qubits,
                              const GateInstance& g);

}  // namespace qdm
