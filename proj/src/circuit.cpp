#include "qdm/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace qdm {

namespace {

constexpr cdouble kI{0.0, 1.0};

void zero4(cdouble out[4][4]) {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[r][c] = cdouble{0.0, 0.0};
}

void check_angle(double angle) {
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("gate angle must be finite");
  }
}

}  // namespace

int param_arity(GateKind kind) {
  switch (kind) {
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
    case GateKind::Rxx:
    case GateKind::Ryy:
    case GateKind::Rzz:
      return 1;
    default:
      return 0;
  }
}

int qubit_arity(GateKind kind) {
  switch (kind) {
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
    case GateKind::H:
    case GateKind::X:
      return 1;
    default:
      return 2;
  }
}

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::Rxx: return "rxx";
    case GateKind::Ryy: return "ryy";
    case GateKind::Rzz: return "rzz";
    case GateKind::CNOT: return "cnot";
    case GateKind::H: return "h";
    case GateKind::X: return "x";
  }
  return "?";
}

std::optional<GateKind> gate_from_name(const std::string& name) {
  if (name == "rx") return GateKind::Rx;
  if (name == "ry") return GateKind::Ry;
  if (name == "rz") return GateKind::Rz;
  if (name == "rxx") return GateKind::Rxx;
  if (name == "ryy") return GateKind::Ryy;
  if (name == "rzz") return GateKind::Rzz;
  if (name == "cnot") return GateKind::CNOT;
  if (name == "h") return GateKind::H;
  if (name == "x") return GateKind::X;
  return std::nullopt;
}

bool Circuit::fully_bound() const {
  for (const GateInstance& g : gates) {
    if (g.param.tag == GateParam::Tag::Slot) return false;
  }
  return true;
}

namespace {

void check_gate(const Circuit& c, GateKind kind, int q0, int q1, int nq_used) {
  if (qubit_arity(kind) != nq_used) {
    throw std::invalid_argument("gate qubit arity mismatch");
  }
  if (q0 < 0 || q0 >= c.n_qubits) throw std::out_of_range("gate qubit out of range");
  if (nq_used == 2) {
    if (q1 < 0 || q1 >= c.n_qubits) throw std::out_of_range("gate qubit out of range");
    if (q0 == q1) throw std::invalid_argument("gate qubits must be distinct");
  }
}

}  // namespace

void add_gate(Circuit& c, GateKind kind, int q0) {
  check_gate(c, kind, q0, 0, 1);
  if (param_arity(kind) != 0) throw std::invalid_argument("rotation gate needs a parameter");
  c.gates.push_back({kind, q0, 0, GateParam::none()});
}

void add_gate(Circuit& c, GateKind kind, int q0, int q1) {
  check_gate(c, kind, q0, q1, 2);
  if (param_arity(kind) != 0) throw std::invalid_argument("rotation gate needs a parameter");
  c.gates.push_back({kind, q0, q1, GateParam::none()});
}

void add_bound(Circuit& c, GateKind kind, int q0, double angle) {
  check_gate(c, kind, q0, 0, 1);
  check_angle(angle);
  if (param_arity(kind) != 1) throw std::invalid_argument("fixed gate takes no parameter");
  c.gates.push_back({kind, q0, 0, GateParam::bound(angle)});
}

void add_bound(Circuit& c, GateKind kind, int q0, int q1, double angle) {
  check_gate(c, kind, q0, q1, 2);
  check_angle(angle);
  if (param_arity(kind) != 1) throw std::invalid_argument("fixed gate takes no parameter");
  c.gates.push_back({kind, q0, q1, GateParam::bound(angle)});
}

void add_slot(Circuit& c, GateKind kind, int q0) {
  check_gate(c, kind, q0, 0, 1);
  if (param_arity(kind) != 1) throw std::invalid_argument("fixed gate takes no parameter");
  c.gates.push_back({kind, q0, 0, GateParam::slotted(c.param_count++)});
}

void add_slot(Circuit& c, GateKind kind, int q0, int q1) {
  check_gate(c, kind, q0, q1, 2);
  if (param_arity(kind) != 1) throw std::invalid_argument("fixed gate takes no parameter");
  c.gates.push_back({kind, q0, q1, GateParam::slotted(c.param_count++)});
}

void gate_matrix_1q(GateKind kind, double angle, cdouble out[2][2]) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  switch (kind) {
    case GateKind::Rx:
      out[0][0] = c;        out[0][1] = -kI * s;
      out[1][0] = -kI * s;  out[1][1] = c;
      return;
    case GateKind::Ry:
      out[0][0] = c;  out[0][1] = -s;
      out[1][0] = s;  out[1][1] = c;
      return;
    case GateKind::Rz:
      out[0][0] = cdouble{c, -s}; out[0][1] = 0.0;
      out[1][0] = 0.0;            out[1][1] = cdouble{c, s};
      return;
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      out[0][0] = r;  out[0][1] = r;
      out[1][0] = r;  out[1][1] = -r;
      return;
    }
    case GateKind::X:
      out[0][0] = 0.0; out[0][1] = 1.0;
      out[1][0] = 1.0; out[1][1] = 0.0;
      return;
    default:
      throw std::invalid_argument("gate_matrix_1q: not a single-qubit gate");
  }
}

void gate_matrix_2q(GateKind kind, double angle, cdouble out[4][4]) {
  zero4(out);
  const cdouble c{std::cos(angle / 2.0), 0.0};
  const cdouble ms = -kI * std::sin(angle / 2.0);
  switch (kind) {
    case GateKind::Rxx:
      // cos I - i sin (X⊗X)
      out[0][0] = c; out[1][1] = c; out[2][2] = c; out[3][3] = c;
      out[0][3] = ms; out[1][2] = ms; out[2][1] = ms; out[3][0] = ms;
      return;
    case GateKind::Ryy:
      // Y⊗Y has -1 at |00><11|,|11><00| and +1 at |01><10|,|10><01|
      out[0][0] = c; out[1][1] = c; out[2][2] = c; out[3][3] = c;
      out[0][3] = -ms; out[3][0] = -ms;
      out[1][2] = ms; out[2][1] = ms;
      return;
    case GateKind::Rzz: {
      const cdouble em{std::cos(angle / 2.0), -std::sin(angle / 2.0)};
      const cdouble ep{std::cos(angle / 2.0), std::sin(angle / 2.0)};
      out[0][0] = em; out[1][1] = ep; out[2][2] = ep; out[3][3] = em;
      return;
    }
    case GateKind::CNOT:
      out[0][0] = 1.0; out[1][1] = 1.0; out[2][3] = 1.0; out[3][2] = 1.0;
      return;
    default:
      throw std::invalid_argument("gate_matrix_2q: not a two-qubit gate");
  }
}

void gate_matrix_1q_deriv(GateKind kind, double angle, cdouble out[2][2]) {
  // d/dt exp(-i t P/2) = (-i/2) P exp(-i t P/2); written out directly.
  const double c = 0.5 * std::cos(angle / 2.0);
  const double s = 0.5 * std::sin(angle / 2.0);
  switch (kind) {
    case GateKind::Rx:
      out[0][0] = -s;       out[0][1] = -kI * c;
      out[1][0] = -kI * c;  out[1][1] = -s;
      return;
    case GateKind::Ry:
      out[0][0] = -s; out[0][1] = -c;
      out[1][0] = c;  out[1][1] = -s;
      return;
    case GateKind::Rz:
      out[0][0] = cdouble{-s, -c}; out[0][1] = 0.0;
      out[1][0] = 0.0;             out[1][1] = cdouble{-s, c};
      return;
    default:
      throw std::invalid_argument("gate_matrix_1q_deriv: not a rotation");
  }
}

void gate_matrix_2q_deriv(GateKind kind, double angle, cdouble out[4][4]) {
  zero4(out);
  const cdouble mc = -kI * (0.5 * std::cos(angle / 2.0));
  const double s = 0.5 * std::sin(angle / 2.0);
  switch (kind) {
    case GateKind::Rxx:
      out[0][0] = -s; out[1][1] = -s; out[2][2] = -s; out[3][3] = -s;
      out[0][3] = mc; out[1][2] = mc; out[2][1] = mc; out[3][0] = mc;
      return;
    case GateKind::Ryy:
      out[0][0] = -s; out[1][1] = -s; out[2][2] = -s; out[3][3] = -s;
      out[0][3] = -mc; out[3][0] = -mc;
      out[1][2] = mc; out[2][1] = mc;
      return;
    case GateKind::Rzz: {
      const cdouble dem{-s, -0.5 * std::cos(angle / 2.0)};
      const cdouble dep{-s, 0.5 * std::cos(angle / 2.0)};
      out[0][0] = dem; out[1][1] = dep; out[2][2] = dep; out[3][3] = dem;
      return;
    }
    default:
      throw std::invalid_argument("gate_matrix_2q_deriv: not a rotation");
  }
}

namespace {

double bound_angle(const GateInstance& g) {
  if (param_arity(g.kind) == 0) return 0.0;
  if (g.param.tag != GateParam::Tag::Bound) {
    throw std::logic_error("unbound parameter slot encountered");
  }
  return g.param.angle;
}

}  // namespace

void apply_gate_inplace(std::vector<cdouble>& amps, int n_qubits,
                        const GateInstance& g) {
  if (qubit_arity(g.kind) == 1) {
    cdouble m[2][2];
    gate_matrix_1q(g.kind, bound_angle(g), m);
    apply_1q_inplace(amps, n_qubits, m, g.q0);
  } else {
    cdouble m[4][4];
    gate_matrix_2q(g.kind, bound_angle(g), m);
    apply_2q_inplace(amps, n_qubits, m, g.q0, g.q1);
  }
}

void apply_gate_adjoint_inplace(std::vector<cdouble>& amps, int n_qubits,
                                const GateInstance& g) {
  if (qubit_arity(g.kind) == 1) {
    cdouble m[2][2], md[2][2];
    gate_matrix_1q(g.kind, bound_angle(g), m);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) md[r][c] = std::conj(m[c][r]);
    apply_1q_inplace(amps, n_qubits, md, g.q0);
  } else {
    cdouble m[4][4], md[4][4];
    gate_matrix_2q(g.kind, bound_angle(g), m);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) md[r][c] = std::conj(m[c][r]);
    apply_2q_inplace(amps, n_qubits, md, g.q0, g.q1);
  }
}

void apply_gate_deriv_inplace(std::vector<cdouble>& amps, int n_qubits,
                              const GateInstance& g) {
  if (qubit_arity(g.kind) == 1) {
    cdouble m[2][2];
    gate_matrix_1q_deriv(g.kind, bound_angle(g), m);
    apply_1q_inplace(amps, n_qubits, m, g.q0);
  } else {
    cdouble m[4][4];
    gate_matrix_2q_deriv(g.kind, bound_angle(g), m);
    apply_2q_inplace(amps, n_qubits, m, g.q0, g.q1);
  }
}

Circuit bind(const Circuit& circuit, const ParamVector& params) {
  if (params.size() != circuit.param_count) {
    throw std::invalid_argument("bind: parameter count mismatch");
  }
  for (double v : params.values) check_angle(v);
  Circuit out = circuit;
  for (GateInstance& g : out.gates) {
    if (g.param.tag == GateParam::Tag::Slot) {
      g.param = GateParam::bound(params.values[g.param.slot]);
    }
  }
  return out;
}

QubitState run(const Circuit& circuit, const QubitState& input) {
  if (circuit.n_qubits != input.n_qubits()) {
    throw std::invalid_argument("run: qubit count mismatch");
  }
  QubitState out = input;
  for (const GateInstance& g : circuit.gates) {
    apply_gate_inplace(out.amplitudes(), out.n_qubits(), g);
  }
  return out;
}

QubitState run_adjoint(const Circuit& circuit, const QubitState& input) {
  if (circuit.n_qubits != input.n_qubits()) {
    throw std::invalid_argument("run_adjoint: qubit count mismatch");
  }
  QubitState out = input;
  for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
    apply_gate_adjoint_inplace(out.amplitudes(), out.n_qubits(), *it);
  }
  return out;
}

Circuit compose(const Circuit& a, const Circuit& b) {
  if (a.n_qubits != b.n_qubits) {
    throw std::invalid_argument("compose: qubit count mismatch");
  }
  Circuit out = a;
  for (GateInstance g : b.gates) {
    if (g.param.tag == GateParam::Tag::Slot) {
      g.param.slot += a.param_count;
    }
    out.gates.push_back(g);
  }
  out.param_count = a.param_count + b.param_count;
  return out;
}

}  // namespace qdm
