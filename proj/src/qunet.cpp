#include "qdm/qunet.hpp"

#include <algorithm>
#include <stdexcept>

namespace qdm {

std::size_t BlockTemplate::param_count() const {
  std::size_t n = 0;
  for (const Entry& e : recipe) n += static_cast<std::size_t>(param_arity(e.kind));
  return n;
}

void BlockTemplate::validate() const {
  int cnots = 0;
  int entanglers = 0;
  for (const Entry& e : recipe) {
    if (e.rel0 < 0 || e.rel0 > 1 || e.rel1 < 0 || e.rel1 > 1) {
      throw std::invalid_argument("block template: relative qubits must be 0/1");
    }
    if (qubit_arity(e.kind) == 2 && e.rel0 == e.rel1) {
      throw std::invalid_argument("block template: two-qubit entry needs distinct qubits");
    }
    if (e.kind == GateKind::CNOT) ++cnots;
    if (e.kind == GateKind::Rxx || e.kind == GateKind::Ryy || e.kind == GateKind::Rzz) {
      ++entanglers;
    }
  }
  if (role == Role::Disentangler && entanglers < 1) {
    throw std::invalid_argument("disentangler template needs an Rxx/Ryy/Rzz gate");
  }
  if (role == Role::Isometry && cnots != 1) {
    throw std::invalid_argument("isometry template needs exactly one CNOT");
  }
}

std::pair<BlockTemplate, BlockTemplate> default_templates() {
  BlockTemplate dis;
  dis.role = BlockTemplate::Role::Disentangler;
  dis.recipe = {
      {GateKind::Rx, 0, 1}, {GateKind::Ry, 0, 1},
      {GateKind::Rx, 1, 0}, {GateKind::Ry, 1, 0},
      {GateKind::Rxx, 0, 1}, {GateKind::Ryy, 0, 1}, {GateKind::Rzz, 0, 1},
  };
  BlockTemplate iso;
  iso.role = BlockTemplate::Role::Isometry;
  iso.recipe = {
      {GateKind::Ry, 0, 1}, {GateKind::Ry, 1, 0},
      {GateKind::CNOT, 1, 0},
      {GateKind::Ry, 0, 1}, {GateKind::Ry, 1, 0},
  };
  return {dis, iso};
}

namespace {

struct BlockSite {
  int level;
  BlockTemplate::Role role;
  int qa;
  int qb;
};

void emit_block(Circuit& circuit, QunetDescriptor& desc, const BlockTemplate& tpl,
                NetPath path, const BlockSite& site) {
  PlacedBlock placed;
  placed.path = path;
  placed.level = site.level;
  placed.role = site.role;
  placed.qa = site.qa;
  placed.qb = site.qb;
  placed.first_slot = circuit.param_count;
  placed.first_gate = circuit.gates.size();
  for (const BlockTemplate::Entry& e : tpl.recipe) {
    const int g0 = e.rel0 == 0 ? site.qa : site.qb;
    const int g1 = e.rel1 == 0 ? site.qa : site.qb;
    if (qubit_arity(e.kind) == 1) {
      if (param_arity(e.kind) == 1) {
        add_slot(circuit, e.kind, g0);
      } else {
        add_gate(circuit, e.kind, g0);
      }
    } else {
      if (param_arity(e.kind) == 1) {
        add_slot(circuit, e.kind, g0, g1);
      } else {
        add_gate(circuit, e.kind, g0, g1);
      }
    }
  }
  desc.blocks.push_back(placed);
}

}  // namespace

std::pair<Circuit, QunetDescriptor> build_qunet(int n_qubits,
                                                const BlockTemplate& disentangler,
                                                const BlockTemplate& isometry) {
  if (n_qubits < 2 || (n_qubits & (n_qubits - 1)) != 0) {
    throw std::invalid_argument("build_qunet: n_qubits must be a power of two >= 2");
  }
  if (disentangler.role != BlockTemplate::Role::Disentangler ||
      isometry.role != BlockTemplate::Role::Isometry) {
    throw std::invalid_argument("build_qunet: template roles swapped");
  }
  disentangler.validate();
  isometry.validate();

  Circuit circuit;
  circuit.n_qubits = n_qubits;
  QunetDescriptor desc;
  desc.n_qubits = n_qubits;
  desc.disentangler_template = disentangler;
  desc.isometry_template = isometry;

  // Enumerate the down-path block sites level by level.
  std::vector<BlockSite> down_sites;
  std::vector<int> active(n_qubits);
  for (int q = 0; q < n_qubits; ++q) active[q] = q;
  int level = 0;
  while (active.size() >= 2) {
    ++level;
    const int m = static_cast<int>(active.size());
    for (int j = 1; j + 1 < m; j += 2) {
      down_sites.push_back({level, BlockTemplate::Role::Disentangler,
                            active[j], active[j + 1]});
    }
    std::vector<int> retained;
    for (int j = 0; j + 1 < m; j += 2) {
      down_sites.push_back({level, BlockTemplate::Role::Isometry,
                            active[j], active[j + 1]});
      desc.pooled_qubits.push_back(active[j]);
      retained.push_back(active[j + 1]);
    }
    active = std::move(retained);
  }
  desc.levels = level;
  desc.bottleneck_qubit = active.front();

  for (const BlockSite& site : down_sites) {
    emit_block(circuit, desc,
               site.role == BlockTemplate::Role::Disentangler ? disentangler : isometry,
               NetPath::Down, site);
  }
  desc.bridge_gate_index = circuit.gates.size();

  // Up path: same sites, reversed block order, fresh parameter slots.
  for (auto it = down_sites.rbegin(); it != down_sites.rend(); ++it) {
    BlockSite site = *it;
    site.level = desc.levels + 1 - site.level;
    emit_block(circuit, desc,
               site.role == BlockTemplate::Role::Disentangler ? disentangler : isometry,
               NetPath::Up, site);
  }
  desc.param_count = circuit.param_count;
  return {std::move(circuit), std::move(desc)};
}

std::pair<Circuit, QunetDescriptor> build_qunet(int n_qubits) {
  auto [dis, iso] = default_templates();
  return build_qunet(n_qubits, dis, iso);
}

void CouplingGraph::add_edge(int u, int v) {
  if (u == v || u < 0 || v < 0 || u >= n_vertices || v >= n_vertices) {
    throw std::invalid_argument("coupling graph: bad edge");
  }
  edges.insert({std::min(u, v), std::max(u, v)});
}

bool CouplingGraph::adjacent(int u, int v) const {
  return edges.count({std::min(u, v), std::max(u, v)}) != 0;
}

CouplingGraph complete_graph(int n_vertices) {
  CouplingGraph g;
  g.n_vertices = n_vertices;
  for (int u = 0; u < n_vertices; ++u)
    for (int v = u + 1; v < n_vertices; ++v) g.add_edge(u, v);
  return g;
}

CouplingGraph two_row_chip(int cols, bool diagonals) {
  CouplingGraph g;
  g.n_vertices = 2 * cols;
  auto vid = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c + 1 < cols; ++c) g.add_edge(vid(r, c), vid(r, c + 1));
  for (int c = 0; c < cols; ++c) g.add_edge(vid(0, c), vid(1, c));
  if (diagonals) {
    for (int c = 0; c + 1 < cols; ++c) {
      g.add_edge(vid(0, c), vid(1, c + 1));
      g.add_edge(vid(1, c), vid(0, c + 1));
    }
  }
  return g;
}

CouplingGraph default_chip_graph() { return two_row_chip(5, true); }

std::vector<int> default_chip_embedding() {
  // Found by exhaustive search over injections of the default 8-qubit
  // network's interaction graph into the two-row diagonal chip.
  return {0, 1, 6, 2, 7, 3, 4, 8};
}

std::vector<TopologyViolation> validate_topology(const Circuit& circuit,
                                                 const CouplingGraph& graph,
                                                 const std::vector<int>& embedding) {
  if (embedding.size() < static_cast<std::size_t>(circuit.n_qubits)) {
    throw std::invalid_argument("validate_topology: embedding too small");
  }
  std::set<int> seen;
  for (int q = 0; q < circuit.n_qubits; ++q) {
    const int v = embedding[q];
    if (v < 0 || v >= graph.n_vertices || !seen.insert(v).second) {
      throw std::invalid_argument("validate_topology: embedding must be injective");
    }
  }
  std::vector<TopologyViolation> out;
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const GateInstance& g = circuit.gates[i];
    if (qubit_arity(g.kind) != 2) continue;
    if (!graph.adjacent(embedding[g.q0], embedding[g.q1])) {
      out.push_back({i, g});
    }
  }
  return out;
}

}  // namespace qdm
