#pragma once

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "qdm/circuit.hpp"

namespace qdm {

// Two-qubit building block of the network, given as a gate recipe over
// relative qubits 0/1 of the pair it is placed on.
struct BlockTemplate {
  enum class Role { Disentangler, Isometry };

  struct Entry {
    GateKind kind;
    int rel0 = 0;  // relative qubit for 1q gates / first qubit of 2q gates
    int rel1 = 1;  // second relative qubit (2q gates)
  };

  Role role = Role::Disentangler;
  std::vector<Entry> recipe;

  std::size_t param_count() const;
  // Role invariants: a disentangler carries at least one of Rxx/Ryy/Rzz,
  // an isometry carries exactly one CNOT.
  void validate() const;
};

enum class NetPath { Down, Up };

// One placed block instance inside the built network.
struct PlacedBlock {
  NetPath path = NetPath::Down;
  int level = 0;  // 1-based placement level along its path
  BlockTemplate::Role role = BlockTemplate::Role::Disentangler;
  int qa = 0;     // absolute qubits the template's rel0/rel1 map to
  int qb = 0;
  std::size_t first_slot = 0;   // flat slot index of the block's first parameter
  std::size_t first_gate = 0;   // gate index of the block's first gate
};

// Bridged-MERA topology bookkeeping for a built network.
struct QunetDescriptor {
  int n_qubits = 0;
  int levels = 0;
  BlockTemplate disentangler_template;
  BlockTemplate isometry_template;
  std::vector<PlacedBlock> blocks;     // in placement (= gate) order
  std::size_t param_count = 0;
  std::size_t bridge_gate_index = 0;   // first gate of the up path
  std::vector<int> pooled_qubits;      // in pooling order (level 1 first)
  int bottleneck_qubit = 0;
};

std::pair<BlockTemplate, BlockTemplate> default_templates();

// Builds the bridged-MERA circuit: per down-level, a staggered disentangler
// row then a pair-pooling isometry row (second qubit of each pair retained),
// down to a single active qubit; the up path mirrors the down path's block
// sequence in reverse with independent parameters.
std::pair<Circuit, QunetDescriptor> build_qunet(int n_qubits,
                                                const BlockTemplate& disentangler,
                                                const BlockTemplate& isometry);

std::pair<Circuit, QunetDescriptor> build_qunet(int n_qubits);

// Undirected simple graph of allowed two-qubit couplings on a chip.
struct CouplingGraph {
  int n_vertices = 0;
  std::set<std::pair<int, int>> edges;  // normalized (lo, hi)

  void add_edge(int u, int v);
  bool adjacent(int u, int v) const;
};

CouplingGraph complete_graph(int n_vertices);

// Two rows of `cols` qubits with rail (in-row) and rung (cross-row)
// couplings, plus diagonal couplings when requested. Vertex = row*cols+col.
CouplingGraph two_row_chip(int cols, bool diagonals);

// Two-row chip with diagonals that hosts the default 8-qubit network,
// together with its qubit->vertex embedding.
CouplingGraph default_chip_graph();
std::vector<int> default_chip_embedding();

struct TopologyViolation {
  std::size_t gate_index = 0;
  GateInstance gate;
};

// Reports every two-qubit gate whose embedded endpoints are not adjacent.
std::vector<TopologyViolation> validate_topology(const Circuit& circuit,
                                                 const CouplingGraph& graph,
                                                 const std::vector<int>& embedding);

}  // namespace qdm
