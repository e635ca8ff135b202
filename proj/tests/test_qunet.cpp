#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdm/qunet.hpp"

using namespace qdm;

TEST_CASE("default 8-qubit network has 112 parameters") {
  auto [circuit, desc] = build_qunet(8);
  CHECK(desc.param_count == 112);
  CHECK(circuit.param_count == 112);
}

TEST_CASE("parameter count grows linearly in qubit count") {
  // Down path: n/2-1 + n/4-1 + ... disentanglers and n/2 + n/4 + ...
  // isometries; doubled by the up path. Both sums are linear in n.
  auto [dis, iso] = default_templates();
  const std::size_t d = dis.param_count();
  const std::size_t s = iso.param_count();
  std::vector<std::size_t> counts;
  for (int n : {2, 4, 8, 16}) {
    auto [circuit, desc] = build_qunet(n);
    counts.push_back(desc.param_count);
    std::size_t expect = 0;
    for (int active = n; active > 1; active /= 2) {
      expect += (active / 2 - 1) * d + (active / 2) * s;
    }
    CHECK(desc.param_count == 2 * expect);
  }
  // closed form: 22n - 22 - 14 log2 n, i.e. linear with a subtracted log
  const int ns[] = {2, 4, 8, 16};
  for (int i = 0; i < 4; ++i) {
    int log2n = 0;
    for (int v = ns[i]; v > 1; v /= 2) ++log2n;
    CHECK(counts[i] == static_cast<std::size_t>(22 * ns[i] - 22 - 14 * log2n));
    // bounded per-qubit cost
    CHECK(counts[i] <= static_cast<std::size_t>(22 * ns[i]));
  }
}

TEST_CASE("template invariants") {
  auto [dis, iso] = default_templates();
  CHECK_NOTHROW(dis.validate());
  CHECK_NOTHROW(iso.validate());
  CHECK(dis.param_count() == 7);
  CHECK(iso.param_count() == 4);

  BlockTemplate bad_dis;
  bad_dis.role = BlockTemplate::Role::Disentangler;
  bad_dis.recipe = {{GateKind::Rx, 0, 0}};
  CHECK_THROWS(bad_dis.validate());

  BlockTemplate bad_iso;
  bad_iso.role = BlockTemplate::Role::Isometry;
  bad_iso.recipe = {{GateKind::Ry, 0, 0}};
  CHECK_THROWS(bad_iso.validate());
}

TEST_CASE("down path pools to one qubit and up path mirrors it") {
  auto [circuit, desc] = build_qunet(8);
  CHECK(desc.pooled_qubits.size() == 7);
  CHECK(desc.bridge_gate_index > 0);
  CHECK(desc.bridge_gate_index < circuit.gates.size());
  std::size_t down_blocks = 0, up_blocks = 0;
  for (const PlacedBlock& b : desc.blocks) {
    (b.path == NetPath::Down ? down_blocks : up_blocks) += 1;
  }
  CHECK(down_blocks == up_blocks);
  // 8 qubits: levels 8->4->2->1 give 3+1+0 disentanglers, 4+2+1 isometries
  CHECK(down_blocks == 11);
}

TEST_CASE("every down block has an up twin with fresh parameters") {
  auto [circuit, desc] = build_qunet(8);
  std::vector<const PlacedBlock*> down, up;
  for (const PlacedBlock& b : desc.blocks) {
    (b.path == NetPath::Down ? down : up).push_back(&b);
  }
  REQUIRE(down.size() == up.size());
  for (std::size_t i = 0; i < down.size(); ++i) {
    // up path replays the down blocks in reverse order on the same pairs
    const PlacedBlock& d = *down[down.size() - 1 - i];
    const PlacedBlock& u = *up[i];
    CHECK(d.role == u.role);
    CHECK(d.qa == u.qa);
    CHECK(d.qb == u.qb);
    CHECK(d.first_slot != u.first_slot);
  }
}

TEST_CASE("chip graph hosts the default network") {
  auto [circuit, desc] = build_qunet(8);
  const CouplingGraph chip = default_chip_graph();
  const std::vector<int> embedding = default_chip_embedding();
  REQUIRE(embedding.size() == 8);
  const auto violations = validate_topology(circuit, chip, embedding);
  CHECK(violations.empty());
}

TEST_CASE("topology validation flags non-adjacent pairs") {
  Circuit c;
  c.n_qubits = 2;
  add_gate(c, GateKind::CNOT, 0, 1);
  CouplingGraph g;
  g.n_vertices = 3;
  g.add_edge(0, 1);
  const auto ok = validate_topology(c, g, {0, 1});
  CHECK(ok.empty());
  const auto bad = validate_topology(c, g, {0, 2});
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].gate_index == 0);
}

TEST_CASE("complete graph admits everything") {
  auto [circuit, desc] = build_qunet(8);
  std::vector<int> identity_embedding{0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(validate_topology(circuit, complete_graph(8), identity_embedding).empty());
}
