#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qdm/network.hpp"
#include "qdm/rng.hpp"

using namespace qdm;

namespace {

QubitState random_state(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cdouble> amps(std::size_t{1} << n);
  double norm = 0.0;
  for (cdouble& a : amps) {
    a = {rng.normal(), rng.normal()};
    norm += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm);
  for (cdouble& a : amps) a *= inv;
  return QubitState(n, std::move(amps));
}

ParamVector random_params(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ParamVector p;
  p.values.resize(n);
  for (double& v : p.values) v = rng.uniform(-0.5, 0.5);
  return p;
}

}  // namespace

TEST_CASE("unitary network preserves norm") {
  const QunetNetwork net = make_network(8, 0);
  const ParamVector params = random_params(net.param_count(), 5);
  for (int rep = 0; rep < 5; ++rep) {
    const NetworkRun run = run_network(net, params, random_state(8, 100 + rep));
    CHECK(run.kept_weight == doctest::Approx(1.0));
    CHECK(run.output.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(run.bridge.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("bridge reset zeroes the pooled qubits") {
  const QunetNetwork net = make_network(8, 7);
  CHECK(net.reset_qubits().size() == 7);
  const ParamVector params = random_params(net.param_count(), 6);
  const NetworkRun run = run_network(net, params, random_state(8, 200));
  // bridge state is supported only where every reset qubit is |0>
  std::size_t mask = 0;
  for (int q : net.reset_qubits()) mask |= qubit_weight(8, q);
  for (std::size_t k = 0; k < run.bridge.dim(); ++k) {
    if (k & mask) CHECK(std::abs(run.bridge.amplitudes()[k]) == 0.0);
  }
  CHECK(run.output.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(run.kept_weight > 0.0);
  CHECK(run.kept_weight <= 1.0 + 1e-12);
}

TEST_CASE("reset count zero reproduces the plain circuit") {
  const QunetNetwork net = make_network(4, 0);
  const ParamVector params = random_params(net.param_count(), 7);
  const QubitState in = random_state(4, 300);
  const NetworkRun nr = run_network(net, params, in);
  const QubitState direct = run(bind(net.circuit, params), in);
  for (std::size_t k = 0; k < in.dim(); ++k) {
    CHECK(std::abs(nr.output.amplitudes()[k] - direct.amplitudes()[k]) < 1e-12);
  }
}

TEST_CASE("project_zero_inplace returns the kept mass") {
  std::vector<cdouble> amps(4, cdouble{0.5, 0.0});
  const double kept = project_zero_inplace(amps, 2, {0});
  CHECK(kept == doctest::Approx(0.5));
  CHECK(std::abs(amps[2]) == 0.0);
  CHECK(std::abs(amps[3]) == 0.0);
  CHECK(std::abs(amps[0] - cdouble{0.5, 0.0}) < 1e-15);
}

TEST_CASE("bridge_reset out of range is rejected") {
  CHECK_THROWS(make_network(8, 8));
  CHECK_THROWS(make_network(8, -1));
}

TEST_CASE("mean support mass of any fixed unitary stays near 2^-n") {
  // sanity anchor for the bridged (reset) design: averaging over random
  // equal-magnitude inputs, a unitary network cannot concentrate mass
  const QunetNetwork net = make_network(4, 0);
  const ParamVector params = random_params(net.param_count(), 8);
  Rng rng(909);
  double mean_p0 = 0.0;
  const int reps = 2000;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<cdouble> amps(16);
    for (cdouble& a : amps) {
      const double phi = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
      a = {0.25 * std::cos(phi), 0.25 * std::sin(phi)};
    }
    const NetworkRun run = run_network(net, params, QubitState(4, std::move(amps)));
    mean_p0 += std::norm(run.output.amplitudes()[0]);
  }
  mean_p0 /= reps;
  CHECK(mean_p0 == doctest::Approx(1.0 / 16.0).epsilon(0.15));
}
