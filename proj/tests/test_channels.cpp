#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qdm/channels.hpp"
#include "qdm/dataset.hpp"
#include "qdm/diffusion.hpp"

using namespace qdm;

namespace {

QubitState ghz_state(int n) {
  std::vector<cdouble> amps(std::size_t{1} << n, cdouble{0.0, 0.0});
  amps.front() = 1.0 / std::sqrt(2.0);
  amps.back() = 1.0 / std::sqrt(2.0);
  return QubitState(n, std::move(amps));
}

void check_against_oracle(const QubitState& state, const ChannelSpec& spec,
                          int n_traj, std::uint64_t seed) {
  Rng rng(seed);
  const NoisyEnsemble ens = ensemble_dist(state, spec, n_traj, rng);
  const ProbDist exact = exact_channel_dist(state, spec);
  for (std::size_t k = 0; k < exact.size(); ++k) {
    const double sigma = std::max(ens.std_error[k], 1e-12);
    CHECK(std::abs(ens.mean_dist[k] - exact[k]) <= 3.0 * sigma + 1e-9);
  }
}

}  // namespace

TEST_CASE("channel validation") {
  ChannelSpec spec;
  spec.eta = 0.0;
  CHECK_THROWS(spec.validate(3));
  spec.eta = 0.25;
  CHECK_NOTHROW(spec.validate(3));
  spec.kind = ChannelKind::EpsilonII;
  spec.p = 1.5;
  CHECK_THROWS(spec.validate(3));
  spec.p = 0.75;
  spec.scope = {5};
  CHECK_THROWS(spec.validate(3));
}

TEST_CASE("trajectories preserve norm") {
  ChannelSpec spec;
  spec.kind = ChannelKind::EpsilonIII;
  spec.eta = 0.5;
  Rng rng(21);
  const QubitState s = ghz_state(3);
  for (int rep = 0; rep < 20; ++rep) {
    const QubitState t = apply_channel_trajectory(s, spec, rng);
    CHECK(t.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("epsilon-II with p=0 is the identity channel") {
  ChannelSpec spec;
  spec.kind = ChannelKind::EpsilonII;
  spec.p = 0.0;
  spec.eta = 0.5;
  Rng rng(22);
  const QubitState s = ghz_state(3);
  const QubitState t = apply_channel_trajectory(s, spec, rng);
  for (std::size_t k = 0; k < s.dim(); ++k) {
    CHECK(std::abs(t.amplitudes()[k] - s.amplitudes()[k]) < 1e-14);
  }
  const ProbDist exact = exact_channel_dist(s, spec);
  const ProbDist clean = probabilities(s);
  for (std::size_t k = 0; k < exact.size(); ++k) {
    CHECK(exact[k] == doctest::Approx(clean[k]).epsilon(1e-10));
  }
}

TEST_CASE("fixed-theta epsilon-III matches a direct rotation") {
  ChannelSpec spec;
  spec.kind = ChannelKind::EpsilonIII;
  spec.eta = 1.0;
  spec.fixed_theta = 0.3;
  Rng rng(23);
  const QubitState s = ghz_state(2);
  const QubitState t = apply_channel_trajectory(s, spec, rng);
  const ProbDist exact = exact_channel_dist(s, spec);
  const ProbDist traj = probabilities(t);
  for (std::size_t k = 0; k < exact.size(); ++k) {
    CHECK(traj[k] == doctest::Approx(exact[k]).epsilon(1e-9));
  }
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  std::vector<double> nodes, weights;
  gauss_legendre(8, 0.0, 1.0, nodes, weights);
  double integral = 0.0;
  for (int i = 0; i < 8; ++i) {
    integral += weights[i] * nodes[i] * nodes[i] * nodes[i];  // x^3
  }
  CHECK(integral == doctest::Approx(0.25).epsilon(1e-12));
  gauss_legendre(16, -1.0, 2.0, nodes, weights);
  double total = 0.0;
  for (int i = 0; i < 16; ++i) total += weights[i];
  CHECK(total == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("trajectory mean matches density-matrix oracle: epsilon-I") {
  ChannelSpec spec;
  spec.kind = ChannelKind::EpsilonI;
  spec.eta = 0.25;
  check_against_oracle(ghz_state(3), spec, 100000, 31);
}

TEST_CASE("trajectory mean matches density-matrix oracle: epsilon-II") {
  ChannelSpec spec;
  spec.kind = ChannelKind::EpsilonII;
  spec.eta = 0.4;
  spec.p = 0.75;
  check_against_oracle(ghz_state(3), spec, 100000, 32);
}

TEST_CASE("trajectory mean matches density-matrix oracle: epsilon-III") {
  ChannelSpec spec;
  spec.kind = ChannelKind::EpsilonIII;
  spec.eta = 0.25;
  check_against_oracle(ghz_state(3), spec, 100000, 33);
}

TEST_CASE("oracle on W-like input, scoped channel") {
  SampleParams p;
  p.spec = {StateClass::WLike, 3};
  p.coeffs = {cdouble{0.6, 0.0}, cdouble{0.0, 0.48}, cdouble{0.64, 0.0}};
  const QubitState w = class_state(p);
  ChannelSpec spec;
  spec.kind = ChannelKind::EpsilonI;
  spec.eta = 0.3;
  spec.scope = {1};
  check_against_oracle(w, spec, 100000, 34);
}

TEST_CASE("ensemble keeps trajectories only when small") {
  ChannelSpec spec;
  spec.kind = ChannelKind::EpsilonIII;
  spec.eta = 0.2;
  Rng rng(35);
  const NoisyEnsemble small = ensemble_dist(ghz_state(2), spec, 50, rng);
  CHECK(small.trajectories.size() == 50);
  Rng rng2(36);
  const NoisyEnsemble big = ensemble_dist(ghz_state(2), spec, 2000, rng2);
  CHECK(big.trajectories.empty());
}
