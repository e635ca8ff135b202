#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdm/circuit.hpp"
#include "qdm/rng.hpp"
#include "qdm/state.hpp"

namespace qdm {

enum class StateClass { GhzLike, WLike };

const char* class_name(StateClass c);

struct ClassSpec {
  StateClass state_class = StateClass::GhzLike;
  int n_qubits = 8;

  // Basis indices carrying the class's probability mass.
  std::vector<std::size_t> support() const;
};

// Coefficients of one class state: (alpha, beta) for GHZ-like, or the n
// single-excitation coefficients for W-like.
struct SampleParams {
  ClassSpec spec;
  std::vector<cdouble> coeffs;

  void validate() const;  // unit norm within 1e-12
};

struct Dataset {
  int format_version = 1;
  ClassSpec spec;
  std::uint64_t master_seed = 0;
  std::vector<SampleParams> samples;
};

// Coefficients uniform on the complex unit sphere of the class subspace.
SampleParams sample_class_params(const ClassSpec& spec, Rng& rng,
                                 bool real_positive = false);

Dataset make_dataset(const ClassSpec& spec, int count, std::uint64_t master_seed,
                     bool real_positive = false);

// Fully bound preparation circuit whose output matches the analytic class
// state up to global phase.
Circuit prep_circuit(const SampleParams& params);

// Analytic amplitudes of the class state.
QubitState class_state(const SampleParams& params);

// Exact class-subspace distribution.
ProbDist target_dist(const SampleParams& params);

void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace qdm
