#include "qdm/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qdm {

const char* class_name(StateClass c) {
  return c == StateClass::GhzLike ? "ghz" : "w";
}

std::vector<std::size_t> ClassSpec::support() const {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (state_class == StateClass::GhzLike) {
    return {0, dim - 1};
  }
  std::vector<std::size_t> idx;
  for (int q = 0; q < n_qubits; ++q) {
    idx.push_back(std::size_t{1} << (n_qubits - 1 - q));
  }
  return idx;  // excitation on qubit 0 first (index 2^(n-1))
}

void SampleParams::validate() const {
  const std::size_t expect = spec.state_class == StateClass::GhzLike
                                 ? 2
                                 : static_cast<std::size_t>(spec.n_qubits);
  if (coeffs.size() != expect) {
    throw std::invalid_argument("sample: wrong coefficient count");
  }
  double norm = 0.0;
  for (const cdouble& c : coeffs) norm += std::norm(c);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw std::invalid_argument("sample: coefficients not normalized");
  }
}

SampleParams sample_class_params(const ClassSpec& spec, Rng& rng,
                                 bool real_positive) {
  const std::size_t count =
      spec.state_class == StateClass::GhzLike ? 2 : static_cast<std::size_t>(spec.n_qubits);
  std::vector<cdouble> coeffs(count);
  double norm = 0.0;
  for (cdouble& c : coeffs) {
    if (real_positive) {
      c = cdouble{std::abs(rng.normal()), 0.0};
    } else {
      c = cdouble{rng.normal(), rng.normal()};
    }
    norm += std::norm(c);
  }
  const double inv = 1.0 / std::sqrt(norm);
  for (cdouble& c : coeffs) c *= inv;
  SampleParams out{spec, std::move(coeffs)};
  out.validate();
  return out;
}

Dataset make_dataset(const ClassSpec& spec, int count, std::uint64_t master_seed,
                     bool real_positive) {
  if (count < 1) throw std::invalid_argument("make_dataset: count must be >= 1");
  Dataset ds;
  ds.spec = spec;
  ds.master_seed = master_seed;
  ds.samples.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::stream(master_seed, {0x64617461u, static_cast<std::uint64_t>(i)});
    ds.samples.push_back(sample_class_params(spec, rng, real_positive));
  }
  return ds;
}

QubitState class_state(const SampleParams& params) {
  params.validate();
  const int n = params.spec.n_qubits;
  const std::size_t dim = std::size_t{1} << n;
  std::vector<cdouble> amps(dim, cdouble{0.0, 0.0});
  const auto support = params.spec.support();
  for (std::size_t i = 0; i < support.size(); ++i) {
    amps[support[i]] = params.coeffs[i];
  }
  return QubitState(n, std::move(amps));
}

Circuit prep_circuit(const SampleParams& params) {
  params.validate();
  const int n = params.spec.n_qubits;
  Circuit c;
  c.n_qubits = n;
  if (params.spec.state_class == StateClass::GhzLike) {
    const cdouble alpha = params.coeffs[0];
    const cdouble beta = params.coeffs[1];
    const double theta = 2.0 * std::atan2(std::abs(beta), std::abs(alpha));
    const double phi = std::arg(beta) - std::arg(alpha);
    add_bound(c, GateKind::Ry, 0, theta);
    add_bound(c, GateKind::Rz, 0, phi);
    for (int q = 0; q + 1 < n; ++q) add_gate(c, GateKind::CNOT, q, q + 1);
    return c;
  }
  // W-like staircase: excitation starts on qubit 0 and is partially handed
  // down the chain, leaving |coeffs[k]| behind on qubit k.
  add_gate(c, GateKind::X, 0);
  double remaining = 1.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double keep = std::abs(params.coeffs[k]);
    double ratio = remaining > 1e-15 ? keep / remaining : 1.0;
    ratio = std::min(1.0, std::max(-1.0, ratio));
    const double theta = 2.0 * std::acos(ratio);
    remaining *= std::sin(theta / 2.0);
    // controlled-Ry(theta) from k to k+1, then hand the excitation over
    add_bound(c, GateKind::Ry, k + 1, theta / 2.0);
    add_gate(c, GateKind::CNOT, k, k + 1);
    add_bound(c, GateKind::Ry, k + 1, -theta / 2.0);
    add_gate(c, GateKind::CNOT, k, k + 1);
    add_gate(c, GateKind::CNOT, k + 1, k);
  }
  for (int q = 0; q < n; ++q) {
    const double phase = std::arg(params.coeffs[q]);
    if (phase != 0.0) add_bound(c, GateKind::Rz, q, phase);
  }
  return c;
}

ProbDist target_dist(const SampleParams& params) {
  params.validate();
  const std::size_t dim = std::size_t{1} << params.spec.n_qubits;
  ProbDist d;
  d.probs.assign(dim, 0.0);
  const auto support = params.spec.support();
  for (std::size_t i = 0; i < support.size(); ++i) {
    d.probs[support[i]] = std::norm(params.coeffs[i]);
  }
  return d;
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_dataset: cannot open " + path);
  out << "qdm-dataset " << dataset.format_version << "\n";
  out << "class " << class_name(dataset.spec.state_class) << "\n";
  out << "qubits " << dataset.spec.n_qubits << "\n";
  out << "count " << dataset.samples.size() << "\n";
  out << "seed " << dataset.master_seed << "\n";
  for (const SampleParams& s : dataset.samples) {
    out << "sample";
    for (const cdouble& c : s.coeffs) {
      out << " " << fmt17(c.real()) << " " << fmt17(c.imag());
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("save_dataset: write failed for " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_dataset: cannot open " + path);
  Dataset ds;
  std::string tag, cls;
  int version = 0;
  std::size_t count = 0;
  in >> tag >> version;
  if (tag != "qdm-dataset") throw std::runtime_error("load_dataset: not a dataset file");
  if (version != 1) throw std::runtime_error("load_dataset: unsupported format version");
  ds.format_version = version;
  in >> tag >> cls;
  if (tag != "class") throw std::runtime_error("load_dataset: missing class");
  if (cls == "ghz") {
    ds.spec.state_class = StateClass::GhzLike;
  } else if (cls == "w") {
    ds.spec.state_class = StateClass::WLike;
  } else {
    throw std::runtime_error("load_dataset: unknown class " + cls);
  }
  in >> tag >> ds.spec.n_qubits;
  if (tag != "qubits" || ds.spec.n_qubits < 1) {
    throw std::runtime_error("load_dataset: bad qubit count");
  }
  in >> tag >> count;
  if (tag != "count") throw std::runtime_error("load_dataset: missing count");
  in >> tag >> ds.master_seed;
  if (tag != "seed") throw std::runtime_error("load_dataset: missing seed");
  const std::size_t ncoeff = ds.spec.state_class == StateClass::GhzLike
                                 ? 2
                                 : static_cast<std::size_t>(ds.spec.n_qubits);
  for (std::size_t i = 0; i < count; ++i) {
    in >> tag;
    if (tag != "sample") {
      throw std::runtime_error("load_dataset: missing sample " + std::to_string(i));
    }
    SampleParams s;
    s.spec = ds.spec;
    for (std::size_t k = 0; k < ncoeff; ++k) {
      double re = 0.0, im = 0.0;
      in >> re >> im;
      s.coeffs.emplace_back(re, im);
    }
    if (!in) throw std::runtime_error("load_dataset: truncated sample " + std::to_string(i));
    try {
      s.validate();
    } catch (const std::exception& e) {
      throw std::runtime_error("load_dataset: sample " + std::to_string(i) + ": " + e.what());
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

}  // namespace qdm
