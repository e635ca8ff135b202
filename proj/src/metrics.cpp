#include "qdm/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qdm {

double p_succ(const ProbDist& dist, const ClassSpec& spec) {
  const std::size_t dim = std::size_t{1} << spec.n_qubits;
  if (dist.size() != dim) {
    throw std::invalid_argument("p_succ: distribution length mismatch");
  }
  double sum = 0.0;
  for (std::size_t k : spec.support()) sum += dist[k];
  return sum;
}

SuccessReport q_average(const std::vector<ProbDist>& dists, const ClassSpec& spec) {
  if (dists.empty()) throw std::invalid_argument("q_average: empty ensemble");
  SuccessReport report;
  report.spec = spec;
  double sum = 0.0;
  for (const ProbDist& d : dists) {
    report.per_state.push_back(p_succ(d, spec));
    sum += report.per_state.back();
  }
  report.q = sum / static_cast<double>(dists.size());
  return report;
}

ImageMetrics image_metrics(const StateImage& clean, const StateImage& test) {
  if (clean.rows != test.rows || clean.cols != test.cols) {
    throw std::invalid_argument("image_metrics: dimension mismatch");
  }
  const std::size_t n = clean.pixels.size();
  double err = 0.0, signal = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = clean.pixels[i] - test.pixels[i];
    err += d * d;
    signal += clean.pixels[i] * clean.pixels[i];
  }
  ImageMetrics m;
  m.mse = err / static_cast<double>(n);
  if (err == 0.0) {
    m.psnr = std::numeric_limits<double>::infinity();
    m.snr = std::numeric_limits<double>::infinity();
  } else {
    m.psnr = 10.0 * std::log10(255.0 * 255.0 / m.mse);
    m.snr = 10.0 * std::log10(signal / err);
  }
  return m;
}

double fidelity_report(const QubitState& clean, const QubitState& denoised) {
  return fidelity(clean, denoised);
}

}  // namespace qdm
