#pragma once

#include <vector>

#include "qdm/dataset.hpp"
#include "qdm/imaging.hpp"
#include "qdm/state.hpp"

namespace qdm {

// Total probability mass on the class support set.
double p_succ(const ProbDist& dist, const ClassSpec& spec);

struct SuccessReport {
  ClassSpec spec;
  std::vector<double> per_state;  // one p_succ per ensemble member
  double q = 0.0;                 // their mean
};

SuccessReport q_average(const std::vector<ProbDist>& dists, const ClassSpec& spec);

struct ImageMetrics {
  double mse = 0.0;   // squared 8-bit-scale pixel units
  double psnr = 0.0;  // dB; +inf when mse = 0
  double snr = 0.0;   // dB; +inf when the images coincide
};

ImageMetrics image_metrics(const StateImage& clean, const StateImage& test);

// |<clean|denoised>|^2, re-exported under its reporting name.
double fidelity_report(const QubitState& clean, const QubitState& denoised);

}  // namespace qdm
