#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qdm/state.hpp"

namespace qdm {

// 2D rendering of a basis distribution: rows = 2^ceil(n/2), cols =
// 2^floor(n/2); pixel (r, c) = 255 * probability of basis index r*cols + c.
struct StateImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> pixels;  // row-major

  double at(std::size_t r, std::size_t c) const { return pixels[r * cols + c]; }
};

StateImage dist_to_image(const ProbDist& dist, int n_qubits);

// Plain-text PGM (P2), maxval 255, pixels rounded and clamped.
void export_pgm(const StateImage& image, const std::string& path);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Delimited text: header row, then one row per point, 17 significant digits.
void export_plotdata(const std::vector<PlotSeries>& series, const std::string& path);

}  // namespace qdm
