#include "qdm/imaging.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qdm {

StateImage dist_to_image(const ProbDist& dist, int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (dist.size() != dim) {
    throw std::invalid_argument("dist_to_image: distribution length mismatch");
  }
  StateImage img;
  img.rows = std::size_t{1} << ((n_qubits + 1) / 2);
  img.cols = std::size_t{1} << (n_qubits / 2);
  img.pixels.resize(dim);
  // Index layout already puts the first ceil(n/2) bits highest, so basis
  // index k sits at row k / cols, column k % cols.
  for (std::size_t k = 0; k < dim; ++k) img.pixels[k] = 255.0 * dist[k];
  return img;
}

void export_pgm(const StateImage& image, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_pgm: cannot open " + path);
  out << "P2\n" << image.cols << " " << image.rows << "\n255\n";
  for (std::size_t r = 0; r < image.rows; ++r) {
    for (std::size_t c = 0; c < image.cols; ++c) {
      const double v = std::min(255.0, std::max(0.0, image.at(r, c)));
      if (c > 0) out << " ";
      out << static_cast<int>(std::lround(v));
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("export_pgm: write failed for " + path);
}

void export_plotdata(const std::vector<PlotSeries>& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_plotdata: cannot open " + path);
  out << "series\tx\ty\n";
  char buf[64];
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size()) {
      throw std::invalid_argument("export_plotdata: ragged series " + s.name);
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << s.name << "\t";
      std::snprintf(buf, sizeof(buf), "%.17g", s.x[i]);
      out << buf << "\t";
      std::snprintf(buf, sizeof(buf), "%.17g", s.y[i]);
      out << buf << "\n";
    }
  }
  if (!out) throw std::runtime_error("export_plotdata: write failed for " + path);
}

}  // namespace qdm
