#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qdm/imaging.hpp"

using namespace qdm;

namespace {

ProbDist one_hot(int n_qubits, std::size_t index) {
  ProbDist d;
  d.probs.assign(std::size_t{1} << n_qubits, 0.0);
  d.probs[index] = 1.0;
  return d;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("image dimensions split the qubits") {
  const StateImage even = dist_to_image(one_hot(8, 0), 8);
  CHECK(even.rows == 16);
  CHECK(even.cols == 16);
  const StateImage odd = dist_to_image(one_hot(5, 0), 5);
  CHECK(odd.rows == 8);
  CHECK(odd.cols == 4);
  CHECK(odd.rows * odd.cols == 32);
}

TEST_CASE("corner and mid mappings on 8 qubits") {
  CHECK(dist_to_image(one_hot(8, 0), 8).at(0, 0) == 255.0);
  CHECK(dist_to_image(one_hot(8, 255), 8).at(15, 15) == 255.0);
  // |10000000> = index 128 -> row 1000b = 8, col 0
  CHECK(dist_to_image(one_hot(8, 128), 8).at(8, 0) == 255.0);
}

TEST_CASE("mapping is a bijection preserving mass") {
  ProbDist d;
  d.probs.assign(64, 1.0 / 64.0);
  const StateImage img = dist_to_image(d, 6);
  double sum = 0.0;
  for (double v : img.pixels) sum += v;
  CHECK(sum == doctest::Approx(255.0).epsilon(1e-6));
  for (std::size_t r = 0; r < img.rows; ++r) {
    for (std::size_t c = 0; c < img.cols; ++c) {
      CHECK(img.at(r, c) / 255.0 == d[r * img.cols + c]);
    }
  }
}

TEST_CASE("pgm export is deterministic and well formed") {
  const std::string p1 = "test_img_a.pgm", p2 = "test_img_b.pgm";
  const StateImage img = dist_to_image(one_hot(4, 0), 4);
  export_pgm(img, p1);
  export_pgm(img, p2);
  const std::string a = slurp(p1), b = slurp(p2);
  CHECK(a == b);
  CHECK(a.rfind("P2\n4 4\n255\n", 0) == 0);
  CHECK(a.find("255") != std::string::npos);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("all-zero image renders as zeros") {
  StateImage img;
  img.rows = 2;
  img.cols = 2;
  img.pixels.assign(4, 0.0);
  const std::string path = "test_img_zero.pgm";
  export_pgm(img, path);
  CHECK(slurp(path) == "P2\n2 2\n255\n0 0\n0 0\n");
  std::remove(path.c_str());
}

TEST_CASE("plot data round trips exactly") {
  const std::string path = "test_plot.tsv";
  PlotSeries s{"curve", {0.25, 0.5}, {0.99, 1.0 / 3.0}};
  export_plotdata({s}, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "series\tx\ty");
  std::string name;
  double x = 0.0, y = 0.0;
  in >> name >> x >> y;
  CHECK(name == "curve");
  CHECK(x == 0.25);
  CHECK(y == 0.99);
  in >> name >> x >> y;
  CHECK(y == 1.0 / 3.0);  // 17 digits survive the round trip
  std::remove(path.c_str());

  export_plotdata({}, path);
  CHECK(slurp(path) == "series\tx\ty\n");
  std::remove(path.c_str());

  PlotSeries ragged{"bad", {1.0}, {}};
  CHECK_THROWS(export_plotdata({ragged}, path));
}

TEST_CASE("length mismatch is rejected") {
  ProbDist d;
  d.probs.assign(7, 0.0);
  CHECK_THROWS(dist_to_image(d, 3));
}
