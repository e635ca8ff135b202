#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "qdm/metrics.hpp"

using namespace qdm;

namespace {

// Published 8-qubit denoising benchmarks: (MSE, PSNR) before/after pairs
// for six data-type/noise rows. last_digit gives the printed precision.
struct TablePair {
  const char* label;
  double mse;
  double psnr;
  double mse_digit;  // value of one unit in the last printed MSE digit
};

const TablePair kTablePairs[] = {
    {"ghz-rx-before", 0.48, 51.33, 0.01},   {"ghz-rx-after", 0.0051, 71.14, 0.0001},
    {"w-rx-before", 0.49, 51.25, 0.01},     {"w-rx-after", 0.0241, 64.35, 0.0001},
    {"ghz-ry-before", 0.59, 50.43, 0.01},   {"ghz-ry-after", 0.0488, 61.28, 0.0001},
    {"w-ry-before", 0.73, 49.56, 0.01},     {"w-ry-after", 0.0662, 59.96, 0.0001},
    {"ghz-e3-before", 0.79, 49.20, 0.01},   {"ghz-e3-after", 0.07, 59.98, 0.01},
    {"w-e3-before", 0.98, 48.25, 0.01},     {"w-e3-after", 0.15, 56.40, 0.01},
};

double psnr_of(double mse) { return 10.0 * std::log10(255.0 * 255.0 / mse); }

}  // namespace

TEST_CASE("p_succ on exact class and uniform distributions") {
  ClassSpec ghz{StateClass::GhzLike, 8};
  ClassSpec w{StateClass::WLike, 8};
  ProbDist uniform;
  uniform.probs.assign(256, 1.0 / 256.0);
  CHECK(p_succ(uniform, ghz) == doctest::Approx(2.0 / 256.0).epsilon(1e-12));
  CHECK(p_succ(uniform, w) == doctest::Approx(8.0 / 256.0).epsilon(1e-12));
  ProbDist exact;
  exact.probs.assign(256, 0.0);
  exact.probs[0] = 0.3;
  exact.probs[255] = 0.7;
  CHECK(p_succ(exact, ghz) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("q_average is the exact mean and keeps the scatter") {
  ClassSpec ghz{StateClass::GhzLike, 2};
  ProbDist in_class, out_class;
  in_class.probs = {0.5, 0.0, 0.0, 0.5};
  out_class.probs = {0.0, 0.5, 0.5, 0.0};
  const SuccessReport r = q_average({in_class, out_class}, ghz);
  CHECK(r.q == doctest::Approx(0.5).epsilon(1e-15));
  REQUIRE(r.per_state.size() == 2);
  CHECK(r.per_state[0] == doctest::Approx(1.0));
  CHECK(r.per_state[1] == doctest::Approx(0.0));
  CHECK_THROWS(q_average({}, ghz));
  const SuccessReport one = q_average({in_class}, ghz);
  CHECK(one.q == one.per_state[0]);
}

TEST_CASE("psnr-mse identity reproduces all twelve published pairs") {
  for (const TablePair& row : kTablePairs) {
    // interval implied by the printed MSE precision, +-0.1 dB slack
    const double lo = psnr_of(row.mse + row.mse_digit / 2.0);
    const double hi = psnr_of(row.mse - row.mse_digit / 2.0);
    INFO(row.label);
    CHECK(row.psnr >= lo - 0.1);
    CHECK(row.psnr <= hi + 0.1);
  }
}

TEST_CASE("image_metrics formulas and infinity sentinel") {
  StateImage a, b;
  a.rows = b.rows = 2;
  a.cols = b.cols = 2;
  a.pixels = {255.0, 0.0, 0.0, 0.0};
  b.pixels = {255.0, 0.0, 0.0, 0.0};
  const ImageMetrics same = image_metrics(a, b);
  CHECK(same.mse == 0.0);
  CHECK(std::isinf(same.psnr));
  CHECK(std::isinf(same.snr));

  b.pixels = {253.0, 0.0, 2.0, 0.0};
  const ImageMetrics diff = image_metrics(a, b);
  CHECK(diff.mse == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(diff.psnr == doctest::Approx(10.0 * std::log10(255.0 * 255.0 / 2.0)));
  CHECK(diff.snr ==
        doctest::Approx(10.0 * std::log10(255.0 * 255.0 / 8.0)).epsilon(1e-9));
  CHECK(diff.psnr >= diff.snr);

  StateImage c;
  c.rows = 1;
  c.cols = 2;
  c.pixels = {0.0, 0.0};
  CHECK_THROWS(image_metrics(a, c));
}

TEST_CASE("p_succ is linear in the distribution") {
  ClassSpec ghz{StateClass::GhzLike, 3};
  ProbDist a, b;
  a.probs = {0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.2};
  b.probs = {0.0, 0.25, 0.25, 0.0, 0.0, 0.25, 0.25, 0.0};
  ProbDist mix;
  mix.probs.resize(8);
  for (int k = 0; k < 8; ++k) mix.probs[k] = 0.3 * a[k] + 0.7 * b[k];
  CHECK(p_succ(mix, ghz) ==
        doctest::Approx(0.3 * p_succ(a, ghz) + 0.7 * p_succ(b, ghz)).epsilon(1e-14));
}

TEST_CASE("fidelity_report endpoints") {
  std::vector<cdouble> e0{1.0, 0.0}, e1{0.0, 1.0};
  const QubitState a(1, e0), b(1, e1);
  CHECK(fidelity_report(a, a) == doctest::Approx(1.0));
  CHECK(fidelity_report(a, b) == doctest::Approx(0.0));
}
