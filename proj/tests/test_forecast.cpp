#include "doctest.h"
#include "support.hpp"

#include "hodmd/error.hpp"
#include "hodmd/forecast.hpp"
#include "hodmd/mode_select.hpp"

#include <cmath>
#include <numbers>

using namespace hodmd;
using hodmd::test::Gen;

namespace {

DmdSpectrum constant_one() {
  DmdSpectrum s;
  s.modes = Eigen::MatrixXcd::Ones(1, 1);
  s.amplitudes = Eigen::VectorXcd::Ones(1);
  s.growth_rates = Eigen::VectorXd::Zero(1);
  s.frequencies = Eigen::VectorXd::Zero(1);
  s.offsets = Eigen::VectorXd::Zero(1);
  s.num_snapshots = 5;
  return s;
}

}  // namespace

TEST_SUITE("forecast") {

TEST_CASE("evaluate_expansion examples") {
  const Eigen::MatrixXd one = evaluate_expansion(constant_one(), 0, 20);
  CHECK((one.array() == 1.0).all());

  SynthSpec spec;
  spec.channels = 1;
  spec.snapshots = 16;
  spec.mode_pairs = {{1.0 / 8.0, 0.0, 0.5, 0.0, {1.0}}};
  const auto s = spectrum_from_synth(spec);
  const Eigen::MatrixXd v = evaluate_expansion(s, 0, 16);
  for (Eigen::Index k = 0; k < 16; ++k) CHECK(std::abs(v(0, k) - std::cos(2 * std::numbers::pi * k / 8.0)) < 1e-14);

  auto offset = constant_one();
  offset.offsets[0] = 4.5;
  CHECK(evaluate_expansion(offset, 3, 1)(0, 0) == 5.5);
}

TEST_CASE("expansion agrees with the direct oracle and with synth_generate") {
  Gen gen(21);
  for (int trial = 0; trial < 5; ++trial) {
    const auto spec = gen.synth(3, 3, 300);
    const auto s = spectrum_from_synth(spec);
    const Eigen::MatrixXd v = evaluate_expansion(s, 0, spec.snapshots);
    CHECK((v - test::expansion_oracle(s, 0, spec.snapshots)).norm() <= 1e-12 * v.norm());
    CHECK((v - synth_generate(spec).values).norm() <= 1e-10 * v.norm());
  }
}

TEST_CASE("recovered spectrum reconstructs its training data") {
  const auto spec = test::three_pair_spec(1200);
  const auto grid = center(synth_generate(spec));
  const auto s = hodmd::hodmd(grid, {.d = 30, .eps1 = 1e-10});
  const Eigen::MatrixXd rec = evaluate_expansion(s, 0, grid.snapshots());
  CHECK((rec - uncenter(grid.values, *grid.offsets)).norm() <= 1e-8 * synth_generate(spec).values.norm());
}

TEST_CASE("conjugate-closure violation is detected") {
  auto s = constant_one();
  s.frequencies[0] = 0.3;
  CHECK_THROWS_AS(evaluate_expansion(s, 0, 10), ConjugateClosureError);
  s.growth_rates[0] = 1e3;
  s.frequencies[0] = 0.0;
  CHECK_THROWS_AS(evaluate_expansion(s, 0, 10), NumericalError);
}

TEST_CASE("forecast window and horizon split") {
  auto s = spectrum_from_synth(test::three_pair_spec(4027));
  s.t0 = 1000.0;
  const auto f = forecast(s, 432);
  CHECK(f.values.cols() == 432);
  CHECK(f.times.size() == 432);
  CHECK(f.times.front() == 1000.0 + 4027 * 600.0);
  CHECK(f.times[1] - f.times[0] == 600.0);
  CHECK(f.warnings.empty());
  CHECK(f.spectrum_id.find("M=6") != std::string::npos);

  const auto rf = reconstruct_and_forecast(s, 432);
  CHECK(rf.horizon_split == 4027);
  CHECK(rf.values.cols() == 4027 + 432);
  CHECK(rf.values.rightCols(432) == f.values);

  // Pure oscillation stays within the triangle-inequality bound.
  CHECK(f.values.cwiseAbs().maxCoeff() <= s.amplitudes.cwiseAbs().sum());
  CHECK_THROWS_AS(forecast(s, 0), RangeError);
}

TEST_CASE("forecast of noiseless synthetic data beyond the window") {
  const auto spec = test::three_pair_spec(2000);
  const auto grid = center(synth_generate(spec));
  const auto s = hodmd::hodmd(grid, {.d = 40, .eps1 = 1e-10});
  auto longer = spec;
  longer.snapshots = 2000 + 432;
  const Eigen::MatrixXd truth = synth_generate(longer).values.rightCols(432);
  const auto f = forecast(s, 432);
  CHECK((rrmse(f.values, truth).array() < 0.1).all());
}

TEST_CASE("divergence is a warning") {
  auto s = constant_one();
  s.growth_rates[0] = 0.01;
  const auto f = forecast(s, 432);
  REQUIRE(f.warnings.size() == 1);
  CHECK(f.warnings[0].find("divergence") != std::string::npos);
  s.growth_rates[0] = std::log(10.0) / 432.0 * 0.999;
  CHECK(forecast(s, 432).warnings.empty());
}

TEST_CASE("rmse and rrmse") {
  Gen gen(22);
  const Eigen::MatrixXd a = gen.matrix(3, 10);
  CHECK(rmse(a, a).isZero());
  CHECK(rrmse(a, a).isZero());
  CHECK((rmse(Eigen::MatrixXd(a.array() + 1.0), a).array() - 1.0).abs().maxCoeff() < 1e-14);
  CHECK((rrmse(Eigen::MatrixXd(1.1 * a), a).array() - 10.0).abs().maxCoeff() < 1e-12);
  CHECK((rrmse(Eigen::MatrixXd::Zero(3, 10), a).array() == 100.0).all());

  Eigen::MatrixXd actual(1, 2);
  actual << 3, 4;
  CHECK(rmse(Eigen::MatrixXd::Zero(1, 2), actual)[0] == doctest::Approx(std::sqrt(25.0 / 2.0)));
  CHECK(rmse(Eigen::MatrixXd::Zero(1, 2), actual)[0] == doctest::Approx(3.5355).epsilon(1e-4));

  CHECK_THROWS_AS(rrmse(a, Eigen::MatrixXd::Zero(3, 10)), UndefinedMetricError);
  CHECK_THROWS_AS(rmse(a, gen.matrix(2, 10)), DimensionError);
}

}  // TEST_SUITE
