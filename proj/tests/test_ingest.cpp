#include "doctest.h"
#include "support.hpp"

#include "hodmd/error.hpp"
#include "hodmd/ingest.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace hodmd;
using hodmd::test::Gen;

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

TimeSeriesGrid parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

TimeSeriesGrid row_grid(std::initializer_list<double> values) {
  Eigen::MatrixXd m(1, static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double v : values) m(0, k++) = v;
  return test::from_matrix(m, 600.0);
}


}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("load_csv reads epoch rows and keeps channel order") {
  const auto g = parse("timestamp,a\n0,1\n600,2\n1200,3\n");
  CHECK(g.channels() == 1);
  CHECK(g.snapshots() == 3);
  CHECK(g.dt == 600.0);
  CHECK(g.t0 == 0.0);
  CHECK(g.values(0, 2) == 3.0);
  CHECK(g.channel_names == std::vector<std::string>{"a"});
}

TEST_CASE("load_csv of a 3-column, 4459-row file at 600 s") {
  std::ostringstream text;
  text << "timestamp,north,mid,south\n";
  for (int k = 0; k < 4459; ++k) text << 1643068800 + 600 * k << ',' << k << ',' << -k << ",0.5\n";
  const auto path = std::filesystem::temp_directory_path() / "hodmd_ingest_4459.csv";
  {
    std::ofstream f(path);
    f << text.str();
  }
  const auto g = load_csv(path);
  std::filesystem::remove(path);
  CHECK(g.channels() == 3);
  CHECK(g.snapshots() == 4459);
  CHECK(g.dt == 600.0);
  CHECK(g.channel_names[1] == "mid");
}

TEST_CASE("load_csv rejects malformed files") {
  CHECK_THROWS_AS(parse("timestamp,a\n0,1\n600,2\n300,3\n"), FormatError);
  CHECK_THROWS_AS(parse("timestamp,a\n0,1\n"), InsufficientDataError);
  CHECK_THROWS_AS(parse("timestamp,a,b\n0,1,2\n600,2\n"), FormatError);
  CHECK_THROWS_AS(parse("time,a\n0,1\n600,2\n"), FormatError);
  CHECK_THROWS_AS(parse("timestamp,a\n0,1\n600,x\n"), FormatError);
  CHECK_THROWS_AS(parse("timestamp,a\n0,1\n600,2\n1300,3\n1900,4\n"), FormatError);
  CHECK_THROWS_AS(load_csv("/nonexistent/never.csv"), FormatError);
}

TEST_CASE("load_csv tolerates jitter below 1 percent and missing cells") {
  const auto g = parse("timestamp,a,b\n0,1,\n600,NaN,2\n1203,3,3\n1800,4,4\n2400,5,5\n");
  CHECK(g.dt == 600.0);
  CHECK(std::isnan(g.values(1, 0)));
  CHECK(std::isnan(g.values(0, 1)));
  CHECK(g.has_missing());
}

TEST_CASE("ISO-8601 timestamps round-trip") {
  const auto g = parse("timestamp,a\n2022-01-25T00:00:00Z,1\n2022-01-25T00:10:00Z,2\n2022-01-25 00:20:00,3\n");
  CHECK(g.timestamp_format == TimestampFormat::Iso8601);
  CHECK(g.dt == 600.0);
  CHECK(g.t0 == 1643068800.0);
  std::ostringstream out;
  write_csv(out, g);
  const auto back = parse(out.str());
  CHECK(back.t0 == g.t0);
  CHECK(back.values == g.values);
  CHECK(out.str().find("2022-01-25T00:10:00") != std::string::npos);

  CHECK(parse_timestamp("2022-01-25T01:00:00+01:00").first == 1643068800.0);
  CHECK(parse_timestamp("1643068800").second == TimestampFormat::EpochSeconds);
  CHECK_THROWS_AS(parse_timestamp("25/01/2022"), FormatError);
}

TEST_CASE("write_csv keeps 17 significant digits and extra columns") {
  auto g = row_grid({0.1, 1.0 / 3.0});
  std::ostringstream out;
  write_csv(out, g, {{"flag", {"0", "1"}}});
  CHECK(out.str().find(",flag\n") != std::string::npos);
  CHECK(out.str().find("0.33333333333333331,1\n") != std::string::npos);
  CHECK(format_real(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_real(kNaN) == "NaN");
  CHECK_THROWS_AS(write_csv(out, g, {{"flag", {"0"}}}), DimensionError);
}

TEST_CASE("fill_gaps interpolates interior runs and extends the ends") {
  CHECK(fill_gaps(row_grid({1.0, kNaN, 3.0})).values == row_grid({1.0, 2.0, 3.0}).values);
  CHECK(fill_gaps(row_grid({kNaN, 5.0, kNaN})).values == row_grid({5.0, 5.0, 5.0}).values);

  // Two-point interpolant evaluated at the interior abscissae.
  const double x0 = 0, x1 = 3, y0 = 1, y1 = 4;
  const auto filled = fill_gaps(row_grid({1.0, kNaN, kNaN, 4.0}));
  for (int k = 0; k < 4; ++k) CHECK(filled.values(0, k) == doctest::Approx(y0 + (y1 - y0) * (k - x0) / (x1 - x0)).epsilon(1e-15));

  auto dead = row_grid({kNaN, kNaN});
  dead.channel_names = {"probe_a"};
  try {
    fill_gaps(dead);
    FAIL("expected UnrecoverableChannelError");
  } catch (const UnrecoverableChannelError& e) {
    CHECK(e.channel() == "probe_a");
  }
}

TEST_CASE("center subtracts means and accumulates offsets") {
  auto c = center(row_grid({2, 4, 6}));
  CHECK(c.values == row_grid({-2, 0, 2}).values);
  CHECK((*c.offsets)[0] == 4.0);

  c = center(row_grid({0, 0, 0}));
  CHECK(c.values.isZero());
  CHECK((*c.offsets)[0] == 0.0);

  Eigen::MatrixXd two(2, 2);
  two << 1, 1, 3, 5;
  c = center(test::from_matrix(two));
  Eigen::MatrixXd expected(2, 2);
  expected << 0, 0, -1, 1;
  CHECK(c.values == expected);
  CHECK(*c.offsets == Eigen::Vector2d(1, 4));

  auto twice = center(c);
  CHECK(*twice.offsets == Eigen::Vector2d(1, 4));
  CHECK_THROWS_AS(center(row_grid({1, kNaN})), ValidationError);
}

TEST_CASE("uncenter") {
  Eigen::MatrixXd v(1, 3);
  v << -2, 0, 2;
  CHECK(uncenter(v, Eigen::VectorXd::Constant(1, 4)) == row_grid({2, 4, 6}).values);
  Gen gen(3);
  const Eigen::MatrixXd X = gen.matrix(3, 5);
  CHECK(uncenter(X, Eigen::VectorXd::Zero(3)) == X);
  CHECK(uncenter(Eigen::MatrixXd::Zero(2, 1), Eigen::Vector2d(1, -1)) == Eigen::Vector2d(1, -1));
  CHECK_THROWS_AS(uncenter(X, Eigen::VectorXd::Zero(2)), DimensionError);
}

TEST_CASE("VPD formula") {
  CHECK(saturated_vapour_pressure(0.0) == 610.78);
  CHECK(vapour_pressure_deficit(0.0, 0.0) == 610.78);
  for (double t : {-30.0, 0.0, 12.5, 20.0, 45.0}) CHECK(vapour_pressure_deficit(t, 100.0) == 0.0);

  const double vpd = vapour_pressure_deficit(20.0, 50.0);
  CHECK(vpd == doctest::Approx(test::vpd_oracle(20.0, 50.0)).epsilon(1e-12));
  CHECK(vpd == doctest::Approx(1169.1).epsilon(1e-4));
  CHECK(saturated_vapour_pressure(20.0) == doctest::Approx(2338.2).epsilon(1e-4));

  CHECK_THROWS_AS(vapour_pressure_deficit(20.0, 100.5), RangeError);
  CHECK_THROWS_AS(vapour_pressure_deficit(20.0, -1.0), RangeError);
  CHECK_THROWS_AS(vapour_pressure_deficit(-237.3, 50.0), SingularityError);
}

TEST_CASE("vpd_transform over grids") {
  auto t = row_grid({0.0, 20.0, kNaN});
  auto rh = row_grid({0.0, 50.0, 40.0});
  const auto v = vpd_transform(t, rh);
  CHECK(v.values(0, 0) == 610.78);
  CHECK(v.values(0, 1) == doctest::Approx(test::vpd_oracle(20.0, 50.0)).epsilon(1e-12));
  CHECK(std::isnan(v.values(0, 2)));

  auto shifted = rh;
  shifted.t0 += 600.0;
  CHECK_THROWS_AS(vpd_transform(t, shifted), ClockMismatchError);
  CHECK_THROWS_AS(vpd_transform(t, row_grid({1.0, 2.0})), DimensionError);
}

TEST_CASE("synth_generate") {
  SynthSpec spec;
  spec.channels = 1;
  spec.snapshots = 8;
  spec.mode_pairs = {{1.0 / 8.0, 0.0, 0.5, 0.0, {1.0}}};
  const auto g = synth_generate(spec);
  for (int k = 0; k < 8; ++k) CHECK(g.values(0, k) == doctest::Approx(std::cos(2 * M_PI * k / 8)).epsilon(1e-15).scale(1));

  auto noisy = test::three_pair_spec(500, 0.1, 42);
  CHECK(synth_generate(noisy).values == synth_generate(noisy).values);
  auto other = noisy;
  other.seed = 43;
  CHECK(synth_generate(noisy).values != synth_generate(other).values);

  auto bad = spec;
  bad.mode_pairs[0].frequency = 0.5;
  CHECK_THROWS_AS(synth_generate(bad), NyquistError);
  bad.mode_pairs[0].frequency = 0.1;
  bad.mode_pairs[0].amplitude = 0.0;
  CHECK_THROWS_AS(synth_generate(bad), RangeError);
  bad.mode_pairs[0].amplitude = 1.0;
  bad.mode_pairs[0].channel_shape = {1.0, 2.0};
  CHECK_THROWS_AS(synth_generate(bad), DimensionError);
}

TEST_CASE("synth peaks sit at the specified frequencies") {
  SynthSpec spec = test::three_pair_spec();
  spec.mode_pairs[1].frequency = 2.0 / 144.0;
  const auto g = synth_generate(spec);
  const auto mag = test::dft_magnitude(g.values.row(0).transpose());
  // Bins 30 and 60 are exact; 4320/5814 = 0.74 falls between bins 0 and 1
  // and leaks into the first few bins.
  const auto strongest = [&](std::size_t lo, std::size_t hi, std::size_t n) {
    std::vector<std::size_t> bins;
    for (std::size_t i = lo; i < hi; ++i) bins.push_back(i);
    std::partial_sort(bins.begin(), bins.begin() + n, bins.end(), [&](auto a, auto b) { return mag[a] > mag[b]; });
    std::vector<std::size_t> top(bins.begin(), bins.begin() + n);
    std::sort(top.begin(), top.end());
    return top;
  };
  CHECK(strongest(0, 10, 1)[0] <= 1);
  CHECK(strongest(10, mag.size() / 2, 2) == std::vector<std::size_t>{30, 60});
}

TEST_CASE("slice_columns shifts the clock") {
  Gen gen(9);
  auto g = gen.grid(2, 10);
  const auto s = slice_columns(g, 4, 3);
  CHECK(s.t0 == g.time_at(4));
  CHECK(s.values == g.values.middleCols(4, 3));
  CHECK_THROWS_AS(slice_columns(g, 8, 3), DimensionError);
}

}  // TEST_SUITE
