#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "ndlomb/config.hpp"
#include "ndlomb/csv.hpp"
#include "ndlomb/lsm.hpp"
#include "ndlomb/report.hpp"

using namespace ndlomb;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_bits(double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; }

ErrorCode code_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

} // namespace

TEST_CASE("sample CSV round-trips bit for bit") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  RawSamples raw;
  raw.dims = 3;
  for (int i = 0; i < 500; ++i) {
    for (int d = 0; d < 3; ++d) {
      raw.coords.push_back(u(rng) * std::pow(10.0, static_cast<int>(rng() % 30) - 15));
    }
    raw.values.push_back(i % 17 == 0 ? kNaN : u(rng));
  }
  std::stringstream io;
  csv::write_samples(io, raw);
  const auto back = csv::read_samples(io);
  REQUIRE(back.dims == 3);
  REQUIRE(back.size() == raw.size());
  for (std::size_t i = 0; i < raw.coords.size(); ++i) {
    CHECK(same_bits(back.coords[i], raw.coords[i]));
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (std::isnan(raw.values[i])) {
      CHECK(std::isnan(back.values[i]));
    } else {
      CHECK(same_bits(back.values[i], raw.values[i]));
    }
  }
}

TEST_CASE("sample CSV accepts nan in any case, only in the value column") {
  std::istringstream ok("t1,t2,value\n0,1,NaN\n\n1,0, nan \n2,2,3.5\n");
  const auto raw = csv::read_samples(ok);
  CHECK(raw.size() == 3);
  CHECK(std::isnan(raw.values[0]));
  CHECK(std::isnan(raw.values[1]));
  CHECK(validate_samples(raw).size() == 1);

  std::istringstream bad_coord("t1,value\nnan,1\n");
  CHECK(code_of([&] { csv::read_samples(bad_coord); }) == ErrorCode::Parse);
  std::istringstream bad_header("x,value\n1,1\n");
  CHECK(code_of([&] { csv::read_samples(bad_header); }) == ErrorCode::Parse);
  std::istringstream bad_cols("t1,value\n1,2,3\n");
  CHECK(code_of([&] { csv::read_samples(bad_cols); }) == ErrorCode::Parse);
  std::istringstream bad_num("t1,value\n1,abc\n");
  CHECK(code_of([&] { csv::read_samples(bad_num); }) == ErrorCode::Parse);
  std::istringstream empty("");
  CHECK(code_of([&] { csv::read_samples(empty); }) == ErrorCode::Parse);
  CHECK(code_of([] { csv::read_samples(std::string("/nonexistent/x.csv")); }) == ErrorCode::Io);
}

TEST_CASE("spectrum CSV round-trips and leaves absent FAP empty") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  RawSamples raw;
  raw.dims = 2;
  for (int i = 0; i < 60; ++i) {
    raw.coords.insert(raw.coords.end(), {u(rng), u(rng)});
    raw.values.push_back(u(rng));
  }
  const auto s = validate_samples(raw);
  const AxisRange r[] = {{-1.0, 1.0}, {0.0, 2.0}};
  const double steps[] = {0.5, 0.25};
  const auto spec = analyze(s, build_regular_grid(r, steps), NoiseSpec::make(1.0, 0.05));
  std::stringstream io;
  csv::write_spectrum(io, spec);
  const auto header = io.str().substr(0, io.str().find('\n'));
  CHECK(header == "f1,f2,tau_star,a,b,amplitude,phase,psd,prob,fap");
  const auto back = csv::read_spectrum(io);
  REQUIRE(back.points.size() == spec.points.size());
  CHECK(back.fap_available);
  for (std::size_t k = 0; k < spec.points.size(); ++k) {
    const auto &p = spec.points[k];
    const auto &q = back.points[k];
    CHECK(same_bits(q.freq[0], p.freq[0]));
    CHECK(same_bits(q.a, p.a));
    CHECK(same_bits(q.b, p.b));
    CHECK(same_bits(q.tau_star, p.tau_star));
    CHECK(same_bits(q.psd, p.psd));
    CHECK(same_bits(q.fap, p.fap));
  }

  const auto small = validate_samples({{{0.0}, 1.0}, {{0.4}, 2.0}, {{0.9}, -1.0}});
  const auto g = FrequencyGrid::from_points(1, {0.5}, FrequencyConvention::Ordinary);
  std::stringstream io2;
  csv::write_spectrum(io2, analyze(small, g, NoiseSpec::make(1.0, 0.05)));
  CHECK(io2.str().substr(io2.str().size() - 3) == ",,\n");
  const auto back2 = csv::read_spectrum(io2);
  CHECK_FALSE(back2.fap_available);
  CHECK(std::isnan(back2.points[0].fap));
}

TEST_CASE("spectrum CSV writes ordinary frequencies for angular grids") {
  const auto s = validate_samples({{{0.0}, 1.0}, {{0.4}, 2.0}, {{0.9}, -1.0}, {{1.3}, 0.0}});
  const auto g = FrequencyGrid::from_points(1, {two_pi * 0.75}, FrequencyConvention::Angular);
  std::stringstream io;
  csv::write_spectrum(io, analyze(s, g, NoiseSpec::make(1.0, 0.05)));
  const auto back = csv::read_spectrum(io);
  CHECK_THAT(back.points[0].freq[0], Catch::Matchers::WithinRel(0.75, 1e-15));
}

TEST_CASE("gridded field CSV round-trips") {
  const auto f = make_field({3, 2}, {-1.0, 0.5}, {0.1, 0.25}, {1.0, kNaN, 3.0, 4.0, 5.0, 6.5});
  std::stringstream io;
  csv::write_field(io, f);
  const auto text = io.str();
  CHECK(text.rfind("# origin=-1,0.5\n# spacing=0.10000000000000001,0.25\n# shape=3,2\ni1,i2,value\n",
                   0) == 0);
  const auto back = csv::read_field(io);
  CHECK(back.shape == f.shape);
  CHECK(back.origin == f.origin);
  CHECK(back.spacing == f.spacing);
  CHECK(back.n_zero == 1);
  CHECK(back.values[5] == 6.5);

  std::istringstream sparse("i1,value\n0,1\n3,2\n");
  const auto s = csv::read_field(sparse);
  CHECK(s.shape == std::vector<std::size_t>{4});
  CHECK(s.n_zero == 2);
  std::istringstream outside("# shape=2\ni1,value\n5,1\n");
  CHECK(code_of([&] { csv::read_field(outside); }) == ErrorCode::BadInput);
}

TEST_CASE("flag value parsers") {
  const auto g = config::parse_grid("-10:0.025:10, 0:0.5:1");
  REQUIRE(g.ranges.size() == 2);
  CHECK(g.ranges[0].min == -10.0);
  CHECK(g.steps[0] == 0.025);
  CHECK(g.ranges[1].max == 1.0);
  CHECK(code_of([] { config::parse_grid("0:1"); }) == ErrorCode::Parse);

  const auto c = config::parse_components("3.25,6.32:1:0.785|1,2:0.5:0");
  REQUIRE(c.size() == 2);
  CHECK(c[0].freq == std::vector<double>{3.25, 6.32});
  CHECK(c[1].amplitude == 0.5);
  CHECK(config::parse_components("").empty());
  CHECK(config::parse_components("  ").empty());
  CHECK(code_of([] { config::parse_components("1:2"); }) == ErrorCode::Parse);
  CHECK(code_of([] { config::parse_components("x:1:0"); }) == ErrorCode::Parse);

  const auto gaps = config::parse_gaps("1:0.2:0.4;2:-1:0");
  REQUIRE(gaps.size() == 2);
  CHECK(gaps[1].axis == 1);
  CHECK(code_of([] { config::parse_gaps("0:1:2"); }) == ErrorCode::Parse);
}

TEST_CASE("generate config parses and echoes identically") {
  std::istringstream in("# demo\npattern = jittered\nranges=-1:1,0:2\nsteps=0.1,0.2\n"
                        "jitter=0.3\ngaps=2:0.5:0.7\nmissing_fraction=0.25\n"
                        "components=1,2:1:0.5|0.5,0.25:2:-1\nsigma=0.1\nseed=77\n");
  const auto spec = config::parse(in);
  CHECK(spec.seed == 77);
  CHECK(spec.sigma == 0.1);
  CHECK(spec.sampling.missing_fraction == 0.25);
  CHECK(std::get<JitteredPattern>(spec.sampling.pattern).jitter == 0.3);
  REQUIRE(spec.signal.components.size() == 2);

  const auto text = config::to_string(spec);
  std::istringstream again(text);
  const auto spec2 = config::parse(again);
  CHECK(config::to_string(spec2) == text);

  const auto a = generate_rows(spec.signal, spec.sampling, spec.sigma, spec.seed);
  const auto b = generate_rows(spec2.signal, spec2.sampling, spec2.sigma, spec2.seed);
  CHECK(a.coords == b.coords);

  for (const char *name : {"simple-wave", "traveling-wave", "noise-only", "sinus-window"}) {
    const auto p = presets::by_name(name);
    std::istringstream echo(config::to_string(p));
    CHECK(config::to_string(config::parse(echo)) == config::to_string(p));
  }
}

TEST_CASE("config errors") {
  std::istringstream unknown("ranges=0:1\nsteps=0.1\ncolour=blue\n");
  CHECK(code_of([&] { config::parse(unknown); }) == ErrorCode::Parse);
  std::istringstream twice("ranges=0:1\nranges=0:2\n");
  CHECK(code_of([&] { config::parse(twice); }) == ErrorCode::Parse);
  std::istringstream missing("pattern=regular\n");
  CHECK(code_of([&] { config::parse(missing); }) == ErrorCode::Parse);
  std::istringstream junk("just words\n");
  CHECK(code_of([&] { config::parse(junk); }) == ErrorCode::Parse);
  CHECK(code_of([] { presets::by_name("nope"); }) == ErrorCode::BadInput);
}

TEST_CASE("sinus-window preset has N equidistant points over the window") {
  const auto spec = presets::sinus_window();
  const auto rows = generate_rows(spec.signal, spec.sampling, 0.0, 0);
  const auto direct = sinus_window_rows(presets::sinus_window_length, 1.0, 100);
  REQUIRE(rows.size() == 100);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK_THAT(rows.coords[i], Catch::Matchers::WithinAbs(direct.coords[i], 1e-12));
    CHECK_THAT(rows.values[i], Catch::Matchers::WithinAbs(direct.values[i], 1e-12));
  }
}

TEST_CASE("report lists peaks without mirror duplicates") {
  const auto s = generate(SignalSpec{{{{2.0}, 1.0, 0.3}}},
                          SamplingSpec{UniformRandomPattern{{{0.0, 4.0}}, 120}, {}, 0.0}, 0.2, 3);
  const AxisRange r[] = {{-4.0, 4.0}};
  const double steps[] = {0.05};
  const auto spec = analyze(s, build_regular_grid(r, steps), NoiseSpec::make(0.2, 0.05));
  const auto peaks = top_peaks(spec, 3);
  REQUIRE(peaks.size() == 3);
  CHECK(std::abs(std::abs(spec.points[peaks[0]].freq[0]) - 2.0) < 1e-9);
  CHECK(std::abs(spec.points[peaks[1]].freq[0] + spec.points[peaks[0]].freq[0]) > 1e-9);

  ReportContext ctx;
  ctx.n_samples = s.size();
  ctx.noise = NoiseSpec::make(0.2, 0.05);
  ctx.window = 4.0;
  const auto text = render_report(spec, ctx);
  CHECK(text.find("## Peaks") != std::string::npos);
  CHECK(text.find("delta_A") != std::string::npos);
  CHECK(text.find("eps_LS") != std::string::npos);
}
