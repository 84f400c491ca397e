#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#ifdef NDLOMB_HAVE_EIGEN
#include <Eigen/Dense>
#endif

#include "ndlomb/lsm.hpp"
#include "ndlomb/synth.hpp"

using namespace ndlomb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

SampleSet random_samples(std::mt19937_64 &rng, std::size_t dims, std::size_t n,
                         double extent = 1.0) {
  std::uniform_real_distribution<double> u(-extent, extent);
  std::normal_distribution<double> g(0.0, 1.0);
  RawSamples raw;
  raw.dims = dims;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dims; ++d) {
      raw.coords.push_back(u(rng));
    }
    raw.values.push_back(g(rng));
  }
  return validate_samples(raw);
}

double orthogonality_sum(const SampleSet &s, std::span<const double> w, double tau) {
  double acc = 0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double x = dot(w, s.coord(n)) - tau;
    acc += std::sin(x) * std::cos(x);
  }
  return acc;
}

double angle_distance(double x, double y) { return std::abs(wrap_angle(x - y)); }

} // namespace

TEST_CASE("tau_star is 0 or pi/2 for sampling symmetric about the origin") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  RawSamples raw;
  raw.dims = 2;
  for (int i = 0; i < 40; ++i) {
    const double x = u(rng), y = u(rng) - 1.5;
    raw.coords.insert(raw.coords.end(), {x, y, -x, -y});
    raw.values.insert(raw.values.end(), {1.0, 2.0});
  }
  const auto s = validate_samples(raw);
  for (double f : {0.3, 1.7, 5.2}) {
    const double w[] = {two_pi * f, -two_pi * 0.7 * f};
    CHECK_THAT(std::sin(2.0 * tau_star(s, w)), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("tau_star of a dense window is half the window phase") {
  const double window = 2.0;
  const std::size_t n = 20001;
  RawSamples raw;
  raw.dims = 1;
  for (std::size_t i = 0; i < n; ++i) {
    raw.coords.push_back(window * static_cast<double>(i) / static_cast<double>(n - 1));
    raw.values.push_back(0.0);
  }
  const auto s = validate_samples(raw);
  for (double omega : {0.1, 0.4, 0.7}) {
    const double w[] = {omega};
    CHECK_THAT(tau_star(s, w), WithinAbs(omega * window / 2.0, 1e-6));
  }
}

TEST_CASE("tau_star satisfies orthogonality on random 2-D sampling") {
  std::mt19937_64 rng(2);
  const auto s = random_samples(rng, 2, 50);
  const double w[] = {two_pi * 3.25, two_pi * 6.32};
  const double tau = tau_star(s, w);
  CHECK(std::abs(orthogonality_sum(s, w, tau)) < 1e-9 * 50);
  CHECK(tau > -pi / 2);
  CHECK(tau <= pi / 2);
}

TEST_CASE("coeffs of zero data are zero") {
  std::mt19937_64 rng(3);
  const auto s = random_samples(rng, 2, 30).with_values(std::vector<double>(30, 0.0));
  const double w[] = {1.3, -0.4};
  const auto c = coeffs(s, w, tau_star(s, w));
  CHECK(c.a == 0.0);
  CHECK(c.b == 0.0);
  CHECK_FALSE(c.degenerate());
}

TEST_CASE("coeffs match the normal-equation oracle on a noiseless signal") {
  std::mt19937_64 rng(4);
  auto s = random_samples(rng, 3, 200, 2.0);
  const double w[] = {1.1, -2.3, 0.7};
  std::vector<double> v(s.size());
  for (std::size_t n = 0; n < s.size(); ++n) {
    v[n] = 2.5 * std::cos(dot(w, s.coord(n)) - 0.3);
  }
  s = s.with_values(v);
  const double tau = tau_star(s, w);
  const auto c = coeffs(s, w, tau).checked();
  const auto u = unshift(c.a, c.b, tau);
  const auto o = lsq_fit_oracle(s, w);
  CHECK_THAT(u.a, WithinRel(o.a, 1e-9));
  CHECK_THAT(u.b, WithinRel(o.b, 1e-9));
  CHECK_THAT(u.a, WithinRel(2.5 * std::cos(0.3), 1e-12));
  CHECK_THAT(u.b, WithinRel(2.5 * std::sin(0.3), 1e-12));

  double rss = 0, ss = 0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double x = dot(w, s.coord(n));
    const double r = v[n] - o.a * std::cos(x) - o.b * std::sin(x);
    rss += r * r;
    ss += v[n] * v[n];
  }
  CHECK(rss < 1e-18 * ss);
}

TEST_CASE("amplitude_phase identities") {
  auto r = amplitude_phase(1, 0);
  CHECK(r.amplitude == 1.0);
  CHECK(r.phase == 0.0);
  r = amplitude_phase(0, 1);
  CHECK(r.amplitude == 1.0);
  CHECK_THAT(r.phase, WithinAbs(pi / 2, 1e-15));
  r = amplitude_phase(3, 4);
  CHECK(r.amplitude == 5.0);
  CHECK_THAT(r.phase, WithinAbs(0.927295218001612, 1e-12));
  r = amplitude_phase(-1, 0);
  CHECK_THAT(r.phase, WithinAbs(pi, 1e-15));
}

TEST_CASE("confidence intervals") {
  const auto zero = confidence_intervals(NoiseSpec::make(0.0, 0.05), 100, 1.0);
  CHECK(zero.delta_ab == 0.0);
  CHECK(zero.delta_A == 0.0);
  CHECK(zero.delta_phi == 0.0);

  const auto ci = confidence_intervals(NoiseSpec::make(1.0, 0.05), 100, 2.0);
  CHECK_THAT(ci.delta_ab, WithinAbs(0.24955, 5e-6));
  CHECK_THAT(ci.delta_A, WithinRel(ci.delta_ab * std::sqrt(2.0), 1e-14));
  CHECK_THAT(ci.delta_phi, WithinRel(ci.delta_A / 2.0, 1e-14));

  const auto quarter = confidence_intervals(NoiseSpec::make(1.0, 0.05), 400, 2.0);
  CHECK_THAT(quarter.delta_ab, WithinRel(ci.delta_ab / 2.0, 1e-14));

  const auto flat = confidence_intervals(NoiseSpec::make(1.0, 0.05), 100, 0.0);
  CHECK(std::isinf(flat.delta_phi));
  CHECK_THROWS_AS(confidence_intervals(NoiseSpec::make(1.0, 0.05), 0, 1.0), Error);
}

TEST_CASE("oracle equivalence and orthogonality over random cases") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> uw(-20.0, 20.0);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dims = 1 + trial % 3;
    const std::size_t n = 8 + rng() % 120;
    const auto s = random_samples(rng, dims, n);
    std::vector<double> w(dims);
    for (auto &x : w) {
      x = uw(rng);
    }
    const double tau = tau_star(s, w);
    double max_phase = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      max_phase = std::max(max_phase, std::abs(dot(w, s.coord(i))));
    }
    CHECK(std::abs(orthogonality_sum(s, w, tau)) <= 1e-9 * static_cast<double>(n) * max_phase);

    const auto c = coeffs(s, w, tau);
    REQUIRE_FALSE(c.degenerate());
    const auto u = unshift(c.a, c.b, tau);
    const auto o = lsq_fit_oracle(s, w);
    const auto ap = amplitude_phase(u.a, u.b);
    const auto op = amplitude_phase(o.a, o.b);
    CHECK_THAT(ap.amplitude, WithinRel(op.amplitude, 1e-9));
    CHECK(angle_distance(ap.phase, op.phase) < 1e-9);
    ++checked;
  }
  CHECK(checked == 1000);
}

#ifdef NDLOMB_HAVE_EIGEN
TEST_CASE("oracle agrees with a QR least-squares solve") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uw(-8.0, 8.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dims = 1 + trial % 3;
    const auto s = random_samples(rng, dims, 60);
    std::vector<double> w(dims);
    for (auto &x : w) {
      x = uw(rng);
    }
    Eigen::MatrixXd design(s.size(), 2);
    Eigen::VectorXd y(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) {
      const double x = dot(w, s.coord(n));
      design(n, 0) = std::cos(x);
      design(n, 1) = std::sin(x);
      y(n) = s.values()[n];
    }
    const Eigen::Vector2d sol = design.colPivHouseholderQr().solve(y);
    const auto o = lsq_fit_oracle(s, w);
    CHECK_THAT(o.a, WithinAbs(sol(0), 1e-9 * (1.0 + std::abs(sol(0)))));
    CHECK_THAT(o.b, WithinAbs(sol(1), 1e-9 * (1.0 + std::abs(sol(1)))));
  }
}
#endif

TEST_CASE("oracle reports singular sampling") {
  const auto s = validate_samples({{{0.0, 1.0}, 1.0}, {{1.0, 0.0}, 2.0}});
  const double w[] = {0.5, 0.5}; // same phase for both points
  try {
    lsq_fit_oracle(s, w);
    FAIL("expected SingularSystem");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::SingularSystem);
  }
}

TEST_CASE("zero frequency: cosine term is the mean, sine term degenerate") {
  std::mt19937_64 rng(6);
  const auto s = random_samples(rng, 2, 40);
  const double w[] = {0.0, 0.0};
  const double tau = tau_star(s, w);
  CHECK(tau == 0.0);
  const auto c = coeffs(s, w, tau);
  CHECK(c.sin_degenerate);
  CHECK_FALSE(c.cos_degenerate);
  CHECK(c.b == 0.0);
  CHECK_THAT(c.a, WithinAbs(moments(s.values()).mean, 1e-14));
  try {
    (void)c.checked();
    FAIL("expected DegenerateDenominator");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::DegenerateDenominator);
  }

  const auto grid = FrequencyGrid::from_points(2, {0.0, 0.0, 1.0, 2.0},
                                               FrequencyConvention::Ordinary);
  const auto spec = analyze(s, grid, NoiseSpec::make(1.0, 0.05));
  CHECK(spec.points[0].sin_degenerate);
  CHECK_FALSE(spec.points[1].sin_degenerate);
  CHECK(spec.points[0].psd >= 0.0);
}

TEST_CASE("translation leaves amplitude and psd unchanged and rotates phase") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dims = 1 + trial % 3;
    const auto s = random_samples(rng, dims, 64);
    std::vector<double> w(dims), delta(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      w[d] = 3.0 * u(rng);
      delta[d] = u(rng);
    }
    const auto t = s.translated(delta);
    const auto o1 = lsq_fit_oracle(s, w);
    const auto o2 = lsq_fit_oracle(t, w);
    const auto p1 = amplitude_phase(o1.a, o1.b);
    const auto p2 = amplitude_phase(o2.a, o2.b);
    CHECK_THAT(p2.amplitude, WithinRel(p1.amplitude, 1e-9));
    // a cos(x) + b sin(x) = A cos(x - phi); x -> x + w.delta shifts phi by w.delta.
    CHECK(angle_distance(p2.phase, p1.phase + dot(w, delta)) < 1e-9);

    const auto g = FrequencyGrid::from_points(dims, w, FrequencyConvention::Angular);
    const auto noise = NoiseSpec::make(1.0, 0.05);
    const auto a1 = analyze(s, g, noise).points[0];
    const auto a2 = analyze(t, g, noise).points[0];
    CHECK_THAT(a2.psd, WithinRel(a1.psd, 1e-9));
    CHECK_THAT(a2.amplitude, WithinRel(a1.amplitude, 1e-9));
    CHECK(angle_distance(signal_phase(a2), signal_phase(a1) - dot(w, delta)) < 1e-9);
  }
}

TEST_CASE("1-D path reproduces the classic time-shift formulation") {
  std::mt19937_64 rng(8);
  const auto s = random_samples(rng, 1, 150, 10.0);
  for (double omega : {0.37, 1.9, 4.4}) {
    // Classic: tan(2 omega tau) = sum sin(2 omega t) / sum cos(2 omega t).
    double ss = 0, cc = 0;
    for (std::size_t n = 0; n < s.size(); ++n) {
      ss += std::sin(2 * omega * s.coord(n)[0]);
      cc += std::cos(2 * omega * s.coord(n)[0]);
    }
    const double time_shift = std::atan2(ss, cc) / (2 * omega);
    double yc = 0, c2 = 0, ys = 0, s2 = 0;
    for (std::size_t n = 0; n < s.size(); ++n) {
      const double x = omega * (s.coord(n)[0] - time_shift);
      yc += s.values()[n] * std::cos(x);
      c2 += std::cos(x) * std::cos(x);
      ys += s.values()[n] * std::sin(x);
      s2 += std::sin(x) * std::sin(x);
    }
    const double w[] = {omega};
    const double tau = tau_star(s, w);
    CHECK_THAT(tau, WithinRel(omega * time_shift, 1e-12));
    const auto c = coeffs(s, w, tau);
    CHECK_THAT(c.a, WithinRel(yc / c2, 1e-12));
    CHECK_THAT(c.b, WithinRel(ys / s2, 1e-12));
  }
}

TEST_CASE("classical normalisation differs by sqrt of the basis norms") {
  std::mt19937_64 rng(9);
  const auto s = random_samples(rng, 1, 80, 5.0);
  const double w[] = {1.3};
  const double tau = tau_star(s, w);
  const auto c = coeffs(s, w, tau);
  const auto k = classical_coefficients(s, w, tau);
  double c2 = 0, s2 = 0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double x = w[0] * s.coord(n)[0] - tau;
    c2 += std::cos(x) * std::cos(x);
    s2 += std::sin(x) * std::sin(x);
  }
  const double half_n = static_cast<double>(s.size()) / 2.0;
  CHECK_THAT(k.a, WithinRel(c.a * std::sqrt(c2 / half_n), 1e-12));
  CHECK_THAT(k.b, WithinRel(c.b * std::sqrt(s2 / half_n), 1e-12));
}

TEST_CASE("analyze matches per-frequency evaluation and is thread-count independent") {
  std::mt19937_64 rng(10);
  const auto s = random_samples(rng, 2, 300);
  const AxisRange r[] = {{-4.0, 4.0}, {-3.0, 3.0}};
  const double steps[] = {0.25, 0.2};
  const auto grid = build_regular_grid(r, steps);
  const auto noise = NoiseSpec::make(1.0, 0.05);

  const auto base = analyze(s, grid, noise);
  AnalyzeOptions threaded;
  threaded.threads = 4;
  const auto par = analyze(s, grid, noise, threaded);
  AnalyzeOptions direct;
  direct.separable = false;
  const auto dir = analyze(s, grid, noise, direct);

  REQUIRE(base.points.size() == grid.size());
  const double var = moments(s.values()).variance;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto &p = base.points[k];
    CHECK(p.psd == par.points[k].psd);
    CHECK(p.a == par.points[k].a);
    CHECK(p.tau_star == par.points[k].tau_star);
    CHECK_THAT(p.psd, WithinAbs(dir.points[k].psd, 1e-12));

    const auto w = grid.omega(k);
    const double tau = tau_star(s, w);
    CHECK(angle_distance(2 * p.tau_star, 2 * tau) < 1e-9);
    const auto c = coeffs(s, w, p.tau_star);
    CHECK_THAT(p.a, WithinAbs(c.a, 1e-10));
    CHECK_THAT(p.b, WithinAbs(c.b, 1e-10));
    CHECK_THAT(p.amplitude * p.amplitude, WithinAbs(p.a * p.a + p.b * p.b, 1e-12));
    CHECK_THAT(p.psd, WithinAbs(standardized_psd(c.a, c.b, s.size(), var), 1e-10));
    CHECK(p.psd >= 0.0);
    CHECK(p.psd <= 1.0);
    CHECK(p.prob_exceed >= 0.0);
    CHECK(p.prob_exceed <= 1.0);
    CHECK(p.fap >= 0.0);
    CHECK(p.fap <= 1.0);
    CHECK(p.fap >= p.prob_exceed);
  }
}

TEST_CASE("analyze of a 1-D signal equals the same data embedded in 2-D") {
  std::mt19937_64 rng(12);
  const auto s1 = random_samples(rng, 1, 100, 4.0);
  RawSamples raw;
  raw.dims = 2;
  for (std::size_t n = 0; n < s1.size(); ++n) {
    raw.coords.insert(raw.coords.end(), {s1.coord(n)[0], 0.0});
    raw.values.push_back(s1.values()[n]);
  }
  const auto s2 = validate_samples(raw);
  const AxisRange r1[] = {{0.1, 2.0}};
  const double st1[] = {0.1};
  const auto g1 = build_regular_grid(r1, st1);
  const auto g2 = FrequencyGrid::cartesian({g1.axes()[0], {0.0}}, FrequencyConvention::Ordinary);
  const auto noise = NoiseSpec::make(1.0, 0.05);
  const auto a = analyze(s1, g1, noise);
  const auto b = analyze(s2, g2, noise);
  for (std::size_t k = 0; k < g1.size(); ++k) {
    CHECK_THAT(b.points[k].psd, WithinAbs(a.points[k].psd, 1e-12));
    CHECK_THAT(b.points[k].a, WithinAbs(a.points[k].a, 1e-12));
  }
}

TEST_CASE("analyze handles small N and M override") {
  const auto s3 = validate_samples({{{0.0}, 1.0}, {{0.3}, -1.0}, {{0.7}, 0.5}});
  const auto g = FrequencyGrid::from_points(1, {0.5, 1.0}, FrequencyConvention::Ordinary);
  const auto noise = NoiseSpec::make(1.0, 0.05);
  const auto spec = analyze(s3, g, noise);
  CHECK_FALSE(spec.fap_available);
  CHECK_FALSE(spec.warnings.empty());
  CHECK(std::isnan(spec.points[0].fap));

  std::mt19937_64 rng(13);
  const auto s = random_samples(rng, 1, 50);
  AnalyzeOptions one;
  one.m_indep = 1.0;
  const auto m1 = analyze(s, g, noise, one);
  for (const auto &p : m1.points) {
    CHECK_THAT(p.fap, WithinAbs(p.prob_exceed, 1e-15));
  }
  CHECK_THROWS_AS(analyze(s3.with_values({1.0, 1.0, 1.0}), g, noise), Error);
  const auto g2 = FrequencyGrid::from_points(2, {0.5, 1.0}, FrequencyConvention::Ordinary);
  CHECK_THROWS_AS(analyze(s, g2, noise), Error);
}

TEST_CASE("simple-wave dataset fits a unit amplitude at the true frequency") {
  const auto s = generate(presets::simple_wave_signal(), presets::simple_wave_sampling(), 0.0,
                          presets::simple_wave_seed);
  const double w[] = {two_pi * 3.25, two_pi * 6.32};
  const auto c = coeffs(s, w, tau_star(s, w));
  CHECK_THAT(amplitude_phase(c.a, c.b).amplitude, WithinRel(1.0, 1e-9));
}
