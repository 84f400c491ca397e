#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ndlomb/sweep.hpp"

using namespace ndlomb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("noiseless sweep: least squares exact, demodulation biased and flat") {
  SweepConfig cfg;
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 2 * cfg.sizes.size());
  double first_omd = 0;
  for (const auto &r : rows) {
    if (r.method == SweepMethod::Lsm) {
      CHECK(std::abs(r.a_error) < 1e-9);
      CHECK(std::abs(r.b_error) < 1e-9);
    } else {
      if (r.n == cfg.sizes.front()) {
        first_omd = r.a_error;
      }
      CHECK(std::abs(r.a_error) > 0.01);
      CHECK(std::abs(r.a_error) < 0.2);
      CHECK(std::abs(r.a_error - first_omd) < 0.1 * std::abs(first_omd));
    }
  }
}

TEST_CASE("single-N sweep has one row per method and replicate") {
  SweepConfig cfg;
  cfg.sizes = {64};
  cfg.replicates = 5;
  cfg.sigma = 0.5;
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 10);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].n == 64);
    CHECK(rows[i].replicate == i / 2);
    CHECK(rows[i].method == (i % 2 == 0 ? SweepMethod::Lsm : SweepMethod::Omd));
  }
}

TEST_CASE("sweep output does not depend on the thread count") {
  SweepConfig cfg;
  cfg.replicates = 20;
  cfg.sigma = 1.0;
  cfg.seed = 5;
  const auto serial = run_sweep(cfg);
  cfg.threads = 3;
  const auto threaded = run_sweep(cfg);
  REQUIRE(serial.size() == threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].a_error == threaded[i].a_error);
    CHECK(serial[i].b_error == threaded[i].b_error);
  }
}

TEST_CASE("sweep summary and slope fit") {
  SweepConfig cfg;
  cfg.sizes = {100, 400};
  cfg.replicates = 3;
  const auto s = summarize(run_sweep(cfg));
  REQUIRE(s.size() == 4);
  CHECK(s[0].n == 100);
  CHECK(s[0].method == SweepMethod::Lsm);
  CHECK(s[1].method == SweepMethod::Omd);

  const std::vector<double> x{1, 4, 16, 64};
  const std::vector<double> y{2, 1, 0.5, 0.25};
  CHECK_THAT(loglog_slope(x, y), WithinAbs(-0.5, 1e-12));
  const std::vector<double> same{2, 2};
  CHECK_THROWS_AS(loglog_slope(same, same), Error);
}

TEST_CASE("sweep rejects bad configurations") {
  SweepConfig cfg;
  cfg.sizes = {};
  CHECK_THROWS_AS(run_sweep(cfg), Error);
  cfg.sizes = {2};
  CHECK_THROWS_AS(run_sweep(cfg), Error);
  cfg.sizes = {10};
  cfg.sigma = -1;
  CHECK_THROWS_AS(run_sweep(cfg), Error);
}
