#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "ndlomb/summation.hpp"

using namespace ndlomb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("compensated sum recovers small terms lost by naive summation") {
  CompensatedSum<double> s;
  s += 1e16;
  s += 1.0;
  s += -1e16;
  CHECK(s.value() == 1.0);

  std::vector<double> xs(1000000, 0.1);
  CHECK_THAT(compensated_sum(std::span<const double>(xs)), WithinRel(100000.0, 1e-15));
}

TEST_CASE("compensated sum of alternating large terms") {
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) {
    xs.push_back(1e20);
    xs.push_back(3.0);
    xs.push_back(-1e20);
  }
  CHECK(compensated_sum(std::span<const double>(xs)) == 3000.0);
}

TEST_CASE("moments are the mean and biased variance") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const auto m = moments(std::span<const double>(xs));
  CHECK(m.mean == 2.5);
  CHECK_THAT(m.variance, WithinAbs(1.25, 1e-15));

  const std::vector<double> shifted{1e9 + 1, 1e9 + 2, 1e9 + 3, 1e9 + 4};
  CHECK_THAT(moments(std::span<const double>(shifted)).variance, WithinAbs(1.25, 1e-6));
}

TEST_CASE("variance of a constant sequence is zero") {
  const std::vector<double> xs(17, 0.3);
  CHECK(moments(std::span<const double>(xs)).variance == 0.0);
}
