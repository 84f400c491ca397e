#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>

namespace ndlomb {

/// Neumaier (improved Kahan-Babuska) running sum.
///
/// All sums over samples go through this accumulator. The order of `add`
/// calls fully determines the result, so a fixed loop order gives
/// bit-identical output regardless of how frequencies are scheduled.
template <std::floating_point T = double> class CompensatedSum {
public:
  constexpr void add(T x) noexcept {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  constexpr CompensatedSum &operator+=(T x) noexcept {
    add(x);
    return *this;
  }

  [[nodiscard]] constexpr T value() const noexcept { return sum_ + comp_; }

private:
  T sum_{0};
  T comp_{0};
};

template <std::floating_point T>
[[nodiscard]] T compensated_sum(std::span<const T> xs) noexcept {
  CompensatedSum<T> acc;
  for (T x : xs) {
    acc.add(x);
  }
  return acc.value();
}

// Mean and biased variance (divide by N) of a sequence, two-pass.
template <std::floating_point T> struct Moments {
  T mean{0};
  T variance{0};
};

template <std::floating_point T>
[[nodiscard]] Moments<T> moments(std::span<const T> xs) noexcept {
  if (xs.empty()) {
    return {};
  }
  const T n = static_cast<T>(xs.size());
  const T mean = compensated_sum(xs) / n;
  CompensatedSum<T> ss;
  for (T x : xs) {
    ss.add((x - mean) * (x - mean));
  }
  return {mean, ss.value() / n};
}

} // namespace ndlomb
