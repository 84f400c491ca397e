#pragma once

// Deterministic synthetic data: sums of plane waves on regular, random,
// jittered or gapped sampling patterns, with Gaussian noise and a random
// missing-value mask.
//
// Random numbers come from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. Each purpose draws from its own substream, seeded with
// splitmix64(seed + id * 0x9E3779B97F4A7C15):
//
//   id 1  sampling locations (random / jittered patterns)
//   id 2  missing-value mask
//   id 3  additive noise
//
// Uniforms are (x >> 11) * 2^-53 in [0, 1); Gaussian deviates are the normal
// quantile of the open uniform ((x >> 11) + 0.5) * 2^-53.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <limits>
#include <random>
#include <type_traits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ndlomb/error.hpp"
#include "ndlomb/types.hpp"

namespace ndlomb {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum class Substream : std::uint64_t { Locations = 1, Mask = 2, Noise = 3 };

class RandomStream {
public:
  RandomStream(std::uint64_t seed, Substream id)
      : engine_(splitmix64(seed + static_cast<std::uint64_t>(id) * 0x9E3779B97F4A7C15ULL)) {}

  std::uint64_t next() { return engine_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // (0, 1)
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() { return normal_quantile(uniform_open()); }

  // Integer in [0, n), n > 0.
  std::size_t below(std::size_t n) {
    const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return std::min(k, n - 1);
  }

private:
  std::mt19937_64 engine_;
};

struct SignalComponent {
  std::vector<double> freq; // ordinary frequency per axis
  double amplitude{1};
  double phase{0};
};

// sum_k A_k cos(2 pi f_k . t + phi_k)
struct SignalSpec {
  std::vector<SignalComponent> components;

  [[nodiscard]] double evaluate(std::span<const double> t) const {
    double v = 0;
    for (const auto &c : components) {
      double ft = 0;
      for (std::size_t d = 0; d < t.size(); ++d) {
        ft += c.freq[d] * t[d];
      }
      v += c.amplitude * std::cos(two_pi * ft + c.phase);
    }
    return v;
  }

  void validate(std::size_t dims) const {
    for (const auto &c : components) {
      if (c.freq.size() != dims) {
        throw Error(ErrorCode::DimensionMismatch,
                    "signal component has " + std::to_string(c.freq.size()) +
                        " frequency entries, sampling has " + std::to_string(dims) + " axes");
      }
      if (!(c.amplitude >= 0) || !std::isfinite(c.amplitude) || !std::isfinite(c.phase)) {
        throw Error(ErrorCode::BadInput, "amplitudes must be finite and >= 0");
      }
      for (double f : c.freq) {
        if (!std::isfinite(f)) {
          throw Error(ErrorCode::BadInput, "non-finite signal frequency");
        }
      }
    }
  }
};

struct RegularPattern {
  std::vector<AxisRange> ranges;
  std::vector<double> steps;
};

struct UniformRandomPattern {
  std::vector<AxisRange> ranges;
  std::size_t count{0};
};

// Regular points displaced by up to +-jitter/2 of the step along each axis.
struct JitteredPattern {
  std::vector<AxisRange> ranges;
  std::vector<double> steps;
  double jitter{0.5};
};

// Points with coordinate `axis` inside [lo, hi] are removed.
struct GapInterval {
  std::size_t axis{0};
  double lo{0};
  double hi{0};
};

struct SamplingSpec {
  std::variant<RegularPattern, UniformRandomPattern, JitteredPattern> pattern;
  std::vector<GapInterval> gaps;
  double missing_fraction{0};

  [[nodiscard]] std::size_t dims() const {
    return std::visit([](const auto &p) { return p.ranges.size(); }, pattern);
  }
};

namespace detail {

inline void check_ranges(std::span<const AxisRange> ranges) {
  if (ranges.empty()) {
    throw Error(ErrorCode::BadRange, "sampling pattern needs at least one axis");
  }
  for (const auto &r : ranges) {
    if (!std::isfinite(r.min) || !std::isfinite(r.max) || !(r.max > r.min)) {
      throw Error(ErrorCode::BadRange, "sampling range needs min < max");
    }
  }
}

// Regular lattice points, last axis fastest, inclusive endpoints.
inline std::vector<std::vector<double>> lattice_axes(std::span<const AxisRange> ranges,
                                                     std::span<const double> steps) {
  check_ranges(ranges);
  if (steps.size() != ranges.size()) {
    throw Error(ErrorCode::BadRange, "need one step per axis");
  }
  std::vector<std::vector<double>> axes;
  for (std::size_t d = 0; d < ranges.size(); ++d) {
    if (!std::isfinite(steps[d]) || !(steps[d] > 0)) {
      throw Error(ErrorCode::BadRange, "sampling step must be > 0");
    }
    const auto count =
        static_cast<std::size_t>(std::floor((ranges[d].max - ranges[d].min) / steps[d] + 0.5)) + 1;
    std::vector<double> axis(count);
    for (std::size_t i = 0; i < count; ++i) {
      axis[i] = ranges[d].min + static_cast<double>(i) * steps[d];
    }
    axes.push_back(std::move(axis));
  }
  return axes;
}

inline std::vector<double> lattice_points(const std::vector<std::vector<double>> &axes) {
  std::size_t total = 1;
  for (const auto &a : axes) {
    total *= a.size();
  }
  const std::size_t dims = axes.size();
  std::vector<double> flat(total * dims);
  std::vector<std::size_t> idx(dims, 0);
  for (std::size_t k = 0; k < total; ++k) {
    for (std::size_t d = 0; d < dims; ++d) {
      flat[k * dims + d] = axes[d][idx[d]];
    }
    for (std::size_t d = dims; d-- > 0;) {
      if (++idx[d] < axes[d].size()) {
        break;
      }
      idx[d] = 0;
    }
  }
  return flat;
}

inline std::vector<double> locations(const SamplingSpec &spec, std::uint64_t seed) {
  RandomStream rng(seed, Substream::Locations);
  return std::visit(
      [&](const auto &p) -> std::vector<double> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RegularPattern>) {
          return lattice_points(lattice_axes(p.ranges, p.steps));
        } else if constexpr (std::is_same_v<P, UniformRandomPattern>) {
          check_ranges(p.ranges);
          if (p.count == 0) {
            throw Error(ErrorCode::BadInput, "uniform-random pattern needs count > 0");
          }
          std::vector<double> flat(p.count * p.ranges.size());
          for (std::size_t n = 0; n < p.count; ++n) {
            for (std::size_t d = 0; d < p.ranges.size(); ++d) {
              const auto &r = p.ranges[d];
              flat[n * p.ranges.size() + d] = r.min + rng.uniform() * (r.max - r.min);
            }
          }
          return flat;
        } else {
          if (!(p.jitter >= 0 && p.jitter <= 1)) {
            throw Error(ErrorCode::BadInput, "jitter fraction must lie in [0,1]");
          }
          auto flat = lattice_points(lattice_axes(p.ranges, p.steps));
          const std::size_t dims = p.ranges.size();
          for (std::size_t i = 0; i < flat.size(); ++i) {
            flat[i] += (rng.uniform() - 0.5) * p.jitter * p.steps[i % dims];
          }
          return flat;
        }
      },
      spec.pattern);
}

} // namespace detail

// Generated rows with missing points kept as NaN values, so that the result
// can also be laid out on its grid (zero-padded DFT baseline).
inline RawSamples generate_rows(const SignalSpec &signal, const SamplingSpec &sampling,
                                double noise_sigma, std::uint64_t seed) {
  const std::size_t dims = sampling.dims();
  signal.validate(dims);
  if (!(sampling.missing_fraction >= 0 && sampling.missing_fraction < 1)) {
    throw Error(ErrorCode::BadInput, "missing fraction must lie in [0,1)");
  }
  if (!(noise_sigma >= 0) || !std::isfinite(noise_sigma)) {
    throw Error(ErrorCode::BadInput, "noise sigma must be finite and >= 0");
  }
  for (const auto &g : sampling.gaps) {
    if (g.axis >= dims || !(g.hi >= g.lo)) {
      throw Error(ErrorCode::BadInput, "gap interval needs a valid axis and lo <= hi");
    }
  }

  const auto all = detail::locations(sampling, seed);
  RawSamples raw;
  raw.dims = dims;
  for (std::size_t n = 0; n < all.size() / dims; ++n) {
    const std::span<const double> t(all.data() + n * dims, dims);
    const bool in_gap = std::any_of(sampling.gaps.begin(), sampling.gaps.end(),
                                    [&](const GapInterval &g) {
                                      return t[g.axis] >= g.lo && t[g.axis] <= g.hi;
                                    });
    if (!in_gap) {
      raw.coords.insert(raw.coords.end(), t.begin(), t.end());
    }
  }
  const std::size_t count = raw.coords.size() / dims;
  if (count == 0) {
    throw Error(ErrorCode::EmptyAfterFilter, "gaps remove every sampling location");
  }

  raw.values.resize(count);
  for (std::size_t n = 0; n < count; ++n) {
    raw.values[n] = signal.evaluate(raw.coord(n));
  }
  if (noise_sigma > 0) {
    RandomStream noise(seed, Substream::Noise);
    for (double &v : raw.values) {
      v += noise_sigma * noise.normal();
    }
  }

  // Partial Fisher-Yates: the first `missing` entries of a shuffled index list.
  const auto missing = static_cast<std::size_t>(
      std::llround(sampling.missing_fraction * static_cast<double>(count)));
  if (missing > 0) {
    RandomStream mask(seed, Substream::Mask);
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) {
      order[i] = i;
    }
    for (std::size_t i = 0; i < missing; ++i) {
      const std::size_t j = i + mask.below(count - i);
      std::swap(order[i], order[j]);
      raw.values[order[i]] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return raw;
}

inline SampleSet generate(const SignalSpec &signal, const SamplingSpec &sampling,
                          double noise_sigma, std::uint64_t seed, std::string label = {}) {
  return validate_samples(generate_rows(signal, sampling, noise_sigma, seed), std::move(label));
}

// Real part of exp(i (omega_t t + k_z z + m phi)) with unit amplitude, on
// coordinates (t, z, phi).
struct TravelingWave {
  double omega_t{0};
  double k_z{0};
  int m_phi{0};

  [[nodiscard]] SignalSpec signal() const {
    return {{{{omega_t / two_pi, k_z / two_pi, static_cast<double>(m_phi) / two_pi}, 1.0, 0.0}}};
  }
};

inline RawSamples traveling_wave_rows(const TravelingWave &wave, const SamplingSpec &sampling,
                                      double noise_sigma, std::uint64_t seed) {
  if (sampling.dims() != 3) {
    throw Error(ErrorCode::DimensionMismatch, "traveling wave needs (t, z, phi) sampling");
  }
  return generate_rows(wave.signal(), sampling, noise_sigma, seed);
}

inline SampleSet traveling_wave(const TravelingWave &wave, const SamplingSpec &sampling,
                                double noise_sigma, std::uint64_t seed) {
  return validate_samples(traveling_wave_rows(wave, sampling, noise_sigma, seed),
                          "traveling-wave");
}

// Two sensors on opposite sides of a frame rotating at omega_out: each (t, z)
// lattice point yields rows at phi = omega_out t and phi = omega_out t + pi.
struct TwoSensorSampling {
  AxisRange t_range;
  double t_step{1};
  AxisRange z_range;
  double z_step{1};
  double omega_out{0};
  double missing_fraction{0};
};

inline RawSamples traveling_wave_two_sensor_rows(const TravelingWave &wave,
                                                 const TwoSensorSampling &s,
                                                 double noise_sigma, std::uint64_t seed) {
  const AxisRange ranges[] = {s.t_range, s.z_range};
  const double steps[] = {s.t_step, s.z_step};
  const auto base = detail::lattice_points(detail::lattice_axes(ranges, steps));
  RawSamples layout;
  layout.dims = 3;
  for (std::size_t n = 0; n < base.size() / 2; ++n) {
    const double t = base[2 * n];
    const double z = base[2 * n + 1];
    for (double offset : {0.0, std::numbers::pi}) {
      layout.coords.insert(layout.coords.end(), {t, z, s.omega_out * t + offset});
    }
  }
  layout.values.assign(layout.coords.size() / 3, 0.0);

  const auto signal = wave.signal();
  for (std::size_t n = 0; n < layout.size(); ++n) {
    layout.values[n] = signal.evaluate(layout.coord(n));
  }
  if (noise_sigma > 0) {
    RandomStream noise(seed, Substream::Noise);
    for (double &v : layout.values) {
      v += noise_sigma * noise.normal();
    }
  }
  if (!(s.missing_fraction >= 0 && s.missing_fraction < 1)) {
    throw Error(ErrorCode::BadInput, "missing fraction must lie in [0,1)");
  }
  const std::size_t count = layout.size();
  const auto missing =
      static_cast<std::size_t>(std::llround(s.missing_fraction * static_cast<double>(count)));
  RandomStream mask(seed, Substream::Mask);
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) {
    order[i] = i;
  }
  for (std::size_t i = 0; i < missing; ++i) {
    const std::size_t j = i + mask.below(count - i);
    std::swap(order[i], order[j]);
    layout.values[order[i]] = std::numeric_limits<double>::quiet_NaN();
  }
  return layout;
}

// y = A cos(omega t + phi) at t_k = k T / N, k = 0..N-1 (endpoint excluded).
inline RawSamples sinus_window_rows(double window, double omega, std::size_t n,
                                    double amplitude = 1.0, double phase = 0.0) {
  if (n == 0 || !(window > 0) || !std::isfinite(window) || !std::isfinite(omega)) {
    throw Error(ErrorCode::BadInput, "sinus window needs N >= 1 and a finite window > 0");
  }
  RawSamples raw;
  raw.dims = 1;
  raw.coords.resize(n);
  raw.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = window * static_cast<double>(k) / static_cast<double>(n);
    raw.coords[k] = t;
    raw.values[k] = amplitude * std::cos(omega * t + phase);
  }
  return raw;
}

inline SampleSet sinus_window(double window, double omega, std::size_t n,
                              double amplitude = 1.0, double phase = 0.0) {
  return validate_samples(sinus_window_rows(window, omega, n, amplitude, phase), "sinus-window");
}

// Named reference datasets.
namespace presets {

// z = cos(2 pi (3.25 x + 6.32 y) + pi/4) on x, y in [-1, 1], step 0.025
// (81 points per axis), 60 % of the points missing.
inline SignalSpec simple_wave_signal() {
  return {{{{3.25, 6.32}, 1.0, std::numbers::pi / 4.0}}};
}
inline SamplingSpec simple_wave_sampling() {
  SamplingSpec s;
  s.pattern = RegularPattern{{{-1.0, 1.0}, {-1.0, 1.0}}, {0.025, 0.025}};
  s.missing_fraction = 0.6;
  return s;
}
inline constexpr std::uint64_t simple_wave_seed = 20190417;

// Drift wave at f = 9 mHz, k = 20 1/m, m = 1 on a (t, z, phi) lattice.
inline TravelingWave traveling_wave_signal() { return {two_pi * 0.009, 20.0, 1}; }
inline SamplingSpec traveling_wave_sampling() {
  SamplingSpec s;
  s.pattern = RegularPattern{{{0.0, 600.0}, {0.0, 0.3}, {0.0, 7.0 * std::numbers::pi / 4.0}},
                             {6.0, 0.02, std::numbers::pi / 4.0}};
  s.missing_fraction = 0.3;
  return s;
}
inline constexpr double traveling_wave_sigma = 0.5;

// Angular grid: omega_t = 2 pi (0, 0.001, ..., 0.02), k = 0, 1, ..., 40,
// m = -3, ..., 3.
inline FrequencyGrid traveling_wave_grid() {
  std::vector<std::vector<double>> axes(3);
  for (int i = 0; i <= 20; ++i) {
    axes[0].push_back(two_pi * 0.001 * i);
  }
  for (int i = 0; i <= 40; ++i) {
    axes[1].push_back(i);
  }
  for (int i = -3; i <= 3; ++i) {
    axes[2].push_back(i);
  }
  return FrequencyGrid::cartesian(std::move(axes), FrequencyConvention::Angular,
                                  {two_pi * 0.001, 1.0, 1.0});
}
inline constexpr std::uint64_t traveling_wave_seed = 1301;

// Unit-variance white noise at 200 random instants in [0, 1].
inline SamplingSpec noise_only_sampling() {
  SamplingSpec s;
  s.pattern = UniformRandomPattern{{{0.0, 1.0}}, 200};
  return s;
}
inline constexpr double noise_only_sigma = 1.0;
inline constexpr std::uint64_t noise_only_seed = 7;

// Window of one period plus a tenth, omega = 1.
inline constexpr double sinus_window_length = 2.0 * std::numbers::pi + std::numbers::pi / 5.0;

} // namespace presets

} // namespace ndlomb
