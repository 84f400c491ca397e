#pragma once

// Consistency experiment: a 1-D cosine on a fixed window, sampled with
// increasing N, fitted by least squares and by quadrature demodulation.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ndlomb/baselines.hpp"
#include "ndlomb/error.hpp"
#include "ndlomb/lsm.hpp"
#include "ndlomb/parallel.hpp"
#include "ndlomb/summation.hpp"
#include "ndlomb/synth.hpp"
#include "ndlomb/types.hpp"

namespace ndlomb {

struct SweepConfig {
  double window{presets::sinus_window_length};
  double omega{1.0};
  double amplitude{1.0};
  std::vector<std::size_t> sizes{50, 100, 200, 400, 800};
  std::size_t replicates{1};
  double sigma{0.0};
  std::uint64_t seed{0};
  unsigned threads{1};
};

enum class SweepMethod { Lsm, Omd };

inline const char *to_string(SweepMethod m) noexcept {
  return m == SweepMethod::Lsm ? "lsm" : "omd";
}

struct SweepRow {
  std::size_t n{0};
  SweepMethod method{SweepMethod::Lsm};
  std::size_t replicate{0};
  double a_error{0}; // estimate minus true cosine coefficient
  double b_error{0}; // estimate minus true sine coefficient (0)
};

// Noise seed of one (N, replicate) cell.
inline std::uint64_t replicate_seed(std::uint64_t seed, std::size_t n, std::size_t replicate) {
  return splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(n) << 32) ^
                                      static_cast<std::uint64_t>(replicate)));
}

// Noisy sinus-window samples for one cell.
inline SampleSet sweep_samples(const SweepConfig &cfg, std::size_t n, std::size_t replicate) {
  auto raw = sinus_window_rows(cfg.window, cfg.omega, n, cfg.amplitude);
  if (cfg.sigma > 0) {
    RandomStream noise(replicate_seed(cfg.seed, n, replicate), Substream::Noise);
    for (double &v : raw.values) {
      v += cfg.sigma * noise.normal();
    }
  }
  return validate_samples(raw, "sweep");
}

// Least-squares estimate in the unshifted basis cos(w t), sin(w t).
inline UnshiftedCoefficients lsm_unshifted(const SampleSet &samples,
                                           std::span<const double> omega) {
  const double tau = tau_star(samples, omega);
  const auto c = coeffs(samples, omega, tau).checked();
  return unshift(c.a, c.b, tau);
}

// Rows ordered by N, then replicate, then method (lsm before omd).
inline std::vector<SweepRow> run_sweep(const SweepConfig &cfg) {
  if (cfg.sizes.empty() || cfg.replicates == 0) {
    throw Error(ErrorCode::BadInput, "sweep needs at least one N and one replicate");
  }
  if (!(cfg.sigma >= 0) || !std::isfinite(cfg.sigma)) {
    throw Error(ErrorCode::BadInput, "sweep sigma must be finite and >= 0");
  }
  for (auto n : cfg.sizes) {
    if (n < 3) {
      throw Error(ErrorCode::BadN, "sweep sizes must be >= 3");
    }
  }
  const std::size_t jobs = cfg.sizes.size() * cfg.replicates;
  std::vector<SweepRow> rows(2 * jobs);
  const double omega[] = {cfg.omega};
  parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    const std::size_t n = cfg.sizes[job / cfg.replicates];
    const std::size_t rep = job % cfg.replicates;
    const auto samples = sweep_samples(cfg, n, rep);
    const auto lsm = lsm_unshifted(samples, omega);
    const auto omd = quadrature_demod(samples, omega);
    rows[2 * job] = {n, SweepMethod::Lsm, rep, lsm.a - cfg.amplitude, lsm.b};
    rows[2 * job + 1] = {n, SweepMethod::Omd, rep, omd.a - cfg.amplitude, omd.b};
  });
  return rows;
}

struct SweepSummary {
  std::size_t n{0};
  SweepMethod method{SweepMethod::Lsm};
  double rms_a{0};
  double mean_a{0};
};

// RMS and mean of the a errors per (N, method), ordered by N then method.
inline std::vector<SweepSummary> summarize(const std::vector<SweepRow> &rows) {
  std::map<std::pair<std::size_t, int>, std::pair<CompensatedSum<double>, CompensatedSum<double>>>
      acc;
  std::map<std::pair<std::size_t, int>, std::size_t> counts;
  for (const auto &r : rows) {
    const std::pair key{r.n, static_cast<int>(r.method)};
    acc[key].first.add(r.a_error * r.a_error);
    acc[key].second.add(r.a_error);
    ++counts[key];
  }
  std::vector<SweepSummary> out;
  for (const auto &[key, sums] : acc) {
    const double c = static_cast<double>(counts[key]);
    out.push_back({key.first, static_cast<SweepMethod>(key.second),
                   std::sqrt(sums.first.value() / c), sums.second.value() / c});
  }
  return out;
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::BadInput, "slope fit needs at least two (x, y) pairs");
  }
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) {
      throw Error(ErrorCode::BadInput, "log-log fit needs positive values");
    }
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0)) {
    throw Error(ErrorCode::SingularSystem, "slope fit needs at least two distinct x values");
  }
  return sxy / sxx;
}

} // namespace ndlomb
