#pragma once

// Statistical layer: standardized PSD, exceedance probability, false alarm
// probability, independent-frequency count, SNR and frequency uncertainty.
// Assumes i.i.d., zero-mean Gaussian noise throughout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "ndlomb/error.hpp"
#include "ndlomb/summation.hpp"
#include "ndlomb/types.hpp"

namespace ndlomb {

// psd = N/(N-1) * (a^2 + b^2) / (2 var0), clipped to [0, 1].
// `variance` is the biased sample variance (1/N) sum (y - mean)^2.
inline double standardized_psd(double a, double b, std::size_t n, double variance) {
  if (n < 2) {
    throw Error(ErrorCode::BadN, "standardized psd needs N >= 2");
  }
  if (!(variance > 0)) {
    throw Error(ErrorCode::ZeroVariance, "sample variance is zero");
  }
  const double nd = static_cast<double>(n);
  const double psd = nd / (nd - 1.0) * (a * a + b * b) / (2.0 * variance);
  return std::clamp(psd, 0.0, 1.0);
}

inline double standardized_psd(double a, double b, std::span<const double> values) {
  return standardized_psd(a, b, values.size(), moments(values).variance);
}

// Probability that pure noise produces a peak at least this high at one
// frequency: (1 - psd)^((N-3)/2).
inline double prob_exceed(double psd, std::size_t n) {
  if (n < 4) {
    throw Error(ErrorCode::BadN, "exceedance probability needs N >= 4");
  }
  if (!(psd >= 0 && psd <= 1)) {
    throw Error(ErrorCode::BadInput, "psd must lie in [0,1]");
  }
  return std::pow(1.0 - psd, (static_cast<double>(n) - 3.0) / 2.0);
}

// Empirical number of independent frequencies (Horne & Baliunas polynomial).
inline double independent_frequencies(std::size_t n) {
  const double nd = static_cast<double>(n);
  const double m = -6.362 + 1.193 * nd + 0.00098 * nd * nd;
  if (!(m > 0)) {
    throw Error(ErrorCode::BadN, "independent-frequency polynomial is not positive for N = " +
                                     std::to_string(n));
  }
  return m;
}

// 1 - (1 - prob)^M, evaluated as -expm1(M log1p(-prob)) so that the
// small-prob regime M*prob comes out without cancellation.
inline double false_alarm_probability(double prob, double m) {
  if (!(prob >= 0 && prob <= 1)) {
    throw Error(ErrorCode::BadInput, "probability must lie in [0,1]");
  }
  if (!(m > 0)) {
    throw Error(ErrorCode::BadInput, "number of independent frequencies must be > 0");
  }
  if (prob == 1.0) {
    return 1.0;
  }
  return std::clamp(-std::expm1(m * std::log1p(-prob)), 0.0, 1.0);
}

struct SnrReport {
  double sigma_sample{0}; // RMS residual
  double snr{0};
  double sigma_f{0};
};

// SNR as (root sum of significant amplitudes^2) / RMS residual, and the peak
// frequency uncertainty sigma_f = delta_f * sqrt(2 / (N snr^2)).
// Zero residuals throw ZeroResidual; use snr_or_infinite() for the marker form.
inline SnrReport snr_and_sigma_f(const SampleSet &samples, std::span<const double> model_values,
                                 std::span<const double> significant_amplitudes,
                                 double delta_f) {
  if (model_values.size() != samples.size()) {
    throw Error(ErrorCode::DimensionMismatch, "model_values must have one entry per sample");
  }
  if (!(delta_f > 0)) {
    throw Error(ErrorCode::BadInput, "delta_f must be > 0");
  }
  const auto values = samples.values();
  CompensatedSum<double> rss;
  for (std::size_t n = 0; n < values.size(); ++n) {
    const double e = values[n] - model_values[n];
    rss.add(e * e);
  }
  CompensatedSum<double> amp2;
  for (double a : significant_amplitudes) {
    amp2.add(a * a);
  }
  const double nd = static_cast<double>(values.size());
  const double rms = std::sqrt(rss.value() / nd);
  if (rms == 0.0) {
    throw Error(ErrorCode::ZeroResidual, "all residuals are zero");
  }
  SnrReport r;
  r.sigma_sample = rms;
  r.snr = std::sqrt(amp2.value()) / rms;
  r.sigma_f = r.snr > 0 ? delta_f * std::sqrt(2.0 / (nd * r.snr * r.snr))
                        : std::numeric_limits<double>::infinity();
  return r;
}

// Same as snr_and_sigma_f but maps ZeroResidual to snr = +inf, sigma_f = 0.
inline SnrReport snr_or_infinite(const SampleSet &samples, std::span<const double> model_values,
                                 std::span<const double> significant_amplitudes,
                                 double delta_f) {
  try {
    return snr_and_sigma_f(samples, model_values, significant_amplitudes, delta_f);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::ZeroResidual) {
      throw;
    }
    return {0.0, std::numeric_limits<double>::infinity(), 0.0};
  }
}

// SNR from per-sample uncertainties: sqrt((1/N) sum ((s - y) / sigma_n)^2).
inline double snr_from_uncertainties(const SampleSet &samples,
                                     std::span<const double> model_values,
                                     std::span<const double> sigma_n) {
  if (model_values.size() != samples.size() || sigma_n.size() != samples.size()) {
    throw Error(ErrorCode::DimensionMismatch, "need one model value and sigma per sample");
  }
  const auto values = samples.values();
  CompensatedSum<double> acc;
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (!(sigma_n[n] > 0)) {
      throw Error(ErrorCode::BadInput, "per-sample sigma must be > 0");
    }
    const double r = (values[n] - model_values[n]) / sigma_n[n];
    acc.add(r * r);
  }
  return std::sqrt(acc.value() / static_cast<double>(values.size()));
}

} // namespace ndlomb
