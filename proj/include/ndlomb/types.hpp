#pragma once

// Domain data model shared by every module: samples, frequency grids,
// spectra, noise specification, analytic error budgets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "ndlomb/error.hpp"

namespace ndlomb {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Samples as read from a file or produced by a generator, before validation.
// Non-finite values mark missing data.
struct RawSamples {
  std::size_t dims{0};
  std::vector<double> coords; // row-major, size() == values.size() * dims
  std::vector<double> values;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] std::span<const double> coord(std::size_t n) const {
    return {coords.data() + n * dims, dims};
  }
};

// N samples, each an m-dimensional location plus a finite real value.
// Immutable once built; only validate_samples() constructs one.
class SampleSet {
public:
  [[nodiscard]] std::size_t dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> coord(std::size_t n) const {
    return {coords_.data() + n * dims_, dims_};
  }
  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] const std::string &label() const noexcept { return label_; }

  // Copy of this set with every coordinate shifted by `delta`.
  [[nodiscard]] SampleSet translated(std::span<const double> delta) const {
    if (delta.size() != dims_) {
      throw Error(ErrorCode::DimensionMismatch, "translation vector has wrong length");
    }
    SampleSet out = *this;
    for (std::size_t n = 0; n < size(); ++n) {
      for (std::size_t d = 0; d < dims_; ++d) {
        out.coords_[n * dims_ + d] += delta[d];
      }
    }
    return out;
  }

  // Copy with the values replaced; coordinates unchanged.
  [[nodiscard]] SampleSet with_values(std::vector<double> values) const {
    if (values.size() != size()) {
      throw Error(ErrorCode::DimensionMismatch, "replacement value count differs");
    }
    for (double v : values) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::BadInput, "replacement values must be finite");
      }
    }
    SampleSet out = *this;
    out.values_ = std::move(values);
    return out;
  }

private:
  friend SampleSet validate_samples(const RawSamples &raw, std::string label);

  std::size_t dims_{0};
  std::vector<double> coords_;
  std::vector<double> values_;
  std::string label_;
};

// Drops rows whose value is non-finite (missing data); rejects non-finite
// coordinates.
inline SampleSet validate_samples(const RawSamples &raw, std::string label = {}) {
  if (raw.dims == 0) {
    if (raw.values.empty()) {
      throw Error(ErrorCode::EmptyAfterFilter, "no samples");
    }
    throw Error(ErrorCode::DimensionMismatch, "samples must have at least one coordinate");
  }
  if (raw.coords.size() != raw.values.size() * raw.dims) {
    throw Error(ErrorCode::DimensionMismatch, "coordinate buffer does not match dims * N");
  }
  SampleSet out;
  out.dims_ = raw.dims;
  out.label_ = std::move(label);
  out.coords_.reserve(raw.coords.size());
  out.values_.reserve(raw.values.size());
  for (std::size_t n = 0; n < raw.size(); ++n) {
    const auto c = raw.coord(n);
    for (double x : c) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::BadInput,
                    "non-finite coordinate in row " + std::to_string(n));
      }
    }
    if (!std::isfinite(raw.values[n])) {
      continue;
    }
    out.coords_.insert(out.coords_.end(), c.begin(), c.end());
    out.values_.push_back(raw.values[n]);
  }
  if (out.values_.empty()) {
    throw Error(ErrorCode::EmptyAfterFilter, "no finite-valued rows remain");
  }
  return out;
}

// Row-wise convenience overload: (coordinate vector, value) pairs.
inline SampleSet
validate_samples(const std::vector<std::pair<std::vector<double>, double>> &rows,
                 std::string label = {}) {
  if (rows.empty()) {
    throw Error(ErrorCode::EmptyAfterFilter, "no samples");
  }
  RawSamples raw;
  raw.dims = rows.front().first.size();
  for (const auto &[coord, value] : rows) {
    if (coord.size() != raw.dims) {
      throw Error(ErrorCode::DimensionMismatch, "coordinate vectors differ in length");
    }
    raw.coords.insert(raw.coords.end(), coord.begin(), coord.end());
    raw.values.push_back(value);
  }
  return validate_samples(raw, std::move(label));
}

enum class FrequencyConvention {
  Ordinary, // f, cycles per coordinate unit
  Angular,  // omega = 2*pi*f, radians per coordinate unit
};

// Ordered list of F frequency vectors. Values are stored in the convention
// they were supplied in; omega() performs the single conversion to angular.
class FrequencyGrid {
public:
  FrequencyGrid() = default;

  static FrequencyGrid from_points(std::size_t dims, std::vector<double> flat,
                                   FrequencyConvention convention,
                                   std::vector<double> spacing = {}) {
    if (dims == 0 || flat.empty() || flat.size() % dims != 0) {
      throw Error(ErrorCode::BadInput, "frequency list must hold F >= 1 vectors of length dims");
    }
    for (double f : flat) {
      if (!std::isfinite(f)) {
        throw Error(ErrorCode::BadInput, "non-finite frequency");
      }
    }
    if (!spacing.empty() && spacing.size() != dims) {
      throw Error(ErrorCode::DimensionMismatch, "spacing must have one entry per axis");
    }
    FrequencyGrid g;
    g.dims_ = dims;
    g.data_ = std::move(flat);
    g.convention_ = convention;
    g.spacing_ = std::move(spacing);
    return g;
  }

  // Cartesian product of per-axis value lists, last axis varying fastest.
  static FrequencyGrid cartesian(std::vector<std::vector<double>> axes,
                                 FrequencyConvention convention,
                                 std::vector<double> spacing = {}) {
    if (axes.empty()) {
      throw Error(ErrorCode::BadInput, "grid needs at least one axis");
    }
    std::size_t total = 1;
    for (const auto &axis : axes) {
      if (axis.empty()) {
        throw Error(ErrorCode::BadInput, "empty grid axis");
      }
      total *= axis.size();
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
    FrequencyGrid g = from_points(dims, std::move(flat), convention, std::move(spacing));
    g.axes_ = std::move(axes);
    return g;
  }

  [[nodiscard]] std::size_t dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t size() const noexcept {
    return dims_ == 0 ? 0 : data_.size() / dims_;
  }
  [[nodiscard]] FrequencyConvention convention() const noexcept { return convention_; }
  [[nodiscard]] std::span<const double> freq(std::size_t k) const {
    return {data_.data() + k * dims_, dims_};
  }
  [[nodiscard]] const std::vector<double> &spacing() const noexcept { return spacing_; }
  [[nodiscard]] bool is_cartesian() const noexcept { return !axes_.empty(); }
  [[nodiscard]] const std::vector<std::vector<double>> &axes() const noexcept { return axes_; }

  [[nodiscard]] double to_angular(double stored) const noexcept {
    return convention_ == FrequencyConvention::Ordinary ? two_pi * stored : stored;
  }
  [[nodiscard]] double to_ordinary(double stored) const noexcept {
    return convention_ == FrequencyConvention::Angular ? stored / two_pi : stored;
  }

  void omega(std::size_t k, std::span<double> out) const {
    const auto f = freq(k);
    for (std::size_t d = 0; d < dims_; ++d) {
      out[d] = to_angular(f[d]);
    }
  }
  [[nodiscard]] std::vector<double> omega(std::size_t k) const {
    std::vector<double> out(dims_);
    omega(k, out);
    return out;
  }

private:
  std::size_t dims_{0};
  std::vector<double> data_;
  FrequencyConvention convention_{FrequencyConvention::Ordinary};
  std::vector<double> spacing_;
  std::vector<std::vector<double>> axes_;
};

struct AxisRange {
  double min{0};
  double max{0};
};

// Per-axis arithmetic sequences min, min+step, ... with
// floor((max-min)/step + 1/2) + 1 points each.
inline FrequencyGrid
build_regular_grid(std::span<const AxisRange> ranges, std::span<const double> steps,
                   FrequencyConvention convention = FrequencyConvention::Ordinary) {
  if (ranges.empty() || ranges.size() != steps.size()) {
    throw Error(ErrorCode::BadRange, "need one step per axis range");
  }
  std::vector<std::vector<double>> axes;
  for (std::size_t d = 0; d < ranges.size(); ++d) {
    const auto [lo, hi] = ranges[d];
    const double step = steps[d];
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
      throw Error(ErrorCode::BadRange, "axis " + std::to_string(d) + ": need min < max");
    }
    if (!std::isfinite(step) || !(step > 0)) {
      throw Error(ErrorCode::BadRange, "axis " + std::to_string(d) + ": need step > 0");
    }
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
    std::vector<double> axis(count);
    for (std::size_t i = 0; i < count; ++i) {
      axis[i] = lo + static_cast<double>(i) * step;
    }
    axes.push_back(std::move(axis));
  }
  return FrequencyGrid::cartesian(std::move(axes), convention,
                                  std::vector<double>(steps.begin(), steps.end()));
}

// Result for one frequency. `a`, `b` refer to the phase-shifted basis
// cos(w.t - tau_star), sin(w.t - tau_star).
struct SpectrumPoint {
  std::vector<double> freq; // in the owning spectrum's convention
  double tau_star{0};
  double a{0};
  double b{0};
  double amplitude{0};
  double phase{0}; // atan2(b, a)
  double psd{0};
  double prob_exceed{std::numeric_limits<double>::quiet_NaN()};
  double fap{std::numeric_limits<double>::quiet_NaN()};
  bool cos_degenerate{false};
  bool sin_degenerate{false};
};

struct Spectrum {
  std::size_t dims{0};
  FrequencyConvention convention{FrequencyConvention::Ordinary};
  std::size_t n_samples{0};
  double m_indep{std::numeric_limits<double>::quiet_NaN()};
  bool fap_available{false};
  double delta_ab{std::numeric_limits<double>::quiet_NaN()}; // coefficient CI half-width
  double delta_A{std::numeric_limits<double>::quiet_NaN()};  // amplitude CI half-width
  std::vector<SpectrumPoint> points;
  std::vector<std::string> warnings;

  [[nodiscard]] std::size_t argmax_psd() const {
    if (points.empty()) {
      throw Error(ErrorCode::BadInput, "empty spectrum");
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < points.size(); ++k) {
      if (points[k].psd > points[best].psd) {
        best = k;
      }
    }
    return best;
  }

  [[nodiscard]] double ordinary(double stored) const noexcept {
    return convention == FrequencyConvention::Angular ? stored / two_pi : stored;
  }
};

// Standard-normal inverse CDF.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::BadInput, "quantile probability must lie in (0,1)");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

// Noise standard deviation, significance level and the matching quantile.
// The quantile is two-sided: Phi^-1(1 - alpha/2), i.e. 1.959964 at alpha 0.05.
struct NoiseSpec {
  double sigma{0};
  double alpha{0.05};
  double quantile{1.959963984540054};

  static NoiseSpec make(double sigma, double alpha) {
    if (!(sigma >= 0) || !std::isfinite(sigma)) {
      throw Error(ErrorCode::BadInput, "sigma must be finite and >= 0");
    }
    if (!(alpha > 0 && alpha < 1)) {
      throw Error(ErrorCode::BadInput, "alpha must lie in (0,1)");
    }
    return {sigma, alpha, normal_quantile(1.0 - alpha / 2.0)};
  }

  // Explicit quantile, e.g. a one-sided value chosen by the caller.
  static NoiseSpec with_quantile(double sigma, double quantile) {
    if (!(sigma >= 0) || !std::isfinite(sigma) || !std::isfinite(quantile)) {
      throw Error(ErrorCode::BadInput, "sigma and quantile must be finite, sigma >= 0");
    }
    return {sigma, std::numeric_limits<double>::quiet_NaN(), quantile};
  }
};

// Analytic coefficient error bounds for a 1-D observation window.
struct ErrorBudget {
  double eps_T{0};  // relative truncation error of quadrature demodulation
  double eps_FS{0}; // random error of quadrature demodulation
  double eps_LS{0}; // random error of the least-squares estimator
};

} // namespace ndlomb
