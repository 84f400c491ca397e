#pragma once

// Comparison methods: quadrature demodulation (projection onto unshifted
// cos/sin), its analytic error budget, the e_max factor scan and a
// zero-padded DFT power spectrum on gridded data.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "ndlomb/error.hpp"
#include "ndlomb/lsm.hpp"
#include "ndlomb/stats.hpp"
#include "ndlomb/summation.hpp"
#include "ndlomb/types.hpp"

namespace ndlomb {

// a = (2/N) sum y cos(w.t), b = (2/N) sum y sin(w.t).
inline UnshiftedCoefficients quadrature_demod(const SampleSet &samples,
                                              std::span<const double> omega) {
  require_dims(samples, omega);
  const auto values = samples.values();
  CompensatedSum<double> yc;
  CompensatedSum<double> ys;
  for (std::size_t n = 0; n < values.size(); ++n) {
    const double arg = dot(omega, samples.coord(n));
    yc.add(values[n] * std::cos(arg));
    ys.add(values[n] * std::sin(arg));
  }
  const double scale = 2.0 / static_cast<double>(values.size());
  return {scale * yc.value(), scale * ys.value()};
}

inline constexpr double truncation_error_cap = 0.2;

// 1-D error budget for a window of length T sampled N times.
inline ErrorBudget omd_error_budget(double window, double omega, std::size_t n,
                                    const NoiseSpec &noise) {
  if (!(window > 0) || !std::isfinite(window) || !(omega > 0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::BadInput, "window length and omega must be finite and > 0");
  }
  if (n == 0) {
    throw Error(ErrorCode::BadN, "error budget needs N >= 1");
  }
  constexpr double pi = std::numbers::pi;
  const double half_periods = std::max(1.0, std::round(window * omega / pi));
  const double delta_phi = std::abs(window - pi * half_periods / omega);
  const double root_n = std::sqrt(static_cast<double>(n));
  ErrorBudget e;
  e.eps_T = std::min(delta_phi / window, truncation_error_cap);
  e.eps_FS = noise.quantile * 2.0 * noise.sigma / root_n;
  e.eps_LS = 4.0 / pi * noise.quantile * noise.sigma / root_n;
  return e;
}

// 4 sin(beta) / (2 beta + sin(2 beta))
inline double emax_factor(double beta) noexcept {
  return 4.0 * std::sin(beta) / (2.0 * beta + std::sin(2.0 * beta));
}

struct EmaxResult {
  double beta_star{0};
  double e_max{0};
};

// Grid search over beta_i = 2 pi i / resolution, i = 1..resolution, then a
// Brent refinement inside the bracketing cells.
inline EmaxResult emax_scan(std::size_t resolution) {
  if (resolution < 1000) {
    throw Error(ErrorCode::BadInput, "e_max scan needs at least 1000 grid points");
  }
  const double h = two_pi / static_cast<double>(resolution);
  std::size_t best = 1;
  double best_val = emax_factor(h);
  for (std::size_t i = 2; i <= resolution; ++i) {
    const double v = emax_factor(h * static_cast<double>(i));
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = h * static_cast<double>(best - 1);
  const double hi = h * static_cast<double>(std::min(best + 1, resolution));
  const auto [beta, neg] = boost::math::tools::brent_find_minima(
      [](double b) { return -emax_factor(b); }, std::max(lo, h * 0.5), hi,
      std::numeric_limits<double>::digits);
  if (-neg >= best_val) {
    return {beta, -neg};
  }
  return {h * static_cast<double>(best), best_val};
}

// Dense m-dimensional array, row-major with the last axis fastest. Cell
// (i1..im) sits at origin + i * spacing; non-finite values mark missing data.
struct GriddedField {
  std::size_t dims{0};
  std::vector<std::size_t> shape;
  std::vector<double> origin;
  std::vector<double> spacing;
  std::vector<double> values;
  std::size_t n_zero{0};

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }

  void validate() const {
    if (dims == 0 || shape.size() != dims || origin.size() != dims || spacing.size() != dims) {
      throw Error(ErrorCode::DimensionMismatch, "field shape, origin and spacing need dims entries");
    }
    std::size_t total = 1;
    for (std::size_t d = 0; d < dims; ++d) {
      if (shape[d] == 0) {
        throw Error(ErrorCode::BadInput, "field axis has zero length");
      }
      if (!(spacing[d] > 0) || !std::isfinite(spacing[d]) || !std::isfinite(origin[d])) {
        throw Error(ErrorCode::BadInput, "field spacing must be finite and > 0");
      }
      total *= shape[d];
    }
    if (total != values.size()) {
      throw Error(ErrorCode::DimensionMismatch, "shape product differs from value count");
    }
    const auto missing = static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [](double v) { return !std::isfinite(v); }));
    if (missing != n_zero) {
      throw Error(ErrorCode::BadInput, "n_zero differs from the number of missing cells");
    }
  }

  // Multi-index of flat cell k.
  [[nodiscard]] std::vector<std::size_t> index(std::size_t k) const {
    std::vector<std::size_t> idx(dims);
    for (std::size_t d = dims; d-- > 0;) {
      idx[d] = k % shape[d];
      k /= shape[d];
    }
    return idx;
  }
};

inline GriddedField make_field(std::vector<std::size_t> shape, std::vector<double> origin,
                               std::vector<double> spacing, std::vector<double> values) {
  GriddedField f;
  f.dims = shape.size();
  f.shape = std::move(shape);
  f.origin = std::move(origin);
  f.spacing = std::move(spacing);
  f.values = std::move(values);
  f.n_zero = static_cast<std::size_t>(
      std::count_if(f.values.begin(), f.values.end(), [](double v) { return !std::isfinite(v); }));
  f.validate();
  return f;
}

// Lays scattered rows onto the regular lattice they were drawn from. Per axis
// the spacing is the smallest gap between distinct coordinates; every
// coordinate must sit on that lattice to a relative 1e-6 of the spacing.
// Cells without a row, or whose row value is non-finite, are missing.
inline GriddedField field_from_rows(const RawSamples &raw) {
  const std::size_t dims = raw.dims;
  if (dims == 0 || raw.coords.size() != raw.values.size() * dims || raw.values.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "rows do not form an m-dimensional sample list");
  }
  const std::size_t count = raw.values.size();
  std::vector<std::size_t> shape(dims);
  std::vector<double> origin(dims);
  std::vector<double> spacing(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    std::vector<double> axis(count);
    for (std::size_t n = 0; n < count; ++n) {
      axis[n] = raw.coords[n * dims + d];
      if (!std::isfinite(axis[n])) {
        throw Error(ErrorCode::BadInput, "non-finite coordinate");
      }
    }
    std::sort(axis.begin(), axis.end());
    const double extent = axis.back() - axis.front();
    const double tol = 1e-9 * std::max(1.0, std::abs(axis.front()) + std::abs(axis.back()));
    double step = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < count; ++n) {
      const double gap = axis[n] - axis[n - 1];
      if (gap > tol) {
        step = std::min(step, gap);
      }
    }
    origin[d] = axis.front();
    if (!std::isfinite(step)) {
      shape[d] = 1;
      spacing[d] = 1.0;
    } else {
      shape[d] = static_cast<std::size_t>(std::llround(extent / step)) + 1;
      spacing[d] = extent / static_cast<double>(shape[d] - 1);
    }
  }

  std::size_t total = 1;
  for (auto s : shape) {
    total *= s;
  }
  std::vector<double> values(total, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t n = 0; n < count; ++n) {
    std::size_t k = 0;
    for (std::size_t d = 0; d < dims; ++d) {
      const double pos = (raw.coords[n * dims + d] - origin[d]) / spacing[d];
      const double idx = std::round(pos);
      if (std::abs(pos - idx) > 1e-6) {
        throw Error(ErrorCode::BadInput, "coordinates do not lie on a regular grid (axis " +
                                             std::to_string(d + 1) + ")");
      }
      k = k * shape[d] + static_cast<std::size_t>(idx);
    }
    values[k] = raw.values[n];
  }
  return make_field(std::move(shape), std::move(origin), std::move(spacing), std::move(values));
}

// Centered DFT bins k = -floor(n/2) .. ceil(n/2) - 1 as ordinary frequencies
// k / (n * spacing).
inline std::vector<double> dft_frequencies(std::size_t n, double spacing) {
  std::vector<double> f(n);
  const auto lo = -static_cast<long long>(n / 2);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = static_cast<double>(lo + static_cast<long long>(i)) /
           (static_cast<double>(n) * spacing);
  }
  return f;
}

// Power spectrum of the zero-filled field on its DFT frequency grid.
// Coefficients use the unshifted basis (tau_star = 0) and the physical
// coordinates origin + i * spacing:
//   a = (2/N) sum z cos(w.t) / (1 - N_zero/N),  b likewise with sin,
//   psd = N/(N-1) (a^2 + b^2) / (2 var0), clipped to [0, 1],
// with N the number of cells and var0 the variance of the finite values.
inline Spectrum zero_padded_dft_psd(const GriddedField &field) {
  field.validate();
  const std::size_t total = field.size();
  if (field.n_zero == total) {
    throw Error(ErrorCode::AllMissing, "every grid cell is missing");
  }
  if (total < 2) {
    throw Error(ErrorCode::BadN, "DFT baseline needs at least two cells");
  }
  std::vector<double> finite;
  finite.reserve(total - field.n_zero);
  for (double v : field.values) {
    if (std::isfinite(v)) {
      finite.push_back(v);
    }
  }
  const double variance = moments(std::span<const double>(finite)).variance;
  if (!(variance > 0)) {
    throw Error(ErrorCode::ZeroVariance, "all finite field values are equal");
  }

  // Row-column transform X(w) = sum z exp(-i w.t), one axis at a time.
  std::vector<std::complex<double>> work(total);
  for (std::size_t k = 0; k < total; ++k) {
    work[k] = std::isfinite(field.values[k]) ? field.values[k] : 0.0;
  }
  std::vector<std::vector<double>> freqs(field.dims);
  std::size_t inner = total;
  for (std::size_t d = 0; d < field.dims; ++d) {
    const std::size_t len = field.shape[d];
    inner /= len;
    const std::size_t outer = total / (len * inner);
    freqs[d] = dft_frequencies(len, field.spacing[d]);
    std::vector<std::complex<double>> twiddle(len * len);
    for (std::size_t kf = 0; kf < len; ++kf) {
      const double w = two_pi * freqs[d][kf];
      for (std::size_t j = 0; j < len; ++j) {
        const double t = field.origin[d] + static_cast<double>(j) * field.spacing[d];
        twiddle[kf * len + j] = std::polar(1.0, -w * t);
      }
    }
    std::vector<std::complex<double>> line(len);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t i = 0; i < inner; ++i) {
        const std::size_t base = o * len * inner + i;
        for (std::size_t j = 0; j < len; ++j) {
          line[j] = work[base + j * inner];
        }
        for (std::size_t kf = 0; kf < len; ++kf) {
          std::complex<double> acc = 0.0;
          for (std::size_t j = 0; j < len; ++j) {
            acc += twiddle[kf * len + j] * line[j];
          }
          work[base + kf * inner] = acc;
        }
      }
    }
  }

  const double nd = static_cast<double>(total);
  const double fill = 1.0 - static_cast<double>(field.n_zero) / nd;
  Spectrum out;
  out.dims = field.dims;
  out.convention = FrequencyConvention::Ordinary;
  out.n_samples = total - field.n_zero;
  out.points.resize(total);
  for (std::size_t k = 0; k < total; ++k) {
    auto &p = out.points[k];
    const auto idx = field.index(k);
    p.freq.resize(field.dims);
    for (std::size_t d = 0; d < field.dims; ++d) {
      p.freq[d] = freqs[d][idx[d]];
    }
    p.tau_star = 0.0;
    p.a = 2.0 * work[k].real() / nd / fill;
    p.b = -2.0 * work[k].imag() / nd / fill;
    const auto ap = amplitude_phase(p.a, p.b);
    p.amplitude = ap.amplitude;
    p.phase = ap.phase;
    p.psd = std::clamp(nd / (nd - 1.0) * ap.amplitude * ap.amplitude / (2.0 * variance), 0.0,
                       1.0);
  }
  return out;
}

} // namespace ndlomb
