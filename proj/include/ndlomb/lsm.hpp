#pragma once

// Multivariate Lomb-Scargle estimator.
//
// For a frequency vector w the model is
//
//   y(t) = a cos(w.t - tau*) + b sin(w.t - tau*)
//
// where the scalar shift tau* makes the two basis functions orthogonal on the
// actual sample locations:
//
//   sum_n sin(w.t_n - tau*) cos(w.t_n - tau*) = 0
//   <=>  tan(2 tau*) = sum_n sin(2 w.t_n) / sum_n cos(2 w.t_n).
//
// With that shift a and b decouple and each is a ratio of two sums, which is
// exactly the least-squares fit of the two-term model.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ndlomb/error.hpp"
#include "ndlomb/parallel.hpp"
#include "ndlomb/stats.hpp"
#include "ndlomb/summation.hpp"
#include "ndlomb/types.hpp"

namespace ndlomb {

// Denominators below this fraction of N mark an unconstrained coefficient.
inline constexpr double degenerate_floor = 1e-12;

[[nodiscard]] inline double dot(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    s += x[d] * y[d];
  }
  return s;
}

inline void require_dims(const SampleSet &samples, std::span<const double> omega) {
  if (omega.size() != samples.dims()) {
    throw Error(ErrorCode::DimensionMismatch,
                "frequency has " + std::to_string(omega.size()) + " components, samples have " +
                    std::to_string(samples.dims()));
  }
}

// Wraps an angle into (-pi, pi].
[[nodiscard]] inline double wrap_angle(double x) noexcept {
  constexpr double pi = std::numbers::pi;
  double r = std::remainder(x, 2.0 * pi);
  if (r <= -pi) {
    r += 2.0 * pi;
  }
  return r;
}

// Phase shift tau* in (-pi/2, pi/2]. atan2(0, 0) = 0 covers the symmetric
// and empty-sum cases.
inline double tau_star(const SampleSet &samples, std::span<const double> omega) {
  require_dims(samples, omega);
  CompensatedSum<double> s2;
  CompensatedSum<double> c2;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const double arg = 2.0 * dot(omega, samples.coord(n));
    s2.add(std::sin(arg));
    c2.add(std::cos(arg));
  }
  return 0.5 * std::atan2(s2.value(), c2.value());
}

struct Coefficients {
  double a{0};
  double b{0};
  bool cos_degenerate{false};
  bool sin_degenerate{false};

  [[nodiscard]] bool degenerate() const noexcept { return cos_degenerate || sin_degenerate; }

  // Throws DegenerateDenominator if either coefficient was unconstrained.
  [[nodiscard]] const Coefficients &checked() const {
    if (degenerate()) {
      throw Error(ErrorCode::DegenerateDenominator,
                  cos_degenerate ? "cosine denominator below floor"
                                 : "sine denominator below floor");
    }
    return *this;
  }
};

// a = sum y cos(w.t - tau) / sum cos^2(w.t - tau), b likewise with sin.
// A denominator below degenerate_floor * N yields 0 and sets the flag.
inline Coefficients coeffs(const SampleSet &samples, std::span<const double> omega,
                           double tau) {
  require_dims(samples, omega);
  const auto values = samples.values();
  CompensatedSum<double> yc, cc, ys, ss;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const double arg = dot(omega, samples.coord(n)) - tau;
    const double c = std::cos(arg);
    const double s = std::sin(arg);
    yc.add(values[n] * c);
    cc.add(c * c);
    ys.add(values[n] * s);
    ss.add(s * s);
  }
  const double floor = degenerate_floor * static_cast<double>(samples.size());
  Coefficients out;
  if (cc.value() < floor) {
    out.cos_degenerate = true;
  } else {
    out.a = yc.value() / cc.value();
  }
  if (ss.value() < floor) {
    out.sin_degenerate = true;
  } else {
    out.b = ys.value() / ss.value();
  }
  return out;
}

struct AmplitudePhase {
  double amplitude{0};
  double phase{0};
};

inline AmplitudePhase amplitude_phase(double a, double b) noexcept {
  return {std::hypot(a, b), std::atan2(b, a)};
}

// Coefficients of the unshifted basis cos(w.t), sin(w.t) from the shifted ones.
struct UnshiftedCoefficients {
  double a{0};
  double b{0};
};

inline UnshiftedCoefficients unshift(double a, double b, double tau) noexcept {
  const double ct = std::cos(tau);
  const double st = std::sin(tau);
  return {a * ct - b * st, a * st + b * ct};
}

// Phase phi of the model A cos(w.t + phi) described by a spectrum point.
inline double signal_phase(const SpectrumPoint &p) noexcept {
  return wrap_angle(-(p.phase + p.tau_star));
}

struct ConfidenceIntervals {
  double delta_ab{0};
  double delta_A{0};
  double delta_phi{0}; // +inf when the amplitude is zero
};

// Half-widths: delta_ab = (4/pi) q sigma / sqrt(N), delta_A = (4/pi) q sqrt(2/N) sigma,
// delta_phi = delta_A / A.
inline ConfidenceIntervals confidence_intervals(const NoiseSpec &noise, std::size_t n,
                                                double amplitude) {
  if (n < 1) {
    throw Error(ErrorCode::BadN, "confidence intervals need N >= 1");
  }
  if (!(amplitude >= 0)) {
    throw Error(ErrorCode::BadInput, "amplitude must be >= 0");
  }
  constexpr double e_max = 4.0 / std::numbers::pi;
  const double nd = static_cast<double>(n);
  ConfidenceIntervals ci;
  ci.delta_ab = e_max * noise.quantile * noise.sigma / std::sqrt(nd);
  ci.delta_A = e_max * noise.quantile * std::sqrt(2.0 / nd) * noise.sigma;
  if (amplitude > 0) {
    ci.delta_phi = ci.delta_A / amplitude;
  } else {
    ci.delta_phi = ci.delta_A == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return ci;
}

// Reference fit of a cos(w.t) + b sin(w.t) through the 2x2 normal equations,
// independent of tau*. Rotating the result by tau* must reproduce coeffs().
inline UnshiftedCoefficients lsq_fit_oracle(const SampleSet &samples,
                                            std::span<const double> omega) {
  require_dims(samples, omega);
  const auto values = samples.values();
  CompensatedSum<double> cc, ss, cs, yc, ys;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const double arg = dot(omega, samples.coord(n));
    const double c = std::cos(arg);
    const double s = std::sin(arg);
    cc.add(c * c);
    ss.add(s * s);
    cs.add(c * s);
    yc.add(values[n] * c);
    ys.add(values[n] * s);
  }
  const double m11 = cc.value();
  const double m22 = ss.value();
  const double m12 = cs.value();
  const double det = m11 * m22 - m12 * m12;
  if (!(det > 1e-12 * m11 * m22) || m11 == 0 || m22 == 0) {
    throw Error(ErrorCode::SingularSystem, "sampling cannot separate cosine and sine terms");
  }
  return {(m22 * yc.value() - m12 * ys.value()) / det,
          (m11 * ys.value() - m12 * yc.value()) / det};
}

// Coefficients in the classical Lomb normalisation, which differ from
// coeffs() by sqrt(sum cos^2 / (N/2)) (resp. sin^2).
inline UnshiftedCoefficients classical_coefficients(const SampleSet &samples,
                                                    std::span<const double> omega, double tau) {
  require_dims(samples, omega);
  const auto values = samples.values();
  CompensatedSum<double> yc, cc, ys, ss;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const double arg = dot(omega, samples.coord(n)) - tau;
    const double c = std::cos(arg);
    const double s = std::sin(arg);
    yc.add(values[n] * c);
    cc.add(c * c);
    ys.add(values[n] * s);
    ss.add(s * s);
  }
  const double half_n = std::sqrt(static_cast<double>(samples.size()) / 2.0);
  const double ca = cc.value() > 0 ? yc.value() / (half_n * std::sqrt(cc.value())) : 0.0;
  const double cb = ss.value() > 0 ? ys.value() / (half_n * std::sqrt(ss.value())) : 0.0;
  return {ca, cb};
}

struct AnalyzeOptions {
  std::optional<double> m_indep; // overrides the independent-frequency polynomial
  unsigned threads{1};           // 0 = hardware concurrency
  bool separable{true};          // reuse per-axis phasors on Cartesian grids
};

namespace detail {

// Running sums that determine a spectrum point, fed one sample at a time
// with (cos w.t_n, sin w.t_n, y_n).
struct PhasorSums {
  CompensatedSum<double> cc, ss, cs, yc, ys;

  void add(double c, double s, double y) noexcept {
    cc.add(c * c);
    ss.add(s * s);
    cs.add(c * s);
    yc.add(y * c);
    ys.add(y * s);
  }
};

struct StatsContext {
  std::size_t n{0};
  double variance{0};
  bool fap{false};
  double m_indep{0};
};

inline void finish_point(const PhasorSums &sums, const StatsContext &ctx, SpectrumPoint &p) {
  const double scc = sums.cc.value();
  const double sss = sums.ss.value();
  const double scs = sums.cs.value();
  const double syc = sums.yc.value();
  const double sys = sums.ys.value();

  // sum sin(2x) = 2 scs, sum cos(2x) = scc - sss
  p.tau_star = 0.5 * std::atan2(2.0 * scs, scc - sss);
  const double ct = std::cos(p.tau_star);
  const double st = std::sin(p.tau_star);
  const double cos2 = ct * ct * scc + 2.0 * ct * st * scs + st * st * sss;
  const double sin2 = st * st * scc - 2.0 * ct * st * scs + ct * ct * sss;
  const double ycos = ct * syc + st * sys;
  const double ysin = ct * sys - st * syc;

  const double floor = degenerate_floor * static_cast<double>(ctx.n);
  p.cos_degenerate = !(cos2 >= floor);
  p.sin_degenerate = !(sin2 >= floor);
  p.a = p.cos_degenerate ? 0.0 : ycos / cos2;
  p.b = p.sin_degenerate ? 0.0 : ysin / sin2;
  const auto ap = amplitude_phase(p.a, p.b);
  p.amplitude = ap.amplitude;
  p.phase = ap.phase;
  p.psd = standardized_psd(p.a, p.b, ctx.n, ctx.variance);
  if (ctx.fap) {
    p.prob_exceed = prob_exceed(p.psd, ctx.n);
    p.fap = false_alarm_probability(p.prob_exceed, ctx.m_indep);
  }
}

} // namespace detail

// Evaluates every grid frequency. Output order equals grid order and the
// per-frequency summation order is fixed, so results do not depend on the
// thread count.
inline Spectrum analyze(const SampleSet &samples, const FrequencyGrid &grid,
                        const NoiseSpec &noise, const AnalyzeOptions &options = {}) {
  if (grid.dims() != samples.dims()) {
    throw Error(ErrorCode::DimensionMismatch, "grid and samples differ in dimension");
  }
  const std::size_t n = samples.size();
  const std::size_t dims = samples.dims();
  const auto values = samples.values();

  Spectrum out;
  out.dims = dims;
  out.convention = grid.convention();
  out.n_samples = n;

  detail::StatsContext ctx;
  ctx.n = n;
  if (n < 2) {
    throw Error(ErrorCode::BadN, "analysis needs N >= 2");
  }
  ctx.variance = moments(values).variance;
  if (!(ctx.variance > 0)) {
    throw Error(ErrorCode::ZeroVariance, "all sample values are equal");
  }
  if (n < 4) {
    out.warnings.push_back("N = " + std::to_string(n) + " < 4: FAP not computed");
  } else if (options.m_indep) {
    if (!(*options.m_indep > 0)) {
      throw Error(ErrorCode::BadInput, "--m-indep must be > 0");
    }
    ctx.fap = true;
    ctx.m_indep = *options.m_indep;
  } else {
    try {
      ctx.m_indep = independent_frequencies(n);
      ctx.fap = true;
    } catch (const Error &) {
      out.warnings.push_back("N = " + std::to_string(n) +
                             ": independent-frequency count not positive, FAP not computed");
    }
  }
  const auto ci = confidence_intervals(noise, n, 0.0);
  out.delta_ab = ci.delta_ab;
  out.delta_A = ci.delta_A;
  out.fap_available = ctx.fap;
  if (ctx.fap) {
    out.m_indep = ctx.m_indep;
  }

  const std::size_t total = grid.size();
  out.points.resize(total);

  const bool separable = options.separable && grid.is_cartesian();
  const std::size_t last_axis_len = separable ? grid.axes().back().size() : 0;
  // Per-axis phasor table for the last axis: last_axis_len x N (cos, sin).
  constexpr std::size_t table_limit = std::size_t{1} << 25; // entries, 512 MiB
  if (separable && last_axis_len * n <= table_limit) {
    const auto &last = grid.axes().back();
    const std::size_t ld = dims - 1;
    std::vector<double> tc(last_axis_len * n);
    std::vector<double> ts(last_axis_len * n);
    parallel_for(last_axis_len, options.threads, [&](std::size_t j) {
      const double w = grid.to_angular(last[j]);
      for (std::size_t i = 0; i < n; ++i) {
        const double arg = w * samples.coord(i)[ld];
        tc[j * n + i] = std::cos(arg);
        ts[j * n + i] = std::sin(arg);
      }
    });

    const std::size_t rows = total / last_axis_len;
    parallel_for(rows, options.threads, [&](std::size_t row) {
      // Phase of the leading axes is shared by the whole row.
      std::vector<double> pc(n, 1.0);
      std::vector<double> ps(n, 0.0);
      if (ld > 0) {
        std::vector<double> w(ld);
        const auto f = grid.freq(row * last_axis_len);
        for (std::size_t d = 0; d < ld; ++d) {
          w[d] = grid.to_angular(f[d]);
        }
        for (std::size_t i = 0; i < n; ++i) {
          const auto t = samples.coord(i);
          double arg = 0;
          for (std::size_t d = 0; d < ld; ++d) {
            arg += w[d] * t[d];
          }
          pc[i] = std::cos(arg);
          ps[i] = std::sin(arg);
        }
      }
      for (std::size_t j = 0; j < last_axis_len; ++j) {
        const double *lc = tc.data() + j * n;
        const double *ls = ts.data() + j * n;
        detail::PhasorSums sums;
        for (std::size_t i = 0; i < n; ++i) {
          const double c = pc[i] * lc[i] - ps[i] * ls[i];
          const double s = ps[i] * lc[i] + pc[i] * ls[i];
          sums.add(c, s, values[i]);
        }
        const std::size_t k = row * last_axis_len + j;
        auto &p = out.points[k];
        const auto f = grid.freq(k);
        p.freq.assign(f.begin(), f.end());
        detail::finish_point(sums, ctx, p);
      }
    });
  } else {
    parallel_for(total, options.threads, [&](std::size_t k) {
      std::vector<double> w(dims);
      grid.omega(k, w);
      detail::PhasorSums sums;
      for (std::size_t i = 0; i < n; ++i) {
        const double arg = dot(w, samples.coord(i));
        sums.add(std::cos(arg), std::sin(arg), values[i]);
      }
      auto &p = out.points[k];
      const auto f = grid.freq(k);
      p.freq.assign(f.begin(), f.end());
      detail::finish_point(sums, ctx, p);
    });
  }
  return out;
}

} // namespace ndlomb
