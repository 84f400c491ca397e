#pragma once

// Markdown summary of a spectrum: strongest peaks, confidence intervals,
// 1-D error budget and false alarm probabilities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ndlomb/baselines.hpp"
#include "ndlomb/csv.hpp"
#include "ndlomb/lsm.hpp"
#include "ndlomb/types.hpp"

namespace ndlomb {

struct ReportContext {
  std::string title{"spectrum"};
  std::optional<std::size_t> n_samples;
  std::optional<NoiseSpec> noise;
  std::optional<double> window; // 1-D observation length, enables the error budget
  std::size_t peaks{5};
};

// Indices of the strongest points, skipping the mirror image -f of a point
// already listed.
inline std::vector<std::size_t> top_peaks(const Spectrum &s, std::size_t count) {
  std::vector<std::size_t> order(s.points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return s.points[x].psd > s.points[y].psd;
  });
  const auto mirrored = [&](std::size_t x, std::size_t y) {
    const auto &fx = s.points[x].freq;
    const auto &fy = s.points[y].freq;
    for (std::size_t d = 0; d < fx.size(); ++d) {
      if (std::abs(fx[d] + fy[d]) > 1e-12 * (1.0 + std::abs(fx[d]))) {
        return false;
      }
    }
    return true;
  };
  std::vector<std::size_t> out;
  for (std::size_t k : order) {
    if (out.size() == count) {
      break;
    }
    if (std::none_of(out.begin(), out.end(), [&](std::size_t j) { return mirrored(j, k); })) {
      out.push_back(k);
    }
  }
  return out;
}

inline std::string render_report(const Spectrum &s, const ReportContext &ctx) {
  using csv::format_double;
  std::ostringstream out;
  const std::size_t n = ctx.n_samples.value_or(s.n_samples);
  out << "# " << ctx.title << "\n\n";
  out << "- dimensions: " << s.dims << '\n';
  out << "- frequencies: " << s.points.size() << '\n';
  out << "- samples N: " << (n > 0 ? std::to_string(n) : "unknown") << '\n';
  if (s.fap_available && std::isfinite(s.m_indep)) {
    out << "- independent frequencies M: " << format_double(s.m_indep) << '\n';
  }
  out << "- FAP available: " << (s.fap_available ? "yes" : "no") << "\n\n";

  out << "## Peaks\n\n|rank|";
  for (std::size_t d = 0; d < s.dims; ++d) {
    out << "f" << d + 1 << '|';
  }
  out << "psd|amplitude|phase|signal_phase|prob|fap|\n|---|";
  for (std::size_t d = 0; d < s.dims; ++d) {
    out << "---|";
  }
  out << "---|---|---|---|---|---|\n";
  const auto peaks = top_peaks(s, ctx.peaks);
  for (std::size_t r = 0; r < peaks.size(); ++r) {
    const auto &p = s.points[peaks[r]];
    out << '|' << r + 1 << '|';
    for (double f : p.freq) {
      out << format_double(s.ordinary(f)) << '|';
    }
    out << format_double(p.psd) << '|' << format_double(p.amplitude) << '|'
        << format_double(p.phase) << '|' << format_double(signal_phase(p)) << '|'
        << (std::isfinite(p.prob_exceed) ? format_double(p.prob_exceed) : "") << '|'
        << (std::isfinite(p.fap) ? format_double(p.fap) : "") << "|\n";
  }
  out << '\n';

  if (ctx.noise && n > 0 && !peaks.empty()) {
    const auto &noise = *ctx.noise;
    const auto ci = confidence_intervals(noise, n, s.points[peaks.front()].amplitude);
    out << "## Confidence intervals\n\n";
    out << "- sigma: " << format_double(noise.sigma) << ", quantile: "
        << format_double(noise.quantile) << '\n';
    out << "- delta_a = delta_b: " << format_double(ci.delta_ab) << '\n';
    out << "- delta_A: " << format_double(ci.delta_A) << '\n';
    out << "- delta_phi at the top peak: " << format_double(ci.delta_phi) << "\n\n";

    if (ctx.window && s.dims == 1) {
      const double omega = std::abs(two_pi * s.ordinary(s.points[peaks.front()].freq[0]));
      out << "## Error budget\n\n";
      if (omega > 0) {
        const auto e = omd_error_budget(*ctx.window, omega, n, noise);
        out << "- window T: " << format_double(*ctx.window) << ", omega: "
            << format_double(omega) << '\n';
        out << "- eps_T: " << format_double(e.eps_T) << '\n';
        out << "- eps_FS: " << format_double(e.eps_FS) << '\n';
        out << "- eps_LS: " << format_double(e.eps_LS) << "\n\n";
      } else {
        out << "- top peak at zero frequency, no budget\n\n";
      }
    }
  }

  if (!s.warnings.empty()) {
    out << "## Warnings\n\n";
    for (const auto &w : s.warnings) {
      out << "- " << w << '\n';
    }
    out << '\n';
  }
  return out.str();
}

} // namespace ndlomb
