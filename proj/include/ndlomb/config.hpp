#pragma once

// Flat key=value description of a synthetic dataset, plus the string forms
// used on the command line.
//
//   pattern          regular | uniform-random | jittered
//   ranges           min:max per axis, comma separated, e.g. -1:1,-1:1
//   steps            per-axis step (regular, jittered)
//   count            number of points (uniform-random)
//   jitter           fraction of a step, default 0.5 (jittered)
//   gaps             axis:lo:hi entries separated by ';' (axis is 1-based)
//   missing_fraction in [0, 1)
//   components       f1,...,fm:A:phi entries separated by '|'; empty = no signal
//   sigma            Gaussian noise standard deviation
//   seed             unsigned 64-bit integer
//
// '#' starts a comment; blank lines are ignored; keys may appear once.

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "ndlomb/csv.hpp"
#include "ndlomb/error.hpp"
#include "ndlomb/synth.hpp"
#include "ndlomb/types.hpp"

namespace ndlomb {

struct GenerateSpec {
  SignalSpec signal;
  SamplingSpec sampling;
  double sigma{0};
  std::uint64_t seed{0};
};

namespace config {

inline double number(std::string_view s, std::string_view what) {
  s = csv::trim(s);
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::Parse, std::string(what) + ": not a finite number: '" +
                                      std::string(s) + "'");
  }
  return v;
}

inline std::uint64_t unsigned_number(std::string_view s, std::string_view what) {
  s = csv::trim(s);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Parse, std::string(what) + ": not an unsigned integer: '" +
                                      std::string(s) + "'");
  }
  return v;
}

inline std::vector<double> number_list(std::string_view s, std::string_view what) {
  std::vector<double> out;
  for (auto item : csv::split(s)) {
    out.push_back(number(item, what));
  }
  return out;
}

// "f1,...,fm:A:phi|..." ; an empty or blank string means no components.
inline std::vector<SignalComponent> parse_components(std::string_view s) {
  std::vector<SignalComponent> out;
  if (csv::trim(s).empty()) {
    return out;
  }
  for (auto entry : csv::split(s, '|')) {
    const auto parts = csv::split(entry, ':');
    if (parts.size() != 3) {
      throw Error(ErrorCode::Parse, "component '" + std::string(entry) +
                                        "' should read f1,...,fm:amplitude:phase");
    }
    out.push_back({number_list(parts[0], "component frequency"),
                   number(parts[1], "component amplitude"), number(parts[2], "component phase")});
  }
  return out;
}

struct GridSpec {
  std::vector<AxisRange> ranges;
  std::vector<double> steps;
};

// "min:step:max,min:step:max,..."
inline GridSpec parse_grid(std::string_view s) {
  GridSpec g;
  for (auto axis : csv::split(s)) {
    const auto parts = csv::split(axis, ':');
    if (parts.size() != 3) {
      throw Error(ErrorCode::Parse, "grid axis '" + std::string(axis) + "' should read min:step:max");
    }
    g.ranges.push_back({number(parts[0], "grid min"), number(parts[2], "grid max")});
    g.steps.push_back(number(parts[1], "grid step"));
  }
  return g;
}

// "min:max,min:max,..."
inline std::vector<AxisRange> parse_ranges(std::string_view s) {
  std::vector<AxisRange> out;
  for (auto axis : csv::split(s)) {
    const auto parts = csv::split(axis, ':');
    if (parts.size() != 2) {
      throw Error(ErrorCode::Parse, "range '" + std::string(axis) + "' should read min:max");
    }
    out.push_back({number(parts[0], "range min"), number(parts[1], "range max")});
  }
  return out;
}

inline std::vector<GapInterval> parse_gaps(std::string_view s) {
  std::vector<GapInterval> out;
  if (csv::trim(s).empty()) {
    return out;
  }
  for (auto entry : csv::split(s, ';')) {
    const auto parts = csv::split(entry, ':');
    if (parts.size() != 3) {
      throw Error(ErrorCode::Parse, "gap '" + std::string(entry) + "' should read axis:lo:hi");
    }
    const auto axis = unsigned_number(parts[0], "gap axis");
    if (axis == 0) {
      throw Error(ErrorCode::Parse, "gap axis is 1-based");
    }
    out.push_back({static_cast<std::size_t>(axis - 1), number(parts[1], "gap lo"),
                   number(parts[2], "gap hi")});
  }
  return out;
}

inline std::map<std::string, std::string> parse_key_values(std::istream &in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = std::string_view(line);
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = csv::trim(body);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key(csv::trim(body.substr(0, eq)));
    if (!kv.emplace(key, std::string(csv::trim(body.substr(eq + 1)))).second) {
      throw Error(ErrorCode::Parse, "config key '" + key + "' given twice");
    }
  }
  return kv;
}

inline GenerateSpec from_key_values(const std::map<std::string, std::string> &kv) {
  static const std::vector<std::string> known{"pattern", "ranges", "steps", "count",
                                              "jitter",  "gaps",   "missing_fraction",
                                              "components", "sigma", "seed"};
  for (const auto &[k, v] : kv) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw Error(ErrorCode::Parse, "unknown config key '" + k + "'");
    }
  }
  const auto get = [&](const std::string &k) -> const std::string * {
    const auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  const auto need = [&](const std::string &k) -> const std::string & {
    const auto *v = get(k);
    if (!v) {
      throw Error(ErrorCode::Parse, "config key '" + k + "' is required");
    }
    return *v;
  };

  GenerateSpec spec;
  const std::string pattern = get("pattern") ? *get("pattern") : "regular";
  const auto ranges = parse_ranges(need("ranges"));
  if (pattern == "regular") {
    spec.sampling.pattern = RegularPattern{ranges, number_list(need("steps"), "steps")};
  } else if (pattern == "uniform-random") {
    spec.sampling.pattern =
        UniformRandomPattern{ranges, static_cast<std::size_t>(unsigned_number(need("count"), "count"))};
  } else if (pattern == "jittered") {
    JitteredPattern p{ranges, number_list(need("steps"), "steps")};
    if (const auto *j = get("jitter")) {
      p.jitter = number(*j, "jitter");
    }
    spec.sampling.pattern = p;
  } else {
    throw Error(ErrorCode::Parse, "unknown pattern '" + pattern + "'");
  }
  if (const auto *g = get("gaps")) {
    spec.sampling.gaps = parse_gaps(*g);
  }
  if (const auto *m = get("missing_fraction")) {
    spec.sampling.missing_fraction = number(*m, "missing_fraction");
  }
  if (const auto *c = get("components")) {
    spec.signal.components = parse_components(*c);
  }
  if (const auto *s = get("sigma")) {
    spec.sigma = number(*s, "sigma");
  }
  if (const auto *s = get("seed")) {
    spec.seed = unsigned_number(*s, "seed");
  }
  return spec;
}

inline GenerateSpec parse(std::istream &in) { return from_key_values(parse_key_values(in)); }

// Resolved spec in the same key=value form; parse(to_string(s)) == s.
inline std::string to_string(const GenerateSpec &spec) {
  std::ostringstream out;
  const auto join = [&](const auto &xs, auto fmt, char sep) {
    std::string r;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0) {
        r += sep;
      }
      r += fmt(xs[i]);
    }
    return r;
  };
  const auto num = [](double v) { return csv::format_double(v); };
  const auto range = [](const AxisRange &r) {
    return csv::format_double(r.min) + ":" + csv::format_double(r.max);
  };
  std::visit(
      [&](const auto &p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RegularPattern>) {
          out << "pattern=regular\n";
          out << "ranges=" << join(p.ranges, range, ',') << '\n';
          out << "steps=" << join(p.steps, num, ',') << '\n';
        } else if constexpr (std::is_same_v<P, UniformRandomPattern>) {
          out << "pattern=uniform-random\n";
          out << "ranges=" << join(p.ranges, range, ',') << '\n';
          out << "count=" << p.count << '\n';
        } else {
          out << "pattern=jittered\n";
          out << "ranges=" << join(p.ranges, range, ',') << '\n';
          out << "steps=" << join(p.steps, num, ',') << '\n';
          out << "jitter=" << num(p.jitter) << '\n';
        }
      },
      spec.sampling.pattern);
  out << "gaps="
      << join(spec.sampling.gaps,
              [](const GapInterval &g) {
                return std::to_string(g.axis + 1) + ":" + csv::format_double(g.lo) + ":" +
                       csv::format_double(g.hi);
              },
              ';')
      << '\n';
  out << "missing_fraction=" << num(spec.sampling.missing_fraction) << '\n';
  out << "components="
      << join(spec.signal.components,
              [&](const SignalComponent &c) {
                return join(c.freq, num, ',') + ":" + num(c.amplitude) + ":" + num(c.phase);
              },
              '|')
      << '\n';
  out << "sigma=" << num(spec.sigma) << '\n';
  out << "seed=" << spec.seed << '\n';
  return out.str();
}

} // namespace config

namespace presets {

inline GenerateSpec simple_wave() {
  return {simple_wave_signal(), simple_wave_sampling(), 0.0, simple_wave_seed};
}

inline GenerateSpec traveling_wave() {
  return {traveling_wave_signal().signal(), traveling_wave_sampling(), traveling_wave_sigma,
          traveling_wave_seed};
}

inline GenerateSpec noise_only() {
  return {SignalSpec{}, noise_only_sampling(), noise_only_sigma, noise_only_seed};
}

// 100 equidistant samples of cos(t) on [0, T), T = 2 pi + pi/5.
inline GenerateSpec sinus_window() {
  constexpr std::size_t n = 100;
  const double step = sinus_window_length / static_cast<double>(n);
  SamplingSpec s;
  s.pattern = RegularPattern{{{0.0, step * static_cast<double>(n - 1)}}, {step}};
  return {{{{{1.0 / two_pi}, 1.0, 0.0}}}, s, 0.0, 0};
}

inline GenerateSpec by_name(std::string_view name) {
  if (name == "simple-wave") {
    return simple_wave();
  }
  if (name == "traveling-wave") {
    return traveling_wave();
  }
  if (name == "noise-only") {
    return noise_only();
  }
  if (name == "sinus-window") {
    return sinus_window();
  }
  throw Error(ErrorCode::BadInput, "unknown preset '" + std::string(name) +
                                       "' (simple-wave, traveling-wave, noise-only, sinus-window)");
}

// Analysis grid matching each preset.
inline FrequencyGrid default_grid(std::string_view name) {
  if (name == "simple-wave") {
    const AxisRange r[] = {{-10.0, 10.0}, {-10.0, 10.0}};
    const double steps[] = {0.025, 0.025};
    return build_regular_grid(r, steps);
  }
  if (name == "traveling-wave") {
    return traveling_wave_grid();
  }
  if (name == "noise-only") {
    const AxisRange r[] = {{0.5, 50.4}};
    const double steps[] = {0.1};
    return build_regular_grid(r, steps);
  }
  if (name == "sinus-window") {
    const AxisRange r[] = {{0.01, 0.5}};
    const double steps[] = {0.01};
    return build_regular_grid(r, steps);
  }
  throw Error(ErrorCode::BadInput, "unknown preset '" + std::string(name) + "'");
}

} // namespace presets

} // namespace ndlomb
