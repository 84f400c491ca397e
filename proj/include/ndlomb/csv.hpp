#pragma once

// Text formats.
//
//   samples   header t1,...,tm,value; `nan` (any case) in value marks missing
//   spectrum  header f1,...,fm,tau_star,a,b,amplitude,phase,psd,prob,fap;
//             frequencies are ordinary; prob and fap are empty when not computed
//   field     `# origin=o1,...,om`, `# spacing=s1,...,sm`, `# shape=n1,...,nm`,
//             then header i1,...,im,value with zero-based integer indices
//
// Numbers are written with 17 significant digits. Blank lines are ignored.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "ndlomb/baselines.hpp"
#include "ndlomb/error.hpp"
#include "ndlomb/types.hpp"

namespace ndlomb::csv {

inline std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

inline double parse_double(std::string_view s, std::size_t line_no, bool allow_nan = false) {
  if (allow_nan && iequals(s, "nan")) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::Parse,
                "line " + std::to_string(line_no) + ": not a number: '" + std::string(s) + "'");
  }
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": non-finite number");
  }
  return v;
}

inline std::size_t parse_index(std::string_view s, std::size_t line_no) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::Parse,
                "line " + std::to_string(line_no) + ": not an index: '" + std::string(s) + "'");
  }
  return v;
}

// Checks `prefix1,...,prefixm,<tail...>` and returns m.
inline std::size_t parse_header(std::string_view line, std::string_view prefix,
                                const std::vector<std::string_view> &tail) {
  const auto cols = split(line);
  if (cols.size() <= tail.size()) {
    throw Error(ErrorCode::Parse, "header has too few columns");
  }
  const std::size_t dims = cols.size() - tail.size();
  for (std::size_t d = 0; d < dims; ++d) {
    if (cols[d] != std::string(prefix) + std::to_string(d + 1)) {
      throw Error(ErrorCode::Parse, "header column " + std::to_string(d + 1) + " should be " +
                                        std::string(prefix) + std::to_string(d + 1));
    }
  }
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (cols[dims + i] != tail[i]) {
      throw Error(ErrorCode::Parse, "header column '" + std::string(cols[dims + i]) +
                                        "' should be '" + std::string(tail[i]) + "'");
    }
  }
  return dims;
}

inline std::ifstream open_in(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  }
  return in;
}

inline std::ofstream open_out(const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  }
  return out;
}

// ---- samples ----

inline RawSamples read_samples(std::istream &in) {
  RawSamples raw;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) {
      continue;
    }
    if (!have_header) {
      raw.dims = parse_header(body, "t", {"value"});
      have_header = true;
      continue;
    }
    const auto cols = split(body);
    if (cols.size() != raw.dims + 1) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(raw.dims + 1) + " columns");
    }
    for (std::size_t d = 0; d < raw.dims; ++d) {
      raw.coords.push_back(parse_double(cols[d], line_no));
    }
    raw.values.push_back(parse_double(cols[raw.dims], line_no, true));
  }
  if (!have_header) {
    throw Error(ErrorCode::Parse, "sample file has no header");
  }
  return raw;
}

inline RawSamples read_samples(const std::string &path) {
  auto in = open_in(path);
  return read_samples(in);
}

inline void write_samples(std::ostream &out, const RawSamples &raw) {
  for (std::size_t d = 0; d < raw.dims; ++d) {
    out << 't' << d + 1 << ',';
  }
  out << "value\n";
  for (std::size_t n = 0; n < raw.size(); ++n) {
    for (double t : raw.coord(n)) {
      out << format_double(t) << ',';
    }
    out << format_double(raw.values[n]) << '\n';
  }
}

inline void write_samples(std::ostream &out, const SampleSet &s) {
  RawSamples raw;
  raw.dims = s.dims();
  raw.coords.assign(s.coords().begin(), s.coords().end());
  raw.values.assign(s.values().begin(), s.values().end());
  write_samples(out, raw);
}

// ---- spectra ----

inline const std::vector<std::string_view> &spectrum_tail() {
  static const std::vector<std::string_view> tail{"tau_star", "a",   "b",    "amplitude",
                                                  "phase",    "psd", "prob", "fap"};
  return tail;
}

inline void write_spectrum(std::ostream &out, const Spectrum &s) {
  for (std::size_t d = 0; d < s.dims; ++d) {
    out << 'f' << d + 1 << ',';
  }
  out << "tau_star,a,b,amplitude,phase,psd,prob,fap\n";
  for (const auto &p : s.points) {
    for (double f : p.freq) {
      out << format_double(s.ordinary(f)) << ',';
    }
    out << format_double(p.tau_star) << ',' << format_double(p.a) << ',' << format_double(p.b)
        << ',' << format_double(p.amplitude) << ',' << format_double(p.phase) << ','
        << format_double(p.psd) << ',';
    if (std::isfinite(p.prob_exceed)) {
      out << format_double(p.prob_exceed);
    }
    out << ',';
    if (std::isfinite(p.fap)) {
      out << format_double(p.fap);
    }
    out << '\n';
  }
}

// Reads a spectrum back; frequencies come back in the ordinary convention.
inline Spectrum read_spectrum(std::istream &in) {
  Spectrum s;
  s.convention = FrequencyConvention::Ordinary;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool all_fap = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) {
      continue;
    }
    if (!have_header) {
      s.dims = parse_header(body, "f", spectrum_tail());
      have_header = true;
      continue;
    }
    const auto cols = split(body);
    if (cols.size() != s.dims + spectrum_tail().size()) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": wrong column count");
    }
    SpectrumPoint p;
    for (std::size_t d = 0; d < s.dims; ++d) {
      p.freq.push_back(parse_double(cols[d], line_no));
    }
    std::size_t c = s.dims;
    p.tau_star = parse_double(cols[c++], line_no);
    p.a = parse_double(cols[c++], line_no);
    p.b = parse_double(cols[c++], line_no);
    p.amplitude = parse_double(cols[c++], line_no);
    p.phase = parse_double(cols[c++], line_no);
    p.psd = parse_double(cols[c++], line_no);
    if (!cols[c].empty()) {
      p.prob_exceed = parse_double(cols[c], line_no);
    }
    ++c;
    if (!cols[c].empty()) {
      p.fap = parse_double(cols[c], line_no);
    } else {
      all_fap = false;
    }
    s.points.push_back(std::move(p));
  }
  if (!have_header) {
    throw Error(ErrorCode::Parse, "spectrum file has no header");
  }
  s.fap_available = all_fap && !s.points.empty();
  return s;
}

inline Spectrum read_spectrum(const std::string &path) {
  auto in = open_in(path);
  return read_spectrum(in);
}

// ---- gridded fields ----

inline void write_field(std::ostream &out, const GriddedField &f) {
  const auto list = [&](const char *key, const auto &xs) {
    out << "# " << key << '=';
    for (std::size_t d = 0; d < xs.size(); ++d) {
      if (d > 0) {
        out << ',';
      }
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(xs[d])>>) {
        out << format_double(xs[d]);
      } else {
        out << xs[d];
      }
    }
    out << '\n';
  };
  list("origin", f.origin);
  list("spacing", f.spacing);
  list("shape", f.shape);
  for (std::size_t d = 0; d < f.dims; ++d) {
    out << 'i' << d + 1 << ',';
  }
  out << "value\n";
  for (std::size_t k = 0; k < f.size(); ++k) {
    for (auto i : f.index(k)) {
      out << i << ',';
    }
    out << format_double(f.values[k]) << '\n';
  }
}

// Cells not listed are missing. Without a `# shape=` line the shape is
// max index + 1 per axis.
inline GriddedField read_field(std::istream &in) {
  std::vector<double> origin;
  std::vector<double> spacing;
  std::vector<std::size_t> shape;
  std::vector<std::vector<std::size_t>> idx;
  std::vector<double> vals;
  std::size_t dims = 0;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = trim(line);
    if (body.empty()) {
      continue;
    }
    if (body.front() == '#') {
      body = trim(body.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) {
        continue;
      }
      const auto key = trim(body.substr(0, eq));
      const auto items = split(body.substr(eq + 1));
      if (key == "origin" || key == "spacing") {
        auto &target = key == "origin" ? origin : spacing;
        for (auto item : items) {
          target.push_back(parse_double(item, line_no));
        }
      } else if (key == "shape") {
        for (auto item : items) {
          shape.push_back(parse_index(item, line_no));
        }
      }
      continue;
    }
    if (!have_header) {
      dims = parse_header(body, "i", {"value"});
      have_header = true;
      continue;
    }
    const auto cols = split(body);
    if (cols.size() != dims + 1) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": wrong column count");
    }
    std::vector<std::size_t> i(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      i[d] = parse_index(cols[d], line_no);
    }
    idx.push_back(std::move(i));
    vals.push_back(parse_double(cols[dims], line_no, true));
  }
  if (!have_header) {
    throw Error(ErrorCode::Parse, "field file has no header");
  }
  if (origin.empty()) {
    origin.assign(dims, 0.0);
  }
  if (spacing.empty()) {
    spacing.assign(dims, 1.0);
  }
  if (shape.empty()) {
    shape.assign(dims, 0);
    for (const auto &i : idx) {
      for (std::size_t d = 0; d < dims; ++d) {
        shape[d] = std::max(shape[d], i[d] + 1);
      }
    }
  }
  if (shape.size() != dims || origin.size() != dims || spacing.size() != dims) {
    throw Error(ErrorCode::DimensionMismatch, "origin, spacing and shape need one entry per axis");
  }
  std::size_t total = 1;
  for (auto s : shape) {
    total *= s;
  }
  std::vector<double> values(total, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    std::size_t k = 0;
    for (std::size_t d = 0; d < dims; ++d) {
      if (idx[r][d] >= shape[d]) {
        throw Error(ErrorCode::BadInput, "field index outside the declared shape");
      }
      k = k * shape[d] + idx[r][d];
    }
    values[k] = vals[r];
  }
  return make_field(std::move(shape), std::move(origin), std::move(spacing), std::move(values));
}

inline GriddedField read_field(const std::string &path) {
  auto in = open_in(path);
  return read_field(in);
}

} // namespace ndlomb::csv
