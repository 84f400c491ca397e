// Command-line front end: generate, analyze, baseline, compare, sweep, emax, report.

#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ndlomb/ndlomb.hpp"

namespace {

using namespace ndlomb;

constexpr int exit_usage = 64;
constexpr int exit_internal = 70;

const char *exit_code_help =
    "Exit codes:\n"
    "   0  success\n"
    "   1  EmptyAfterFilter   no finite-valued samples remain\n"
    "   2  DimensionMismatch  inconsistent dimensions\n"
    "   3  BadRange           invalid grid or sampling range\n"
    "   4  DegenerateDenominator\n"
    "   5  SingularSystem\n"
    "   6  ZeroVariance       all sample values equal\n"
    "   7  BadN               too few samples\n"
    "   8  ZeroResidual\n"
    "   9  BadInput           invalid argument value\n"
    "  10  AllMissing         every grid cell missing\n"
    "  11  Io                 file cannot be read or written\n"
    "  12  Parse              malformed file, config or flag value\n"
    "  64  usage error\n"
    "  70  internal error\n";

struct Options {
  std::string input;
  std::string output;
  std::string grid;
  std::string preset;
  std::string config;
  std::string format{"csv"};
  std::optional<double> sigma;
  double alpha{0.05};
  std::optional<double> m_indep;
  std::optional<std::uint64_t> seed;
  unsigned threads{1};

  // generate overrides
  std::optional<std::string> components;
  std::optional<std::string> pattern;
  std::optional<std::string> ranges;
  std::optional<std::string> steps;
  std::optional<std::size_t> count;
  std::optional<double> jitter;
  std::optional<std::string> gaps;
  std::optional<double> missing_fraction;

  // baseline
  std::string method{"dft"};
  std::string freq;
  std::optional<double> window;
  std::string field_output;

  // sweep
  std::string sizes{"50,100,200,400,800"};
  std::size_t replicates{1};

  // emax
  std::size_t resolution{1000000};

  // report
  std::string samples;
  std::size_t peaks{5};
};

std::string fmt(double v) { return csv::format_double(v); }

std::string fmt_vec(const std::vector<double> &v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += (i ? ", " : "") + fmt(v[i]);
  }
  return s + ")";
}

void write_text(const std::string &path, const std::string &text) {
  auto out = csv::open_out(path);
  out << text;
  if (!out) {
    throw Error(ErrorCode::Io, "write to '" + path + "' failed");
  }
}

template <class Fn> void write_file(const std::string &path, Fn &&fn) {
  auto out = csv::open_out(path);
  fn(out);
  out.flush();
  if (!out) {
    throw Error(ErrorCode::Io, "write to '" + path + "' failed");
  }
}

void check_format(const Options &o) {
  if (o.format != "csv") {
    throw Error(ErrorCode::BadInput, "unsupported format '" + o.format + "' (csv)");
  }
}

// Preset or config file, then individual flag overrides.
GenerateSpec resolve_generate(const Options &o) {
  GenerateSpec spec;
  if (!o.config.empty()) {
    auto in = csv::open_in(o.config);
    spec = config::parse(in);
  } else {
    spec = presets::by_name(o.preset.empty() ? "simple-wave" : o.preset);
  }
  if (o.ranges) {
    const auto ranges = config::parse_ranges(*o.ranges);
    const std::string pattern = o.pattern.value_or("regular");
    if (pattern == "regular" || pattern == "jittered") {
      if (!o.steps) {
        throw Error(ErrorCode::BadInput, "--steps is required with --ranges for " + pattern);
      }
      const auto steps = config::number_list(*o.steps, "steps");
      if (pattern == "regular") {
        spec.sampling.pattern = RegularPattern{ranges, steps};
      } else {
        spec.sampling.pattern = JitteredPattern{ranges, steps, o.jitter.value_or(0.5)};
      }
    } else if (pattern == "uniform-random") {
      if (!o.count) {
        throw Error(ErrorCode::BadInput, "--count is required for uniform-random");
      }
      spec.sampling.pattern = UniformRandomPattern{ranges, *o.count};
    } else {
      throw Error(ErrorCode::BadInput, "unknown pattern '" + pattern + "'");
    }
  } else if (o.pattern || o.steps || o.count || o.jitter) {
    throw Error(ErrorCode::BadInput, "--pattern, --steps, --count and --jitter need --ranges");
  }
  if (o.gaps) {
    spec.sampling.gaps = config::parse_gaps(*o.gaps);
  }
  if (o.missing_fraction) {
    spec.sampling.missing_fraction = *o.missing_fraction;
  }
  if (o.components) {
    spec.signal.components = config::parse_components(*o.components);
  }
  if (o.sigma) {
    spec.sigma = *o.sigma;
  }
  if (o.seed) {
    spec.seed = *o.seed;
  }
  return spec;
}

RawSamples generate_from(const GenerateSpec &spec) {
  return generate_rows(spec.signal, spec.sampling, spec.sigma, spec.seed);
}

// Rows from --input, or generated from --preset.
RawSamples load_rows(const Options &o) {
  if (!o.input.empty()) {
    return csv::read_samples(o.input);
  }
  if (!o.preset.empty()) {
    // --sigma describes the analysis noise here, not the generator's
    Options preset_only = o;
    preset_only.sigma.reset();
    return generate_from(resolve_generate(preset_only));
  }
  throw Error(ErrorCode::BadInput, "need --input or --preset");
}

FrequencyGrid resolve_grid(const Options &o, std::size_t dims) {
  if (!o.grid.empty()) {
    const auto g = config::parse_grid(o.grid);
    if (g.ranges.size() != dims) {
      throw Error(ErrorCode::DimensionMismatch, "--grid has " + std::to_string(g.ranges.size()) +
                                                    " axes, samples have " + std::to_string(dims));
    }
    return build_regular_grid(g.ranges, g.steps);
  }
  if (!o.preset.empty()) {
    return presets::default_grid(o.preset);
  }
  throw Error(ErrorCode::BadInput, "need --grid (or --preset for its default grid)");
}

NoiseSpec resolve_noise(const Options &o, const SampleSet &samples) {
  const double sigma =
      o.sigma ? *o.sigma : std::sqrt(moments(samples.values()).variance);
  return NoiseSpec::make(sigma, o.alpha);
}

Spectrum run_analyze(const Options &o, const SampleSet &samples) {
  AnalyzeOptions ao;
  ao.m_indep = o.m_indep;
  ao.threads = o.threads;
  return analyze(samples, resolve_grid(o, samples.dims()), resolve_noise(o, samples), ao);
}

void print_warnings(const Spectrum &s) {
  for (const auto &w : s.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
}

std::vector<double> ordinary_freq(const Spectrum &s, const SpectrumPoint &p) {
  std::vector<double> f;
  for (double x : p.freq) {
    f.push_back(s.ordinary(x));
  }
  return f;
}

int cmd_generate(const Options &o) {
  check_format(o);
  if (o.output.empty()) {
    throw Error(ErrorCode::BadInput, "generate needs --output");
  }
  const auto spec = resolve_generate(o);
  const auto rows = generate_from(spec);
  write_file(o.output, [&](std::ostream &out) { csv::write_samples(out, rows); });
  write_text(o.output + ".config", config::to_string(spec));
  std::size_t missing = 0;
  for (double v : rows.values) {
    missing += std::isfinite(v) ? 0 : 1;
  }
  std::cout << "rows=" << rows.size() << " missing=" << missing << " seed=" << spec.seed
            << " output=" << o.output << '\n';
  return 0;
}

int cmd_analyze(const Options &o) {
  check_format(o);
  const auto samples = validate_samples(load_rows(o));
  const auto spec = run_analyze(o, samples);
  print_warnings(spec);
  if (!o.output.empty()) {
    write_file(o.output, [&](std::ostream &out) { csv::write_spectrum(out, spec); });
  }
  const auto &p = spec.points[spec.argmax_psd()];
  std::cout << "peak f=" << fmt_vec(ordinary_freq(spec, p)) << " psd=" << fmt(p.psd)
            << " fap=" << (std::isfinite(p.fap) ? fmt(p.fap) : "n/a") << " N=" << spec.n_samples
            << " M=" << (spec.fap_available ? fmt(spec.m_indep) : "n/a") << '\n';
  return 0;
}

GriddedField load_field(const Options &o) {
  if (!o.input.empty()) {
    auto in = csv::open_in(o.input);
    std::string first;
    std::getline(in, first);
    const auto head = csv::trim(first);
    if (!head.empty() && (head.front() == '#' || head.rfind("i1", 0) == 0)) {
      return csv::read_field(o.input);
    }
  }
  return field_from_rows(load_rows(o));
}

int cmd_baseline(const Options &o) {
  check_format(o);
  if (o.method == "dft") {
    const auto field = load_field(o);
    if (!o.field_output.empty()) {
      write_file(o.field_output, [&](std::ostream &out) { csv::write_field(out, field); });
    }
    const auto spec = zero_padded_dft_psd(field);
    if (!o.output.empty()) {
      write_file(o.output, [&](std::ostream &out) { csv::write_spectrum(out, spec); });
    }
    const auto &p = spec.points[spec.argmax_psd()];
    std::cout << "dft peak f=" << fmt_vec(p.freq) << " psd=" << fmt(p.psd)
              << " amplitude=" << fmt(p.amplitude) << " cells=" << field.size()
              << " missing=" << field.n_zero << '\n';
    return 0;
  }
  if (o.method != "omd") {
    throw Error(ErrorCode::BadInput, "unknown method '" + o.method + "' (dft, omd)");
  }
  const auto samples = validate_samples(load_rows(o));
  std::vector<double> omega;
  if (!o.freq.empty()) {
    omega = config::number_list(o.freq, "--freq");
  } else if (o.preset == "sinus-window") {
    omega = {1.0 / two_pi};
  } else {
    throw Error(ErrorCode::BadInput, "omd needs --freq f1,...,fm");
  }
  for (double &w : omega) {
    w *= two_pi;
  }
  require_dims(samples, omega);
  const auto omd = quadrature_demod(samples, omega);
  const auto lsm = lsm_unshifted(samples, omega);
  const double a_lsm = std::hypot(lsm.a, lsm.b);
  std::ostringstream table;
  table << "method,a,b,amplitude\n";
  table << "omd," << fmt(omd.a) << ',' << fmt(omd.b) << ',' << fmt(std::hypot(omd.a, omd.b))
        << '\n';
  table << "lsm," << fmt(lsm.a) << ',' << fmt(lsm.b) << ',' << fmt(a_lsm) << '\n';
  if (!o.output.empty()) {
    write_text(o.output, table.str());
  }
  std::cout << table.str();
  if (samples.dims() == 1 && a_lsm > 0) {
    double window = 0;
    if (o.window) {
      window = *o.window;
    } else {
      const auto t = samples.coords();
      const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
      const double n = static_cast<double>(samples.size());
      window = n > 1 ? (*hi - *lo) * n / (n - 1.0) : 0.0;
    }
    const auto budget = omd_error_budget(window, std::abs(omega[0]), samples.size(),
                                         NoiseSpec::make(o.sigma.value_or(0.0), o.alpha));
    const double estimate = std::hypot(omd.a - lsm.a, omd.b - lsm.b) / a_lsm;
    std::cout << "window=" << fmt(window) << " eps_T_estimate=" << fmt(estimate)
              << " eps_T_bound=" << fmt(budget.eps_T) << " eps_FS=" << fmt(budget.eps_FS)
              << " eps_LS=" << fmt(budget.eps_LS) << '\n';
  }
  return 0;
}

int cmd_compare(const Options &o) {
  const auto rows = load_rows(o);
  const auto samples = validate_samples(rows);
  const auto lsm = run_analyze(o, samples);
  print_warnings(lsm);
  const auto dft = zero_padded_dft_psd(field_from_rows(rows));
  const auto &pl = lsm.points[lsm.argmax_psd()];
  const auto &pd = dft.points[dft.argmax_psd()];
  std::ostringstream table;
  table << "method,peak_f,psd,amplitude\n";
  table << "lsm," << fmt_vec(ordinary_freq(lsm, pl)) << ',' << fmt(pl.psd) << ','
        << fmt(pl.amplitude) << '\n';
  table << "dft," << fmt_vec(pd.freq) << ',' << fmt(pd.psd) << ',' << fmt(pd.amplitude) << '\n';
  std::cout << table.str() << "psd_ratio=" << fmt(pd.psd / pl.psd) << '\n';
  if (!o.output.empty()) {
    write_text(o.output, table.str());
  }
  return 0;
}

int cmd_sweep(const Options &o) {
  check_format(o);
  SweepConfig cfg;
  cfg.sizes.clear();
  for (double n : config::number_list(o.sizes, "--sizes")) {
    if (!(n >= 1) || n != std::floor(n)) {
      throw Error(ErrorCode::BadInput, "--sizes takes positive integers");
    }
    cfg.sizes.push_back(static_cast<std::size_t>(n));
  }
  cfg.replicates = o.replicates;
  cfg.sigma = o.sigma.value_or(0.0);
  cfg.seed = o.seed.value_or(0);
  cfg.threads = o.threads;
  const auto rows = run_sweep(cfg);
  const auto emit = [&](std::ostream &out) {
    out << "n,method,replicate,a_error,b_error\n";
    for (const auto &r : rows) {
      out << r.n << ',' << to_string(r.method) << ',' << r.replicate << ',' << fmt(r.a_error)
          << ',' << fmt(r.b_error) << '\n';
    }
  };
  if (!o.output.empty()) {
    write_file(o.output, emit);
  }
  std::vector<double> ns, rms;
  for (const auto &s : summarize(rows)) {
    std::cout << "n=" << s.n << " method=" << to_string(s.method) << " rms_a=" << fmt(s.rms_a)
              << '\n';
    if (s.method == SweepMethod::Lsm) {
      ns.push_back(static_cast<double>(s.n));
      rms.push_back(s.rms_a);
    }
  }
  if (cfg.sigma > 0 && ns.size() >= 2) {
    std::cout << "lsm_loglog_slope=" << fmt(loglog_slope(ns, rms)) << '\n';
  }
  return 0;
}

int cmd_emax(const Options &o) {
  const auto r = emax_scan(o.resolution);
  std::cout << "beta_star=" << fmt(r.beta_star) << " e_max=" << fmt(r.e_max) << '\n';
  return 0;
}

int cmd_report(const Options &o) {
  ReportContext ctx;
  ctx.peaks = o.peaks;
  Spectrum spec;
  std::optional<SampleSet> samples;
  if (!o.samples.empty()) {
    samples = validate_samples(csv::read_samples(o.samples));
  }
  if (!o.input.empty()) {
    spec = csv::read_spectrum(o.input);
    ctx.title = "Spectrum report: " + o.input;
  } else if (!o.preset.empty()) {
    samples = validate_samples(load_rows(o));
    spec = run_analyze(o, *samples);
    ctx.title = "Spectrum report: preset " + o.preset;
  } else {
    throw Error(ErrorCode::BadInput, "report needs --input spectrum.csv or --preset");
  }
  if (samples) {
    ctx.n_samples = samples->size();
    ctx.noise = resolve_noise(o, *samples);
    if (samples->dims() == 1) {
      const auto t = samples->coords();
      const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
      ctx.window = o.window.value_or(*hi - *lo);
    }
  } else if (o.sigma) {
    ctx.noise = NoiseSpec::make(*o.sigma, o.alpha);
  }
  const auto text = render_report(spec, ctx);
  if (!o.output.empty()) {
    write_text(o.output, text);
  } else {
    std::cout << text;
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Multivariate Lomb-Scargle spectral analysis of irregularly sampled data"};
  app.footer(exit_code_help);
  app.require_subcommand(1);
  Options o;

  const auto presets_check = CLI::IsMember({"simple-wave", "traveling-wave", "noise-only",
                                            "sinus-window"});
  const auto add_io = [&](CLI::App *c) {
    c->add_option("--input", o.input, "input CSV");
    c->add_option("--output", o.output, "output file");
    c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv"}));
  };
  const auto add_preset = [&](CLI::App *c) {
    c->add_option("--preset", o.preset, "named dataset")->check(presets_check);
    c->add_option("--seed", o.seed, "generator seed")->envname("NDLOMB_SEED");
  };
  const auto add_noise = [&](CLI::App *c) {
    c->add_option("--sigma", o.sigma, "noise standard deviation");
    c->add_option("--alpha", o.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
  };
  const auto add_analysis = [&](CLI::App *c) {
    c->add_option("--grid", o.grid, "ordinary frequency grid min:step:max[,min:step:max...]");
    c->add_option("--m-indep", o.m_indep, "number of independent frequencies");
    c->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  };

  auto *gen = app.add_subcommand("generate", "write a synthetic sample CSV and its config");
  add_io(gen);
  add_preset(gen);
  gen->add_option("--sigma", o.sigma, "noise standard deviation");
  gen->add_option("--config", o.config, "key=value dataset description");
  gen->add_option("--components", o.components, "f1,...,fm:A:phi[|...]");
  gen->add_option("--pattern", o.pattern, "regular | uniform-random | jittered");
  gen->add_option("--ranges", o.ranges, "min:max[,min:max...]");
  gen->add_option("--steps", o.steps, "per-axis step");
  gen->add_option("--count", o.count, "points for uniform-random");
  gen->add_option("--jitter", o.jitter, "jitter as a fraction of the step");
  gen->add_option("--gaps", o.gaps, "axis:lo:hi[;axis:lo:hi...]");
  gen->add_option("--missing-fraction", o.missing_fraction, "share of points removed");

  auto *ana = app.add_subcommand("analyze", "Lomb-Scargle spectrum over a frequency grid");
  add_io(ana);
  add_preset(ana);
  add_noise(ana);
  add_analysis(ana);

  auto *base = app.add_subcommand("baseline", "zero-padded DFT or quadrature demodulation");
  add_io(base);
  add_preset(base);
  add_noise(base);
  base->add_option("--method", o.method, "dft | omd")->check(CLI::IsMember({"dft", "omd"}));
  base->add_option("--freq", o.freq, "omd: ordinary frequency f1,...,fm");
  base->add_option("--window", o.window, "omd: 1-D window length");
  base->add_option("--field-output", o.field_output, "dft: write the gridded field");

  auto *cmp = app.add_subcommand("compare", "Lomb-Scargle and DFT peaks side by side");
  add_io(cmp);
  add_preset(cmp);
  add_noise(cmp);
  add_analysis(cmp);

  auto *swp = app.add_subcommand("sweep", "consistency sweep over N, both methods");
  swp->add_option("--output", o.output, "long-form CSV");
  swp->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv"}));
  swp->add_option("--sizes", o.sizes, "comma separated sample counts");
  swp->add_option("--replicates", o.replicates, "noise replicates per N");
  swp->add_option("--sigma", o.sigma, "noise standard deviation");
  swp->add_option("--seed", o.seed, "noise seed")->envname("NDLOMB_SEED");
  swp->add_option("--threads", o.threads, "worker threads, 0 = all cores");

  auto *emx = app.add_subcommand("emax", "maximize the coefficient error factor");
  emx->add_option("--resolution", o.resolution, "grid points over (0, 2 pi]");

  auto *rep = app.add_subcommand("report", "markdown summary of a spectrum");
  add_io(rep);
  add_preset(rep);
  add_noise(rep);
  add_analysis(rep);
  rep->add_option("--samples", o.samples, "sample CSV the spectrum was computed from");
  rep->add_option("--window", o.window, "1-D window length for the error budget");
  rep->add_option("--peaks", o.peaks, "number of peaks listed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_usage;
  }

  try {
    if (*gen) return cmd_generate(o);
    if (*ana) return cmd_analyze(o);
    if (*base) return cmd_baseline(o);
    if (*cmp) return cmd_compare(o);
    if (*swp) return cmd_sweep(o);
    if (*emx) return cmd_emax(o);
    if (*rep) return cmd_report(o);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
  return exit_usage;
}
