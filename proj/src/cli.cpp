#include "eosim/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <omp.h>

#include "eosim/analysis.hpp"
#include "eosim/dynamics.hpp"
#include "eosim/engine.hpp"
#include "eosim/io.hpp"

namespace eosim::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct UnitScale {
  std::string_view name;
  int exponent;  // value in SI = number * 10^exponent
};

constexpr std::array<UnitScale, 15> kUnits{{{"nm", -9},
                                            {"um", -6},
                                            {"mm", -3},
                                            {"m", 0},
                                            {"V", 0},
                                            {"dB", 0},
                                            {"ns", -9},
                                            {"us", -6},
                                            {"ms", -3},
                                            {"s", 0},
                                            {"Hz", 0},
                                            {"kHz", 3},
                                            {"MHz", 6},
                                            {"GHz", 9},
                                            {"rad", 0}}};

// Divides for negative exponents so "400um" gives the double nearest 4e-4.
double to_si(double v, std::string_view u) {
  for (const auto& x : kUnits) {
    if (x.name == u) {
      const double p = std::pow(10.0, std::abs(x.exponent));
      return x.exponent < 0 ? v / p : v * p;
    }
  }
  throw ConfigError("unknown unit '" + std::string(u) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_quantity(std::string_view text, std::string_view default_unit) {
  text = trim(text);
  std::string_view num = text;
  if (!num.empty() && num.front() == '+') num.remove_prefix(1);
  double v = 0;
  auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
  if (ec != std::errc() || p == num.data() || !std::isfinite(v)) {
    throw ConfigError("expected a number, got '" + std::string(text) + "'");
  }
  std::string_view unit = trim(std::string_view(p, static_cast<std::size_t>(num.data() + num.size() - p)));
  return to_si(v, unit.empty() ? default_unit : unit);
}

std::vector<double> parse_axis(std::string_view text, std::string_view default_unit) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty axis");
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
      const auto c = text.find(':', start);
      parts.push_back(text.substr(start, c == std::string_view::npos ? c : c - start));
      if (c == std::string_view::npos) break;
      start = c + 1;
    }
    if (parts.size() != 3) throw ConfigError("axis '" + std::string(text) + "' must be start:stop:step");
    const double a = parse_quantity(parts[0], default_unit);
    const double b = parse_quantity(parts[1], default_unit);
    const double step = parse_quantity(parts[2], default_unit);
    if (b < a) throw ConfigError("axis '" + std::string(text) + "' is descending");
    if (!(step > 0)) throw ConfigError("axis step must be positive");
    const double count = std::floor((b - a) / step + 1e-9) + 1;
    if (count > 1e8) throw ConfigError("axis has too many points");
    for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
      out.push_back(a + static_cast<double>(i) * step);
    }
  } else {
    std::size_t start = 0;
    while (true) {
      const auto c = text.find(',', start);
      out.push_back(parse_quantity(text.substr(start, c == std::string_view::npos ? c : c - start),
                                   default_unit));
      if (c == std::string_view::npos) break;
      start = c + 1;
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (!(out[i] > out[i - 1])) {
        throw ConfigError("axis '" + std::string(text) + "' must be strictly ascending");
      }
    }
  }
  return out;
}

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Destination for a command's primary output: a file or `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {}
  std::ostream& stream() { return path_.empty() ? fallback_ : buffer_; }
  bool to_file() const { return !path_.empty(); }
  void commit() {
    if (!path_.empty()) write_file(path_, buffer_.str());
  }

 private:
  std::string path_;
  std::ostream& fallback_;
  std::ostringstream buffer_;
};

struct CommonOptions {
  std::string preset;
  std::string netlist;
  std::string out;
  std::string format;
  std::vector<std::string> sets;
  bool no_meta = false;
};

Overrides parse_sets(const std::vector<std::string>& sets) {
  Overrides o;
  for (const auto& s : sets) o.push_back(split_override(s));
  return o;
}

CheckedCircuit load_circuit(const CommonOptions& c, std::optional<double> crossing) {
  if (c.preset.empty() == c.netlist.empty()) {
    throw ConfigError("give exactly one of --preset or --netlist");
  }
  const Overrides overrides = parse_sets(c.sets);
  if (!c.preset.empty()) {
    if (c.preset != "paper") throw ConfigError("unknown preset '" + c.preset + "' (known: paper)");
    PresetOptions opt;
    opt.overrides = overrides;
    opt.crossing_voltage = crossing;
    return paper_preset(opt);
  }
  if (crossing) throw ConfigError("--crossing applies to --preset paper only");
  Netlist n = parse_netlist(read_file(c.netlist));
  apply_overrides(n, overrides);
  return validate(std::move(n));
}

OutputMeta make_meta(const CommonOptions& c, const std::string& command) {
  return {!c.no_meta, "eo-sim " + std::string(kVersion) + " " + command + " " + timestamp()};
}

std::string resolve_format(const CommonOptions& c) {
  if (!c.format.empty()) {
    if (c.format != "csv" && c.format != "json") {
      throw ConfigError("unknown format '" + c.format + "' (csv or json)");
    }
    return c.format;
  }
  if (c.out.size() >= 5 && c.out.ends_with(".json")) return "json";
  return "csv";
}

void apply_thread_env() {
  const char* env = std::getenv("EO_SIM_THREADS");
  if (!env || !*env) return;
  int n = 0;
  std::string_view s(env);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || p != s.data() + s.size() || n < 0) {
    throw ConfigError("EO_SIM_THREADS must be a non-negative integer");
  }
  if (n > 0) omp_set_num_threads(n);
}

// --------------------------------------------------------------------------

int cmd_check(const CommonOptions& c, const std::string& positional, std::ostream& out) {
  CommonOptions opts = c;
  if (!positional.empty()) {
    if (!opts.netlist.empty() || !opts.preset.empty()) {
      throw ConfigError("give the netlist either positionally or with --netlist/--preset");
    }
    opts.netlist = positional;
  }
  const std::string origin = opts.netlist.empty() ? "preset:" + opts.preset : opts.netlist;
  try {
    const CheckedCircuit circuit = load_circuit(opts, std::nullopt);
    // Resolve too, so unknown attributes are reported by check.
    (void)resolve(circuit, {});
    out << origin << ": ok (" << circuit.netlist().instances.size() << " instances, "
        << circuit.netlist().connections.size() << " connections, "
        << circuit.external_labels().size() << " external ports)\n";
  } catch (const NetlistError& e) {
    throw NetlistError(e.loc(), e.message() + " [" + origin + "]");
  }
  return 0;
}

struct SweepOptions {
  std::string v = "-1:1.2:0.1";
  std::string wl = "904nm";
  std::string input = "in";
  std::string crossing;
};

void sweep_summary(const SweepResult& r, std::ostream& s) {
  if (r.port_count() < 2) return;
  const auto& ports = r.grid().output_ports;
  if (r.wavelength_count() == 1 && r.voltage_count() >= 2) {
    const SwitchingCurve c = switching_curve(r, 0, ports[0], ports[1]);
    const Extinction e = extinction_and_visibility(c);
    s << "extinction_ratio=" << format_number(e.ratio) << "\n";
    s << "visibility=" << format_number(e.visibility) << "\n";
    try {
      const auto x = crossings(c.voltages, normalized_intensity(c));
      std::string list;
      for (double v : x) list += (list.empty() ? "" : ",") + format_number(v);
      s << "crossing_V=" << (list.empty() ? "none" : list) << "\n";
    } catch (const AnalysisError& e) {
      s << "crossing_V=none (" << e.what() << ")\n";
    }
  }
  if (r.wavelength_count() >= 3 && r.voltage_count() == 1) {
    for (const auto& p : ports) {
      try {
        s << "fringe_spacing_nm[" << p << "]=" << format_number(fringe_spacing(r, p) * 1e9) << "\n";
      } catch (const AnalysisError& e) {
        s << "fringe_spacing_nm[" << p << "]=none (" << e.what() << ")\n";
      }
    }
  }
}

int cmd_sweep(const CommonOptions& c, const SweepOptions& so, std::ostream& out, std::ostream& err) {
  std::optional<double> crossing;
  if (!so.crossing.empty()) crossing = parse_quantity(so.crossing, "V");
  SweepGrid grid;
  grid.voltages = parse_axis(so.v, "V");
  grid.wavelengths = parse_axis(so.wl, "nm");
  grid.input_port = so.input;
  const std::string format = resolve_format(c);
  const CheckedCircuit circuit = load_circuit(c, crossing);
  const SweepResult r = sweep(circuit, std::move(grid));

  Sink sink(c.out, out);
  const OutputMeta meta = make_meta(c, "sweep");
  if (format == "json") {
    write_sweep_json(sink.stream(), r, meta);
  } else {
    write_sweep_csv(sink.stream(), r, meta);
  }
  sink.commit();
  sweep_summary(r, sink.to_file() ? out : err);
  return 0;
}

struct TradeoffOptions {
  std::string length = "100um:800um:50um";
  std::string wl = "900nm";
  std::string bias = "0V";
  double fixed_loss_db = 0.5;
};

int cmd_tradeoff(const CommonOptions& c, const TradeoffOptions& t, std::ostream& out) {
  const std::vector<double> lengths = parse_axis(t.length, "um");
  Netlist n = parse_netlist("component arm arm\nport a arm.a\nport b arm.b\n");
  apply_overrides(n, parse_sets(c.sets));
  const auto resolved = resolve(validate(std::move(n)), {});
  TradeoffParams p;
  p.arm = std::get<WaveguideParams>(resolved.front().params);
  p.wavelength = parse_quantity(t.wl, "nm");
  p.bias = parse_quantity(t.bias, "V");
  p.fixed_loss_db = t.fixed_loss_db;
  const auto rows = design_tradeoff(lengths, p);
  Sink sink(c.out, out);
  write_tradeoff_csv(sink.stream(), rows, make_meta(c, "tradeoff"));
  sink.commit();
  return 0;
}

struct DynamicsOptions {
  std::string rc = "55ns";
  std::string fmin = "100kHz";
  std::string fmax = "100MHz";
  int points = 41;
  std::string fit;
  double v_on = 1.55;
  double v_off = 0.9;
};

int cmd_dynamics(const CommonOptions& c, const DynamicsOptions& d, std::ostream& out,
                 std::ostream& err) {
  DiodeDynamics dyn;
  dyn.v_on = d.v_on;
  dyn.v_off = d.v_off;
  Sink sink(c.out, out);
  std::ostream& summary = sink.to_file() ? out : err;
  if (!d.fit.empty()) {
    std::ifstream in(d.fit);
    if (!in) throw IoError("cannot open '" + d.fit + "'");
    const auto [f, y] = read_response_csv(in, d.fit);
    const RcFit fit = fit_rc(f, y, dyn);
    sink.stream() << fit_report_json(fit.fit, true) << "\n";
    sink.commit();
    return 0;
  }
  dyn.rc = parse_quantity(d.rc, "ns");
  dyn.validate();
  const double f0 = parse_quantity(d.fmin, "Hz");
  const double f1 = parse_quantity(d.fmax, "Hz");
  if (!(f0 > 0 && f1 > f0)) throw ConfigError("need 0 < --fmin < --fmax");
  if (d.points < 2) throw ConfigError("--points must be at least 2");
  std::vector<double> f(static_cast<std::size_t>(d.points));
  for (int i = 0; i < d.points; ++i) {
    f[static_cast<std::size_t>(i)] = f0 * std::pow(f1 / f0, static_cast<double>(i) / (d.points - 1));
  }
  write_response_csv(sink.stream(), f, frequency_response(f, dyn), make_meta(c, "dynamics"));
  sink.commit();
  summary << "knee_half_Hz=" << format_number(response_knee(dyn, 0.5)) << "\n";
  summary << "one_over_2piRC_Hz=" << format_number(1 / (2 * 3.141592653589793 * dyn.rc)) << "\n";
  return 0;
}

void add_common(CLI::App* app, CommonOptions& c, bool circuit) {
  if (circuit) {
    app->add_option("--preset", c.preset, "Built-in circuit (paper)");
    app->add_option("--netlist", c.netlist, "Netlist file");
  }
  app->add_option("--out", c.out, "Output file (default: stdout)");
  app->add_option("--set", c.sets, "Override key=value (instance.key or kind.key)")
      ->allow_extra_args(false);
  app->add_flag("--no-meta", c.no_meta, "Omit the leading metadata comment line");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattering-matrix simulator for electro-optic photonic circuits", "eo-sim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonOptions check_c, sweep_c, trade_c, dyn_c;
  std::string check_file;
  SweepOptions so;
  TradeoffOptions to;
  DynamicsOptions dopt;

  auto* check = app.add_subcommand("check", "Parse and validate a netlist");
  add_common(check, check_c, true);
  check->add_option("file", check_file, "Netlist file");

  auto* sw = app.add_subcommand("sweep", "Sweep a circuit over voltage and wavelength");
  add_common(sw, sweep_c, true);
  sw->add_option("--v", so.v, "Voltage axis (V)");
  sw->add_option("--wl", so.wl, "Wavelength axis (nm)");
  sw->add_option("--input", so.input, "External port driven with unit amplitude");
  sw->add_option("--format", sweep_c.format, "csv or json");
  sw->add_option("--crossing", so.crossing, "Re-trim the preset so the outputs cross here (V)");

  auto* tr = app.add_subcommand("tradeoff", "Switching voltage and loss versus arm length");
  add_common(tr, trade_c, false);
  tr->add_option("--length,-L", to.length, "Length axis (um), ascending");
  tr->add_option("--wl", to.wl, "Wavelength (nm)");
  tr->add_option("--bias", to.bias, "Bias at which propagation loss is evaluated (V)");
  tr->add_option("--fixed-loss-db", to.fixed_loss_db, "Length-independent loss (dB)");

  auto* dy = app.add_subcommand("dynamics", "RC frequency response, or fit RC to a response CSV");
  add_common(dy, dyn_c, false);
  dy->add_option("--rc", dopt.rc, "Time constant (ns)");
  dy->add_option("--fmin", dopt.fmin, "Lowest frequency (Hz)");
  dy->add_option("--fmax", dopt.fmax, "Highest frequency (Hz)");
  dy->add_option("--points", dopt.points, "Log-spaced frequency count");
  dy->add_option("--von", dopt.v_on, "Full-intensity bias (V)");
  dy->add_option("--voff", dopt.v_off, "Zero-intensity bias (V)");
  dy->add_option("--fit", dopt.fit, "Fit RC to frequency_Hz,normalized_intensity CSV");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "eo-sim: " << e.what() << "\n";
    return 2;
  }

  try {
    apply_thread_env();
    if (check->parsed()) return cmd_check(check_c, check_file, out);
    if (sw->parsed()) return cmd_sweep(sweep_c, so, out, err);
    if (tr->parsed()) return cmd_tradeoff(trade_c, to, out);
    if (dy->parsed()) return cmd_dynamics(dyn_c, dopt, out, err);
  } catch (const NetlistError& e) {
    err << "eo-sim: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "eo-sim: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    err << "eo-sim: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "eo-sim: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "eo-sim: internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace eosim::cli
