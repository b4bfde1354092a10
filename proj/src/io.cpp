#include "eosim/io.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace eosim {

namespace {

void meta_line(std::ostream& out, const OutputMeta& meta) {
  if (meta.enabled) out << "# " << meta.text << "\n";
}

nlohmann::json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& r, const OutputMeta& meta) {
  meta_line(out, meta);
  out << "voltage_V,wavelength_nm,port,power,phase_rad\n";
  const auto& g = r.grid();
  std::string line;
  for (std::size_t iv = 0; iv < r.voltage_count(); ++iv) {
    for (std::size_t il = 0; il < r.wavelength_count(); ++il) {
      for (std::size_t ip = 0; ip < r.port_count(); ++ip) {
        line = format_number(g.voltages[iv]);
        line += ',';
        line += format_number(g.wavelengths[il] * 1e9);
        line += ',';
        line += g.output_ports[ip];
        line += ',';
        line += format_number(r.power(iv, il, ip));
        line += ',';
        line += format_number(std::arg(r.amplitude(iv, il, ip)));
        line += '\n';
        out << line;
      }
    }
  }
}

void write_sweep_json(std::ostream& out, const SweepResult& r, const OutputMeta& meta) {
  nlohmann::json doc;
  if (meta.enabled) doc["meta"] = meta.text;
  doc["input_port"] = r.grid().input_port;
  doc["output_ports"] = r.grid().output_ports;
  nlohmann::json rows = nlohmann::json::array();
  const auto& g = r.grid();
  for (std::size_t iv = 0; iv < r.voltage_count(); ++iv) {
    for (std::size_t il = 0; il < r.wavelength_count(); ++il) {
      for (std::size_t ip = 0; ip < r.port_count(); ++ip) {
        rows.push_back({{"voltage_V", g.voltages[iv]},
                        {"wavelength_nm", g.wavelengths[il] * 1e9},
                        {"port", g.output_ports[ip]},
                        {"power", r.power(iv, il, ip)},
                        {"phase_rad", std::arg(r.amplitude(iv, il, ip))}});
      }
    }
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(1) << "\n";
}

void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffRow>& rows,
                        const OutputMeta& meta) {
  meta_line(out, meta);
  out << "length_um,vpi_V,vpi_L_Vcm,loss_dB\n";
  for (const auto& row : rows) {
    out << format_number(row.length * 1e6) << ',' << format_number(row.vpi) << ','
        << format_number(row.vpi * row.length * 100) << ',' << format_number(row.loss_db) << "\n";
  }
}

void write_response_csv(std::ostream& out, const std::vector<double>& f,
                        const std::vector<double>& y, const OutputMeta& meta) {
  meta_line(out, meta);
  out << "frequency_Hz,normalized_intensity\n";
  for (std::size_t i = 0; i < f.size() && i < y.size(); ++i) {
    out << format_number(f[i]) << ',' << format_number(y[i]) << "\n";
  }
}

std::pair<std::vector<double>, std::vector<double>> read_response_csv(std::istream& in,
                                                                      const std::string& origin) {
  std::vector<double> f, y;
  std::string line;
  int lineno = 0;
  bool header = false;
  auto parse = [&](std::string_view s, double& v) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size() && !s.empty();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "frequency_Hz,normalized_intensity") {
        throw FormatError(origin + ":" + std::to_string(lineno) +
                          ": expected header 'frequency_Hz,normalized_intensity'");
      }
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    double a = 0, b = 0;
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos ||
        !parse(std::string_view(line).substr(0, comma), a) ||
        !parse(std::string_view(line).substr(comma + 1), b)) {
      throw FormatError(origin + ":" + std::to_string(lineno) +
                        ": expected two numeric columns, got '" + line + "'");
    }
    f.push_back(a);
    y.push_back(b);
  }
  if (!header) throw FormatError(origin + ":" + std::to_string(lineno + 1) + ": missing header");
  return {std::move(f), std::move(y)};
}

std::string fit_report_json(const FitReport& r, bool with_se) {
  nlohmann::json j;
  j["parameter"] = r.parameter;
  j["value"] = finite_or_string(r.value);
  j["residual_norm"] = finite_or_string(r.residual_norm);
  j["iterations"] = r.iterations;
  if (with_se) j["standard_error"] = finite_or_string(r.standard_error);
  return j.dump(2);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << contents;
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace eosim
