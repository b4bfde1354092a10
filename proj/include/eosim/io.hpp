#pragma once

// Text serialization of sweep results, fit reports and tabulated curves.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "eosim/analysis.hpp"
#include "eosim/dynamics.hpp"
#include "eosim/engine.hpp"

namespace eosim {

// Optional first line "# <text>" in CSV output, a "meta" object in JSON.
struct OutputMeta {
  bool enabled = false;
  std::string text;
};

// voltage_V,wavelength_nm,port,power,phase_rad; voltage-major, then
// wavelength, then port.
void write_sweep_csv(std::ostream& out, const SweepResult& r, const OutputMeta& meta = {});
void write_sweep_json(std::ostream& out, const SweepResult& r, const OutputMeta& meta = {});

void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffRow>& rows,
                        const OutputMeta& meta = {});

// frequency_Hz,normalized_intensity
void write_response_csv(std::ostream& out, const std::vector<double>& f,
                        const std::vector<double>& y, const OutputMeta& meta = {});
// Throws FormatError with the line number for malformed rows.
std::pair<std::vector<double>, std::vector<double>> read_response_csv(std::istream& in,
                                                                      const std::string& origin);

// {parameter, value, residual_norm, iterations[, standard_error]}
std::string fit_report_json(const FitReport& r, bool with_standard_error = false);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace eosim
