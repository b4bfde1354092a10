#pragma once

// Evaluation of a checked circuit over a (voltage, wavelength) grid.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eosim/netlist.hpp"

namespace eosim {

struct SweepGrid {
  std::vector<double> voltages;     // V, strictly increasing
  std::vector<double> wavelengths;  // m, strictly increasing
  std::string input_port = "in";    // external label
  // External labels; empty means every external port except the input.
  std::vector<std::string> output_ports;
};

class SweepResult {
 public:
  SweepResult() = default;
  SweepResult(SweepGrid grid, std::vector<std::complex<double>> amplitudes);

  const SweepGrid& grid() const { return grid_; }
  std::size_t voltage_count() const { return grid_.voltages.size(); }
  std::size_t wavelength_count() const { return grid_.wavelengths.size(); }
  std::size_t port_count() const { return grid_.output_ports.size(); }
  std::size_t port_index(const std::string& label) const;

  // Flat layout [voltage][wavelength][port].
  std::size_t flat(std::size_t iv, std::size_t il, std::size_t ip) const {
    return (iv * wavelength_count() + il) * port_count() + ip;
  }
  std::complex<double> amplitude(std::size_t iv, std::size_t il, std::size_t ip) const {
    return amplitudes_[flat(iv, il, ip)];
  }
  double power(std::size_t iv, std::size_t il, std::size_t ip) const {
    return powers_[flat(iv, il, ip)];
  }
  const std::vector<std::complex<double>>& amplitudes() const { return amplitudes_; }
  const std::vector<double>& powers() const { return powers_; }

 private:
  SweepGrid grid_;
  std::vector<std::complex<double>> amplitudes_;
  std::vector<double> powers_;
};

// Parallel over grid points (OpenMP); results are bit-identical to
// sweep_serial for any thread count.
SweepResult sweep(const CheckedCircuit& circuit, SweepGrid grid,
                  const ComponentDefaults& defaults = {});
SweepResult sweep_serial(const CheckedCircuit& circuit, SweepGrid grid,
                         const ComponentDefaults& defaults = {});

// Full external S-matrix of the circuit at one point.
SMatrix evaluate(const CheckedCircuit& circuit, const OpticalEnvironment& env,
                 const ComponentDefaults& defaults = {});

using Overrides = std::vector<std::pair<std::string, std::string>>;

struct PresetOptions {
  // Re-trims arm2.phase_offset so the ideal crossing lands here. Applied after
  // the overrides, using the resulting arm parameters.
  std::optional<double> crossing_voltage;
  double trim_wavelength = 904e-9;
  Overrides overrides;
};

Netlist paper_preset_netlist();
CheckedCircuit paper_preset(const PresetOptions& options = {});

// Extra arm2 phase (rad, in [0, 2 pi)) that puts the crossing of the two
// outputs at `crossing` for an otherwise ideal device.
double preset_trim(double crossing, const WaveguideParams& arm, double wavelength);

// Overrides that remove every loss and reflection from the preset.
Overrides ideal_overrides();

}  // namespace eosim
