#pragma once

// Metrics and fits on simulated switching curves and spectra.

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "eosim/engine.hpp"

namespace eosim {

struct SwitchingCurve {
  std::vector<double> voltages;
  std::vector<double> p1;
  std::vector<double> p2;
  // Optional complex amplitudes behind p1/p2; when present, extinction
  // ratios are refined between samples.
  std::vector<std::complex<double>> a1;
  std::vector<std::complex<double>> a2;

  void validate() const;
};

// Curve of two output ports at one wavelength of a sweep.
SwitchingCurve switching_curve(const SweepResult& r, std::size_t wavelength_index,
                               const std::string& port1 = "out1",
                               const std::string& port2 = "out2");

// p1 / (p1 + p2) per voltage. Throws AnalysisError listing the voltages
// where both powers vanish.
std::vector<double> normalized_intensity(const SwitchingCurve& c);

struct Extinction {
  double ratio = 1.0;
  double visibility = 0.0;
  bool infinite = false;
  double at_voltage = 0.0;  // where p1/p2 peaks
};

// ER = max_V p1/p2, visibility = (ER - 1)/(ER + 1).
Extinction extinction_and_visibility(const SwitchingCurve& c);

// Voltages where the normalized intensity crosses 0.5 (linear interpolation).
std::vector<double> crossings(const std::vector<double>& voltages, const std::vector<double>& f);

// Normalized intensity of port 1 at each voltage for a given model offset.
using CurveModel = std::function<std::vector<double>(double offset, const std::vector<double>& voltages)>;

struct FitReport {
  std::string parameter;
  double value = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  double standard_error = 0.0;
};

struct CrossingFit {
  FitReport fit;              // parameter "phase_offset"
  double crossing_voltage = 0;
};

// Least squares over the model offset in [offset_lo, offset_hi) followed by
// the 0.5 crossing of the fitted model inside the data's voltage span.
CrossingFit fit_crossing(const SwitchingCurve& data, const CurveModel& model,
                         double offset_lo = 0.0, double offset_hi = 6.283185307179586);

// Model over the preset: arm2.phase_offset is the free parameter.
CurveModel preset_curve_model(double wavelength = 904e-9, Overrides overrides = {});

double vpi_analytic(double d, double length, double n, double r41, double wavelength,
                    double gamma = 1.0);

// Separation of the first adjacent maximum/minimum pair of the normalized
// intensity, located with parabolic refinement.
double vpi_from_curve(const SwitchingCurve& c);

struct TradeoffRow {
  double length = 0;
  double vpi = 0;
  double loss_db = 0;
};

struct TradeoffParams {
  WaveguideParams arm;
  double wavelength = 900e-9;
  double bias = 0.0;             // propagation loss is evaluated at this bias
  double fixed_loss_db = 0.5;    // length-independent part
};

std::vector<TradeoffRow> design_tradeoff(const std::vector<double>& lengths,
                                         const TradeoffParams& p = {});

// Mean spacing of the transmission peaks of `port` versus wavelength at the
// given voltage index.
double fringe_spacing(const SweepResult& r, const std::string& port, std::size_t voltage_index = 0);

double expected_fringe_spacing(double wavelength, double group_index, double cavity_length);

}  // namespace eosim
