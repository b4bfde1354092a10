#pragma once

// Single-pole RC model of the diode junction under square-wave drive and the
// frequency response of the (linearly mapped) emitted intensity.

#include <functional>
#include <vector>

#include "eosim/analysis.hpp"

namespace eosim {

struct DiodeDynamics {
  double rc = 55e-9;
  double v_on = 1.55;
  double v_off = 0.9;

  void validate() const;
};

struct DriveWaveform {
  double frequency = 1e6;
  double v_high = 1.55;
  double v_low = 0.25;

  // High level at v_on, mean at v_off.
  static DriveWaveform protocol(double frequency, const DiodeDynamics& dyn);
  void validate() const;
};

struct Waveform {
  std::vector<double> time;     // s, one period starting at the rising edge
  std::vector<double> voltage;  // V
  double v_min = 0;             // steady-state extremes of the junction voltage
  double v_max = 0;
};

// Periodic steady state, sampled at k T / N for k = 0..N-1. N must be even and
// at least 16 so samples pair up across the two half-periods.
Waveform filtered_waveform(const DriveWaveform& drive, const DiodeDynamics& dyn,
                           int samples_per_period);

// (v_high - v_low) tanh(T / (4 RC))
double ripple_peak_to_peak(const DriveWaveform& drive, const DiodeDynamics& dyn);

double intensity_map(double v, const DiodeDynamics& dyn);

// Mean of map(v(t)) over the sampled steady-state period.
double sampled_mean(const DriveWaveform& drive, const DiodeDynamics& dyn,
                    const std::function<double(double)>& map, int samples_per_period);

// Exact period-mean intensity for a protocol drive at frequency f.
double mean_intensity(double frequency, const DiodeDynamics& dyn);

// mean_intensity normalized by its f -> 0 limit of 1/2.
std::vector<double> frequency_response(const std::vector<double>& frequencies,
                                       const DiodeDynamics& dyn);

// Frequency where the normalized response falls to `level`.
double response_knee(const DiodeDynamics& dyn, double level = 0.5);

struct RcFit {
  FitReport fit;  // parameter "rc", value in seconds
};

// One-parameter least squares of frequency_response against (f, y) data.
RcFit fit_rc(const std::vector<double>& frequencies, const std::vector<double>& response,
             const DiodeDynamics& landmarks = {});

}  // namespace eosim
