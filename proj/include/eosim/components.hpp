#pragma once

// S-matrix factories for the circuit elements. Conventions shared by every
// factory: transmission carries a -pi/2 phase, reflection a 0 phase, and all
// matrices are symmetric (reciprocal). Decibel figures are power ratios.

#include <string>

#include "eosim/materials.hpp"
#include "eosim/sparams.hpp"

namespace eosim {

struct GratingParams {
  double transmission = 0.5;
  double reflection = 0.30;

  void validate() const;
};

struct SplitterParams {
  double insertion_loss_db = 0.75;
  double reflection_db = -11.0;
  // The antisymmetric output combination is radiated by default. Reflecting
  // it instead keeps a 0 dB splitter unitary.
  bool odd_mode_reflected = false;

  void validate() const;
};

struct MmiParams {
  double insertion_loss_db = 0.5;
  double imbalance_db = 0.0;
  double reflection_db = -20.0;
  double cross_phase = 1.5707963267948966;

  void validate() const;
};

// ports {a, b}
SMatrix arm_smatrix(const OpticalEnvironment& env, const WaveguideParams& w,
                    const std::string& instance = "arm");
// Transmission amplitude a -> b of an arm.
cplx arm_transmission(const OpticalEnvironment& env, const WaveguideParams& w);

// ports {in, out}
SMatrix grating_smatrix(const GratingParams& g, const std::string& instance = "grating");
// ports {in, out1, out2}
SMatrix y_splitter_smatrix(const SplitterParams& s, const std::string& instance = "y");
// ports {in1, in2, out1, out2}
SMatrix mmi_smatrix(const MmiParams& m, const std::string& instance = "mmi");
// Ideal matched through connection, ports {in, out}.
SMatrix through_smatrix(const std::string& instance = "port");

}  // namespace eosim
