#pragma once

// Complex effective index of the TE mode of a p-i-n membrane waveguide as a
// function of bias voltage and wavelength. All quantities are SI unless the
// field name says otherwise (e_gap in eV, photon energies in eV).

#include <complex>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace eosim {

enum class Orientation { along_110, along_1m10, passive };

std::string_view to_string(Orientation o);
// Accepts "110", "1m10", "passive" and the long enumerator spellings.
Orientation parse_orientation(std::string_view text);

struct JunctionParams {
  double v_built_in = 1.5;
  double d_intrinsic = 70e-9;
  double v_min = -3.0;
  double v_max = 2.0;

  void validate() const;
};

struct EoParams {
  double n_bulk = 3.5;
  double r41 = 1.6e-12;
  double gamma_eo = 0.459;

  void validate() const;
};

struct FkParams {
  double e_gap = 1.52;
  double reduced_mass_ratio = 0.059;
  double strength = 4.0e6;

  void validate() const;
};

struct AbsorptionParams {
  double alpha_p_bulk = 1e4;
  double alpha_n_bulk = 1e3;
  double overlap_p = 0.10466;
  double overlap_n = 0.10466;
  FkParams fk;

  void validate() const;
};

struct OpticalEnvironment {
  double wavelength = 904e-9;
  double voltage = 0.0;
};

// Base (field-free, lossless) modal index n(lambda). Either a sampled table
// with linear interpolation or a polynomial in (lambda - lambda_ref). Copies
// share the underlying data.
class DispersionModel {
 public:
  // The table bundled with the library (880-930 nm).
  static DispersionModel bundled();
  static DispersionModel table(std::vector<double> wavelengths_m, std::vector<double> n_eff);
  // n(lambda) = sum_k c[k] (lambda - lambda_ref)^k over [lambda_min, lambda_max].
  static DispersionModel polynomial(std::vector<double> coeffs, double lambda_ref,
                                    double lambda_min, double lambda_max);
  // Two-column text: wavelength in nm, n_eff; '#' starts a comment.
  static DispersionModel parse(std::string_view text, const std::string& origin = "<text>");
  static DispersionModel load(const std::string& path);
  // Constant index; covers every wavelength.
  static DispersionModel constant(double n);

  double index(double wavelength) const;
  // n - lambda dn/dlambda. Tables use nodal finite differences (central inside,
  // one-sided at the ends) interpolated linearly between nodes.
  double group_index(double wavelength) const;
  bool covers(double wavelength) const;
  double lambda_min() const;
  double lambda_max() const;

 private:
  struct Data;
  explicit DispersionModel(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;
};

struct WaveguideParams {
  double length = 400e-6;
  Orientation orientation = Orientation::passive;
  JunctionParams junction;
  EoParams eo;
  AbsorptionParams absorption;
  DispersionModel dispersion = DispersionModel::bundled();
  int tether_count = 1;
  double tether_loss_db = 0.5;
  // Extra accumulated phase (rad); lumps fabrication asymmetry between arms.
  double phase_offset = 0.0;

  void validate() const;
};

inline constexpr double kElementaryCharge = 1.602176634e-19;
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kElectronMass = 9.1093837015e-31;
inline constexpr double kHcEvNm = 1239.841984;

double photon_energy_ev(double wavelength);

// (V_b - V) / d. Throws RangeError outside [v_min, v_max].
double junction_field(const OpticalEnvironment& env, const JunctionParams& j);
// True when V > V_b: the field has reversed and the diode is conducting.
bool beyond_flat_band(const OpticalEnvironment& env, const JunctionParams& j);

double eo_index_shift(double field, const EoParams& eo, Orientation orientation);

double fk_absorption(double photon_energy, double field, const FkParams& p);
double fca_absorption(const AbsorptionParams& a);

// Power absorption coefficient (1/m) of the waveguide at env.
double total_absorption(const OpticalEnvironment& env, const WaveguideParams& w);

std::complex<double> effective_index(const OpticalEnvironment& env, const WaveguideParams& w);

}  // namespace eosim
