#include "eosim/materials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/airy.hpp>

#include "eosim/bundled.hpp"
#include "eosim/error.hpp"

namespace eosim {

std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::along_110: return "110";
    case Orientation::along_1m10: return "1m10";
    case Orientation::passive: return "passive";
  }
  return "passive";
}

Orientation parse_orientation(std::string_view t) {
  if (t == "110" || t == "along_110") return Orientation::along_110;
  if (t == "1m10" || t == "along_1m10") return Orientation::along_1m10;
  if (t == "passive") return Orientation::passive;
  throw ParameterError("unknown orientation '" + std::string(t) +
                       "' (expected 110, 1m10 or passive)");
}

void JunctionParams::validate() const {
  if (!(d_intrinsic > 0)) throw ParameterError("junction d_intrinsic must be > 0");
  if (!(v_built_in > 0)) throw ParameterError("junction v_built_in must be > 0");
  if (!(v_min <= v_max)) throw ParameterError("junction v_range is empty");
}

void EoParams::validate() const {
  if (!(n_bulk > 1)) throw ParameterError("eo n_bulk must be > 1");
  if (!(r41 > 0)) throw ParameterError("eo r41 must be > 0");
  if (!(gamma_eo > 0 && gamma_eo <= 1)) throw ParameterError("eo gamma_eo must lie in (0, 1]");
}

void FkParams::validate() const {
  if (!(e_gap > 0)) throw ParameterError("fk e_gap must be > 0");
  if (!(reduced_mass_ratio > 0)) throw ParameterError("fk reduced_mass_ratio must be > 0");
  if (!(strength >= 0)) throw ParameterError("fk strength must be >= 0");
}

void AbsorptionParams::validate() const {
  if (!(alpha_p_bulk >= 0 && alpha_n_bulk >= 0)) {
    throw ParameterError("bulk absorption coefficients must be >= 0");
  }
  if (!(overlap_p >= 0 && overlap_p <= 1 && overlap_n >= 0 && overlap_n <= 1)) {
    throw ParameterError("doped-layer overlaps must lie in [0, 1]");
  }
  fk.validate();
}

void WaveguideParams::validate() const {
  if (!(length >= 0)) throw ParameterError("arm length must be >= 0");
  if (tether_count < 0) throw ParameterError("tether_count must be >= 0");
  if (!(tether_loss_db >= 0)) throw ParameterError("tether_loss_db must be >= 0");
  junction.validate();
  eo.validate();
  absorption.validate();
}

// ---------------------------------------------------------------------------
// Dispersion

struct DispersionModel::Data {
  enum class Kind { table, polynomial, constant } kind = Kind::constant;
  std::vector<double> lambda;
  std::vector<double> n;
  std::vector<double> dn;  // nodal derivative dn/dlambda (tables)
  std::vector<double> coeffs;
  double lambda_ref = 0;
  double lo = 0;
  double hi = 0;
};

DispersionModel DispersionModel::bundled() {
  static const DispersionModel model = parse(bundled::kDefaultDispersion, "bundled dispersion");
  return model;
}

DispersionModel DispersionModel::table(std::vector<double> wl, std::vector<double> n) {
  if (wl.size() != n.size()) throw ParameterError("dispersion table columns differ in length");
  if (wl.size() < 2) throw ParameterError("dispersion table needs at least two rows");
  for (std::size_t i = 0; i < wl.size(); ++i) {
    if (!(n[i] > 1)) throw ParameterError("dispersion table has n <= 1");
    if (i > 0 && !(wl[i] > wl[i - 1])) {
      throw ParameterError("dispersion table wavelengths must strictly increase");
    }
  }
  auto d = std::make_shared<Data>();
  d->kind = Data::Kind::table;
  const std::size_t m = wl.size();
  d->dn.resize(m);
  d->dn[0] = (n[1] - n[0]) / (wl[1] - wl[0]);
  d->dn[m - 1] = (n[m - 1] - n[m - 2]) / (wl[m - 1] - wl[m - 2]);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    d->dn[i] = (n[i + 1] - n[i - 1]) / (wl[i + 1] - wl[i - 1]);
  }
  d->lo = wl.front();
  d->hi = wl.back();
  d->lambda = std::move(wl);
  d->n = std::move(n);
  return DispersionModel(std::move(d));
}

DispersionModel DispersionModel::polynomial(std::vector<double> coeffs, double lambda_ref,
                                            double lambda_min, double lambda_max) {
  if (coeffs.empty()) throw ParameterError("dispersion polynomial has no coefficients");
  if (!(lambda_min < lambda_max)) throw ParameterError("dispersion polynomial range is empty");
  auto d = std::make_shared<Data>();
  d->kind = Data::Kind::polynomial;
  d->coeffs = std::move(coeffs);
  d->lambda_ref = lambda_ref;
  d->lo = lambda_min;
  d->hi = lambda_max;
  DispersionModel model(std::move(d));
  // n > 1 over the range, checked on a fine grid
  for (int i = 0; i <= 200; ++i) {
    const double l = lambda_min + (lambda_max - lambda_min) * i / 200.0;
    if (!(model.index(l) > 1)) throw ParameterError("dispersion polynomial has n <= 1 in range");
  }
  return model;
}

DispersionModel DispersionModel::constant(double n) {
  if (!(n > 1)) throw ParameterError("constant dispersion needs n > 1");
  auto d = std::make_shared<Data>();
  d->kind = Data::Kind::constant;
  d->coeffs = {n};
  d->lo = 0;
  d->hi = std::numeric_limits<double>::infinity();
  return DispersionModel(std::move(d));
}

DispersionModel DispersionModel::parse(std::string_view text, const std::string& origin) {
  std::vector<double> wl, n;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double a = 0, b = 0;
    if (!(row >> a)) {
      std::string rest;
      row.clear();
      if (row >> rest) throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad row");
      continue;  // blank
    }
    std::string extra;
    if (!(row >> b) || (row >> extra)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected two columns (wavelength_nm n_eff)");
    }
    wl.push_back(a * 1e-9);
    n.push_back(b);
  }
  try {
    return table(std::move(wl), std::move(n));
  } catch (const ParameterError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

DispersionModel DispersionModel::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open dispersion file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

bool DispersionModel::covers(double l) const {
  // half-ulp slack so grid endpoints computed by accumulation still count
  const double eps = 1e-9 * data_->hi;
  return l >= data_->lo - eps && l <= data_->hi + eps;
}

double DispersionModel::lambda_min() const { return data_->lo; }
double DispersionModel::lambda_max() const { return data_->hi; }

namespace {

void require_cover(const DispersionModel& m, double l) {
  if (!m.covers(l)) {
    throw RangeError("wavelength " + std::to_string(l * 1e9) + " nm outside dispersion range [" +
                     std::to_string(m.lambda_min() * 1e9) + ", " +
                     std::to_string(m.lambda_max() * 1e9) + "] nm");
  }
}

// Segment index and fraction for linear interpolation, clamped to the table.
std::pair<std::size_t, double> locate(const std::vector<double>& x, double l) {
  auto it = std::upper_bound(x.begin(), x.end(), l);
  std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  i = std::min(i, x.size() - 2);
  const double t = std::clamp((l - x[i]) / (x[i + 1] - x[i]), 0.0, 1.0);
  return {i, t};
}

}  // namespace

double DispersionModel::index(double l) const {
  require_cover(*this, l);
  const Data& d = *data_;
  switch (d.kind) {
    case Data::Kind::constant: return d.coeffs[0];
    case Data::Kind::polynomial: {
      const double x = l - d.lambda_ref;
      double acc = 0;
      for (auto c = d.coeffs.rbegin(); c != d.coeffs.rend(); ++c) acc = acc * x + *c;
      return acc;
    }
    case Data::Kind::table: {
      auto [i, t] = locate(d.lambda, l);
      return d.n[i] + t * (d.n[i + 1] - d.n[i]);
    }
  }
  return 0;
}

double DispersionModel::group_index(double l) const {
  const Data& d = *data_;
  double slope = 0;
  switch (d.kind) {
    case Data::Kind::constant: slope = 0; break;
    case Data::Kind::polynomial: {
      const double x = l - d.lambda_ref;
      for (std::size_t k = d.coeffs.size(); k-- > 1;) slope = slope * x + double(k) * d.coeffs[k];
      break;
    }
    case Data::Kind::table: {
      require_cover(*this, l);
      auto [i, t] = locate(d.lambda, l);
      slope = d.dn[i] + t * (d.dn[i + 1] - d.dn[i]);
      break;
    }
  }
  return index(l) - l * slope;
}

// ---------------------------------------------------------------------------

double photon_energy_ev(double wavelength) { return kHcEvNm / (wavelength * 1e9); }

double junction_field(const OpticalEnvironment& env, const JunctionParams& j) {
  if (env.voltage < j.v_min || env.voltage > j.v_max) {
    throw RangeError("bias " + std::to_string(env.voltage) + " V outside allowed range [" +
                     std::to_string(j.v_min) + ", " + std::to_string(j.v_max) + "] V");
  }
  return (j.v_built_in - env.voltage) / j.d_intrinsic;
}

bool beyond_flat_band(const OpticalEnvironment& env, const JunctionParams& j) {
  return env.voltage > j.v_built_in;
}

double eo_index_shift(double field, const EoParams& eo, Orientation orientation) {
  double s = 0;
  if (orientation == Orientation::along_110) s = 1;
  if (orientation == Orientation::along_1m10) s = -1;
  const double n3 = eo.n_bulk * eo.n_bulk * eo.n_bulk;
  return s * eo.gamma_eo * 0.5 * n3 * eo.r41 * field;
}

// Airy-function (Tharmalingam) sub-gap form:
//   alpha = A sqrt(E_th/E_g) (E_g/E_ph) [Ai'(b)^2 - b Ai(b)^2],  b = (E_g - E_ph)/E_th
// with E_th = (q^2 hbar^2 F^2 / 2 mu)^(1/3). As F -> 0 the bracket tends to
// sqrt(-b)/pi above the gap and vanishes exponentially below it.
double fk_absorption(double photon_energy, double field, const FkParams& p) {
  if (p.strength == 0) return 0.0;
  const double eg = p.e_gap;
  const double f = std::abs(field);
  if (f == 0) {
    if (photon_energy <= eg) return 0.0;
    return p.strength * std::sqrt((photon_energy - eg) / eg) / std::numbers::pi * (eg / photon_energy);
  }
  const double mu = p.reduced_mass_ratio * kElectronMass;
  const double q2h2f2 = kElementaryCharge * kElementaryCharge * kHbar * kHbar * f * f;
  const double eth = std::cbrt(q2h2f2 / (2 * mu)) / kElementaryCharge;  // eV
  const double b = (eg - photon_energy) / eth;
  if (b > 150) return 0.0;  // Ai underflows long before this
  const double ai = boost::math::airy_ai(b);
  const double aip = boost::math::airy_ai_prime(b);
  const double bracket = std::max(0.0, aip * aip - b * ai * ai);
  return p.strength * std::sqrt(eth / eg) * (eg / photon_energy) * bracket;
}

double fca_absorption(const AbsorptionParams& a) {
  return a.overlap_p * a.alpha_p_bulk + a.overlap_n * a.alpha_n_bulk;
}

double total_absorption(const OpticalEnvironment& env, const WaveguideParams& w) {
  const double field = junction_field(env, w.junction);
  return fca_absorption(w.absorption) +
         fk_absorption(photon_energy_ev(env.wavelength), field, w.absorption.fk);
}

std::complex<double> effective_index(const OpticalEnvironment& env, const WaveguideParams& w) {
  if (!(env.wavelength > 0)) throw ParameterError("wavelength must be > 0");
  const double field = junction_field(env, w.junction);
  const double n0 = w.dispersion.index(env.wavelength);
  const double dn = eo_index_shift(field, w.eo, w.orientation);
  const double alpha = fca_absorption(w.absorption) +
                       fk_absorption(photon_energy_ev(env.wavelength), field, w.absorption.fk);
  return {n0 + dn, -env.wavelength / (4 * std::numbers::pi) * alpha};
}

}  // namespace eosim
