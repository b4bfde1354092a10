#include "eosim/components.hpp"

#include <cmath>
#include <numbers>

#include "eosim/error.hpp"

namespace eosim {

namespace {

constexpr cplx kI{0.0, 1.0};

double db_to_power(double db) { return std::pow(10.0, db / 10.0); }

std::vector<PortId> ports_of(const std::string& inst, std::initializer_list<const char*> names) {
  std::vector<PortId> p;
  for (const char* n : names) p.push_back({inst, n});
  return p;
}

}  // namespace

void GratingParams::validate() const {
  if (!(transmission >= 0 && transmission <= 1 && reflection >= 0 && reflection <= 1)) {
    throw ParameterError("grating T and R must lie in [0, 1]");
  }
  if (transmission + reflection > 1 + 1e-12) {
    throw ParameterError("grating T + R = " + std::to_string(transmission + reflection) +
                         " exceeds 1");
  }
}

void SplitterParams::validate() const {
  if (!(insertion_loss_db >= 0)) throw ParameterError("splitter insertion_loss_db must be >= 0");
  if (!(reflection_db <= 0)) throw ParameterError("splitter reflection_db must be <= 0");
  if (db_to_power(-insertion_loss_db) < db_to_power(reflection_db)) {
    throw ParameterError("splitter reflection exceeds the power left after insertion loss");
  }
}

void MmiParams::validate() const {
  if (!(insertion_loss_db >= 0)) throw ParameterError("mmi insertion_loss_db must be >= 0");
  if (!(imbalance_db >= 0)) throw ParameterError("mmi imbalance_db must be >= 0");
  if (!(reflection_db <= 0)) throw ParameterError("mmi reflection_db must be <= 0");
  if (db_to_power(-insertion_loss_db) + db_to_power(reflection_db) > 1 + 1e-12) {
    throw ParameterError("mmi transmission plus reflection exceeds 1");
  }
  if (!std::isfinite(cross_phase)) throw ParameterError("mmi cross_phase must be finite");
}

cplx arm_transmission(const OpticalEnvironment& env, const WaveguideParams& w) {
  w.validate();
  const double k0 = 2 * std::numbers::pi / env.wavelength;
  const cplx n = effective_index(env, w);
  const double tether = std::pow(10.0, -w.tether_count * w.tether_loss_db / 20.0);
  return std::exp(-kI * (n * k0 * w.length + w.phase_offset)) * tether;
}

SMatrix arm_smatrix(const OpticalEnvironment& env, const WaveguideParams& w,
                    const std::string& instance) {
  const cplx t = arm_transmission(env, w);
  CMatrix s(2, 2);
  s << 0.0, t, t, 0.0;
  return SMatrix(ports_of(instance, {"a", "b"}), std::move(s));
}

SMatrix grating_smatrix(const GratingParams& g, const std::string& instance) {
  g.validate();
  const cplx r = std::sqrt(g.reflection);
  const cplx t = -kI * std::sqrt(g.transmission);
  CMatrix s(2, 2);
  s << r, t, t, r;
  return SMatrix(ports_of(instance, {"in", "out"}), std::move(s));
}

// Even/odd decomposition of the output pair: u = (1,1)/sqrt2 couples to the
// input, w = (1,-1)/sqrt2 does not. Passivity with a real input reflection r
// and imaginary transmission forces the even output mode to reflect r as well.
SMatrix y_splitter_smatrix(const SplitterParams& p, const std::string& instance) {
  p.validate();
  const double r = std::sqrt(db_to_power(p.reflection_db));
  const double per_port = (db_to_power(-p.insertion_loss_db) - r * r) / 2;
  const cplx tau = -kI * std::sqrt(2 * per_port);
  const double sigma = p.odd_mode_reflected ? 1.0 : 0.0;
  const double h = 1 / std::sqrt(2.0);

  CMatrix s(3, 3);
  const cplx tu = tau * h;
  const double uu = 0.5 * r;      // r * u u^T entries
  const double ww = 0.5 * sigma;  // sigma * w w^T entries
  s << r, tu, tu,
       tu, uu + ww, uu - ww,
       tu, uu - ww, uu + ww;
  return SMatrix(ports_of(instance, {"in", "out1", "out2"}), std::move(s));
}

SMatrix mmi_smatrix(const MmiParams& m, const std::string& instance) {
  m.validate();
  const double ib = db_to_power(m.imbalance_db);
  const double bar = ib / (1 + ib);
  const double cross = 1 - bar;
  const double phi = m.cross_phase;
  Eigen::Matrix2cd u;
  u << std::sqrt(bar), std::sqrt(cross) * std::exp(kI * phi),
       std::sqrt(cross) * std::exp(kI * phi), std::sqrt(bar) * std::exp(kI * (2 * phi - std::numbers::pi));

  const cplx t = -kI * std::sqrt(db_to_power(-m.insertion_loss_db));
  const double r = std::sqrt(db_to_power(m.reflection_db));
  CMatrix s(4, 4);
  s.topLeftCorner(2, 2) = r * Eigen::Matrix2cd::Identity();
  s.topRightCorner(2, 2) = t * u.transpose();
  s.bottomLeftCorner(2, 2) = t * u;
  s.bottomRightCorner(2, 2) = r * u * u.transpose();
  return SMatrix(ports_of(instance, {"in1", "in2", "out1", "out2"}), std::move(s));
}

SMatrix through_smatrix(const std::string& instance) {
  CMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return SMatrix(ports_of(instance, {"in", "out"}), std::move(s));
}

}  // namespace eosim
