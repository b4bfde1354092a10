#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>
#include <numbers>

#include "eosim/analysis.hpp"
#include "eosim/engine.hpp"
#include "eosim/error.hpp"

using namespace eosim;

namespace {

std::vector<double> axis(double a, double b, double step) {
  std::vector<double> v;
  const int n = static_cast<int>(std::llround((b - a) / step));
  for (int i = 0; i <= n; ++i) v.push_back(a + i * step);
  return v;
}

}  // namespace

TEST(Sweep, ParallelMatchesSerialBitForBit) {
  const auto c = paper_preset();
  SweepGrid g{axis(-1, 1.2, 0.1), axis(900e-9, 910e-9, 0.05e-9), "in", {}};
  const auto ref = sweep_serial(c, g);
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    const auto par = sweep(c, g);
    ASSERT_EQ(par.amplitudes().size(), ref.amplitudes().size());
    for (std::size_t i = 0; i < ref.amplitudes().size(); ++i) {
      ASSERT_EQ(par.amplitudes()[i], ref.amplitudes()[i]) << "threads " << threads << " index " << i;
    }
  }
}

TEST(Sweep, LayoutAndDefaultOutputs) {
  const auto r = sweep(paper_preset(), {{0.0, 0.5}, {904e-9, 905e-9, 906e-9}, "in", {}});
  EXPECT_EQ(r.voltage_count(), 2u);
  EXPECT_EQ(r.wavelength_count(), 3u);
  EXPECT_EQ(r.grid().output_ports, (std::vector<std::string>{"out1", "out2"}));
  EXPECT_EQ(r.port_index("out2"), 1u);
  EXPECT_THROW(r.port_index("elsewhere"), ConfigError);
  EXPECT_EQ(r.flat(1, 2, 1), 11u);
}

TEST(Sweep, AgreesWithPointEvaluation) {
  const auto c = paper_preset();
  const auto r = sweep(c, {{-0.4, 0.9}, {904e-9, 915e-9}, "in", {"out2"}});
  for (std::size_t iv = 0; iv < 2; ++iv) {
    for (std::size_t il = 0; il < 2; ++il) {
      const auto s = evaluate(c, {r.grid().wavelengths[il], r.grid().voltages[iv]});
      EXPECT_EQ(r.amplitude(iv, il, 0), s.at(c.external("out2"), c.external("in")));
    }
  }
}

TEST(Sweep, PresetIsPassiveAndReciprocal) {
  const auto c = paper_preset();
  for (double v : {-3.0, -1.5, 0.0, 0.3, 1.5, 2.0}) {
    for (double wl : {880e-9, 904e-9, 930e-9}) {
      const auto s = evaluate(c, {wl, v});
      EXPECT_TRUE(s.is_reciprocal(1e-12));
      EXPECT_LE(s.max_singular_value(), 1 + 1e-9);
    }
  }
}

TEST(Sweep, IdealDeviceConservesPowerAndRoutesFully) {
  PresetOptions opt;
  opt.overrides = ideal_overrides();
  opt.crossing_voltage = 0.3;
  const auto c = paper_preset(opt);
  const auto r = sweep(c, {axis(-3, 2, 0.01), {904e-9}, "in", {}});
  double best = 0;
  for (std::size_t iv = 0; iv < r.voltage_count(); ++iv) {
    const double p1 = r.power(iv, 0, 0), p2 = r.power(iv, 0, 1);
    EXPECT_NEAR(p1 + p2, 1.0, 1e-12);
    best = std::max(best, std::max(p1, p2));
  }
  EXPECT_GT(best, 1 - 1e-4);

  // At the trimmed point the outputs are equal.
  const auto s = sweep(c, {{0.3}, {904e-9}, "in", {}});
  EXPECT_NEAR(s.power(0, 0, 0), 0.5, 1e-10);
}

TEST(Sweep, IdealDeviceAtSelfImageSendsAllPowerToOnePort) {
  // Quarter-wave trim on the passive phase puts the lossless device at its
  // self-imaging point for zero arm phase difference.
  PresetOptions opt;
  opt.overrides = ideal_overrides();
  opt.overrides.push_back({"arm1.orientation", "passive"});
  opt.overrides.push_back({"arm2.orientation", "passive"});
  opt.overrides.push_back({"arm2.phase_offset", format_number(std::numbers::pi / 2)});
  const auto r = sweep(paper_preset(opt), {{0.0}, {904e-9}, "in", {}});
  const double p1 = r.power(0, 0, 0), p2 = r.power(0, 0, 1);
  EXPECT_NEAR(std::max(p1, p2), 1.0, 1e-12);
  EXPECT_LT(std::min(p1, p2), 1e-12);
}

TEST(Sweep, FabryPerotCavityMatchesAiryFormula) {
  const auto c = validate(parse_netlist(
      "component m1 grating reflection=0.3 transmission=0.7\n"
      "component cav arm length=1mm orientation=passive tether_count=0 overlap_p=0 overlap_n=0\n"
      "component m2 grating reflection=0.3 transmission=0.7\n"
      "connect m1.out cav.a\nconnect cav.b m2.in\nport l m1.in\nport r m2.out\n"));
  const auto wl = axis(899e-9, 901e-9, 0.001e-9);
  const auto res = sweep(c, {{0.0}, wl, "l", {"r"}});
  WaveguideParams w;
  w.length = 1e-3;
  w.tether_count = 0;
  w.absorption.overlap_p = w.absorption.overlap_n = 0;
  double worst = 0;
  for (std::size_t i = 0; i < wl.size(); ++i) {
    const cplx t = arm_transmission({wl[i], 0.0}, w);
    const cplx expected = -0.7 * t / (1.0 - 0.3 * t * t);
    worst = std::max(worst, std::abs(res.amplitude(0, i, 0) - expected));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Sweep, ErrorsCarryCoordinates) {
  const auto c = paper_preset();
  try {
    sweep(c, {{-3.5, -2.0}, {904e-9}, "in", {}});
    FAIL();
  } catch (const RangeError& e) {
    const std::string m = e.what();
    EXPECT_NE(m.find("V=-3.5"), std::string::npos) << m;
    EXPECT_NE(m.find("904"), std::string::npos) << m;
  }
  EXPECT_THROW(sweep(c, {{0.0}, {950e-9}, "in", {}}), RangeError);
}

TEST(Sweep, GridValidation) {
  const auto c = paper_preset();
  EXPECT_THROW(sweep(c, {{}, {904e-9}, "in", {}}), ParameterError);
  EXPECT_THROW(sweep(c, {{0.1, 0.0}, {904e-9}, "in", {}}), ParameterError);
  EXPECT_THROW(sweep(c, {{0.0}, {904e-9, 904e-9}, "in", {}}), ParameterError);
  EXPECT_THROW(sweep(c, {{0.0}, {904e-9}, "nowhere", {}}), ConfigError);
  EXPECT_THROW(sweep(c, {{0.0}, {904e-9}, "in", {"bogus"}}), ConfigError);
}

TEST(Preset, TrimPutsIdealCrossingAtRequestedVoltage) {
  for (double target : {-0.5, 0.0, 0.3, 0.7, 1.2}) {
    PresetOptions opt;
    opt.overrides = ideal_overrides();
    opt.crossing_voltage = target;
    const auto r = sweep(paper_preset(opt), {axis(-1.5, 1.8, 0.01), {904e-9}, "in", {}});
    const auto curve = switching_curve(r, 0);
    const auto xs = crossings(curve.voltages, normalized_intensity(curve));
    double nearest = 1e9;
    for (double x : xs) {
      if (std::abs(x - target) < std::abs(nearest - target)) nearest = x;
    }
    EXPECT_NEAR(nearest, target, 1e-4) << "target " << target;
  }
}

TEST(Preset, DefaultTrimValue) {
  const auto r = resolve(paper_preset(), {});
  for (const auto& i : r) {
    if (i.name == "arm2") {
      const auto& w = std::get<WaveguideParams>(i.params);
      EXPECT_NEAR(w.phase_offset, preset_trim(0.3, w, 904e-9), 1e-12);
    }
  }
}
