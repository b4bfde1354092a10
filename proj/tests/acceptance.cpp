// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eosim/analysis.hpp"
#include "eosim/bundled.hpp"
#include "eosim/components.hpp"
#include "eosim/dynamics.hpp"
#include "eosim/engine.hpp"
#include "eosim/error.hpp"
#include "eosim/io.hpp"
#include "eosim/netlist.hpp"
#include "netlist_gen.hpp"
#include "random_circuits.hpp"

using namespace eosim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "[miss] ") + what;
  }
};

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::vector<double> axis(double a, double b, double step) {
  std::vector<double> v;
  const int n = static_cast<int>(std::llround((b - a) / step));
  for (int i = 0; i <= n; ++i) v.push_back(a + i * step);
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome analytic_vpi() {
  Outcome o;
  const double v1 = vpi_analytic(70e-9, 400e-6, 3.5, 1.6e-12, 900e-9, 1.0);
  const double vc = vpi_analytic(70e-9, 400e-6, 3.5, 1.6e-12, 900e-9, 0.459);
  const double vl = vc * 400e-4;  // V cm
  o.require(std::abs(v1 - 1.148) <= 1e-3, "V_pi(Gamma=1)=" + num(v1) + " V (1.148 +- 1e-3)");
  o.require(std::abs(vc - 2.50) <= 0.01, "V_pi(Gamma=0.459)=" + num(vc) + " V (2.50 +- 0.01)");
  o.require(std::abs(vl / 0.100 - 1) <= 0.01, "V_pi L=" + num(vl) + " V cm (0.100 +- 1%)");
  return o;
}

Outcome tradeoff() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> lengths;
  for (int i = 0; i <= 14; ++i) lengths.push_back((100 + 50 * i) * 1e-6);
  const auto rows = design_tradeoff(lengths);
  const double elapsed = seconds_since(t0);
  const double prod0 = rows.front().vpi * rows.front().length;
  double prod_dev = 0, affine_dev = 0, loss400 = 0;
  const double slope =
      (rows.back().loss_db - rows.front().loss_db) / (rows.back().length - rows.front().length);
  for (const auto& r : rows) {
    prod_dev = std::max(prod_dev, std::abs(r.vpi * r.length / prod0 - 1));
    affine_dev = std::max(affine_dev, std::abs(r.loss_db - rows.front().loss_db -
                                               slope * (r.length - rows.front().length)));
    if (std::abs(r.length - 400e-6) < 1e-12) loss400 = r.loss_db;
  }
  o.require(prod_dev <= 1e-9, "max rel dev of V_pi L=" + num(prod_dev, 3) + " (<= 1e-9)");
  o.require(affine_dev <= 1e-9, "max affine residual of loss=" + num(affine_dev, 3) + " dB");
  o.require(loss400 <= 3.0, "loss(400 um)=" + num(loss400, 4) + " dB (<= 3)");
  o.require(elapsed < 1.0, "runtime " + num(elapsed, 3) + " s (< 1)");
  return o;
}

Outcome switching_curve_band() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  SweepGrid g{axis(-1, 1.2, 0.1), {904e-9}, "in", {}};
  const auto curve = switching_curve(sweep(paper_preset(), g), 0);
  const auto f1 = normalized_intensity(curve);
  double sum_dev = 0;
  bool anti = true;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    const double f2 = curve.p2[i] / (curve.p1[i] + curve.p2[i]);
    sum_dev = std::max(sum_dev, std::abs(f1[i] + f2 - 1));
    if (i > 0) {
      const double d1 = f1[i] - f1[i - 1];
      const double d2 = f2 - curve.p2[i - 1] / (curve.p1[i - 1] + curve.p2[i - 1]);
      anti = anti && (d1 * d2 <= 0);
    }
  }
  const auto e = extinction_and_visibility(curve);

  PresetOptions ideal;
  ideal.overrides = ideal_overrides();
  ideal.crossing_voltage = 0.3;
  const auto ic = switching_curve(sweep(paper_preset(ideal), g), 0);
  const auto ie = extinction_and_visibility(ic);
  const double elapsed = seconds_since(t0);

  o.require(anti && sum_dev <= 2.3e-16,
            "normalized intensities anti-correlated, |f1+f2-1| max " + num(sum_dev, 3));
  o.require(e.ratio >= 2.8 && e.ratio <= 3.8, "ER=" + num(e.ratio, 5) + " (band [2.8, 3.8])");
  o.require(e.visibility >= 0.48 && e.visibility <= 0.58,
            "visibility=" + num(e.visibility, 4) + " (band [0.48, 0.58])");
  o.require(ie.infinite || ie.ratio > 1e6,
            "ideal ER=" + (ie.infinite ? std::string("inf") : num(ie.ratio, 4)) + " (> 1e6)");
  o.require(elapsed < 1.0, "runtime " + num(elapsed, 3) + " s (< 1)");
  return o;
}

Outcome crossing_fit() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto model = preset_curve_model(904e-9);
  const auto v = axis(-1, 1.2, 0.1);
  WaveguideParams arm;
  for (double target : {0.0, 0.3, 0.7}) {
    const auto f = model(preset_trim(target, arm, 904e-9), v);
    SwitchingCurve c;
    c.voltages = v;
    for (double x : f) {
      c.p1.push_back(x);
      c.p2.push_back(1 - x);
    }
    const double got = fit_crossing(c, model).crossing_voltage;
    o.require(std::abs(got - target) <= 0.01,
              "target " + num(target, 2) + " V -> " + num(got, 6) + " V");
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 1.0, "runtime " + num(elapsed, 3) + " s (< 1)");
  return o;
}

Outcome quench() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto v = axis(-1.5, 0.0, 0.05);
  const auto r = sweep(paper_preset(), {v, {904e-9}, "in", {}});
  std::vector<double> total;
  for (std::size_t i = 0; i < v.size(); ++i) total.push_back(r.power(i, 0, 0) + r.power(i, 0, 1));
  const double drop_db = 10 * std::log10(total.back() / total.front());
  // Monotone: power falls at every step as V decreases below -0.7 V.
  bool monotone = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= -0.7 + 1e-12) monotone = monotone && total[i - 1] < total[i];
  }
  const std::size_t i07 = static_cast<std::size_t>(std::llround((-0.7 + 1.5) / 0.05));
  const double drop07 = 10 * std::log10(total.back() / total[i07]);
  const double elapsed = seconds_since(t0);
  o.require(drop_db >= 3.0, "P(0)/P(-1.5 V)=" + num(drop_db, 4) + " dB (>= 3)");
  o.require(monotone, "total power monotone for V < -0.7 V");
  o.require(drop07 > 0.1, "P(-0.7)/P(0)=" + num(drop07, 3) + " dB (drop under way)");
  o.require(elapsed < 1.0, "runtime " + num(elapsed, 3) + " s (< 1)");
  return o;
}

CheckedCircuit cavity(double length) {
  return validate(parse_netlist(
      "component m1 grating reflection=0.3 transmission=0.7\n"
      "component cav arm length=" + format_number(length) +
      " orientation=passive tether_count=0 overlap_p=0 overlap_n=0\n"
      "component m2 grating reflection=0.3 transmission=0.7\n"
      "connect m1.out cav.a\nconnect cav.b m2.in\nport l m1.in\nport r m2.out\n"));
}

Outcome fringes() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> wl;
  for (int i = 0; i < 10000; ++i) wl.push_back(899.5e-9 + i * 1e-13);
  const double s1 = fringe_spacing(sweep(cavity(1e-3), {{0.0}, wl, "l", {"r"}}), "r");
  const double s2 = fringe_spacing(sweep(cavity(2e-3), {{0.0}, wl, "l", {"r"}}), "r");
  const double elapsed = seconds_since(t0);
  const double expected = expected_fringe_spacing(900e-9, 4.2, 1e-3);
  o.require(std::abs(s1 / expected - 1) <= 0.01,
            "spacing " + num(s1 * 1e9, 5) + " nm vs " + num(expected * 1e9, 5) + " nm (1%)");
  o.require(std::abs(s2 / s1 - 0.5) <= 0.005, "2L/L spacing ratio " + num(s2 / s1, 5));
  o.require(elapsed < 5.0, "runtime " + num(elapsed, 3) + " s for 2 x 1e4 points (< 5)");
  return o;
}

Outcome dynamics() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const DiodeDynamics dyn;
  // -3 dB of the (intensity) response: the normalized mean falls to one half.
  const double knee = response_knee(dyn, 0.5);
  const double target = 1 / (2 * 3.141592653589793 * dyn.rc);
  o.require(std::abs(knee / target - 1) <= 0.02,
            "-3 dB point " + num(knee / 1e6, 5) + " MHz vs " + num(target / 1e6, 5) + " MHz (2%)");

  for (double rc : {10e-9, 55e-9, 500e-9}) {
    const DiodeDynamics d{rc, 1.55, 0.9};
    const double k = response_knee(d, 0.5);
    std::vector<double> f;
    for (int i = 0; i < 20; ++i) f.push_back(k / 30 * std::pow(900.0, i / 19.0));
    const double got = fit_rc(f, frequency_response(f, d)).fit.value;
    o.require(std::abs(got / rc - 1) <= 0.01,
              "noiseless RC " + num(rc * 1e9, 3) + " ns -> " + num(got * 1e9, 6) + " ns");
  }

  std::vector<double> f;
  for (int i = 0; i < 20; ++i) f.push_back(1e5 * std::pow(1e3, i / 19.0));
  const auto clean = frequency_response(f, dyn);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.05);
  double worst = 0;
  const int draws = 200;
  for (int k = 0; k < draws; ++k) {
    std::vector<double> y;
    for (double c : clean) y.push_back(c * (1 + noise(rng)));
    worst = std::max(worst, std::abs(fit_rc(f, y).fit.value - dyn.rc));
  }
  o.require(worst <= 8e-9, "5% noise, " + std::to_string(draws) + " draws: max |RC-55 ns| " +
                               num(worst * 1e9, 4) + " ns (<= 8)");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 10.0, "runtime " + num(elapsed, 3) + " s (< 10)");
  return o;
}

Outcome kernel_properties() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  double unit = 0, recip = 0, sigma = 0, chain = 0, perm = 0;

  for (int trial = 0; trial < 1000; ++trial) {
    // Lossless factories at random parameters.
    const double tr = u(rng);
    const double ph = 6.283185307179586 * u(rng);
    const double inf = std::numeric_limits<double>::infinity();
    unit = std::max(unit, grating_smatrix({tr, 1 - tr}).unitarity_defect());
    unit = std::max(unit, mmi_smatrix({0.0, 10 * u(rng), -inf, ph}).unitarity_defect());
    unit = std::max(unit, y_splitter_smatrix({0.0, -inf, true}).unitarity_defect());
    WaveguideParams w;
    w.length = 1e-3 * u(rng);
    w.tether_count = 0;
    w.absorption.overlap_p = w.absorption.overlap_n = 0;
    w.absorption.fk.strength = 0;
    w.orientation = Orientation::passive;
    unit = std::max(unit, arm_smatrix({880e-9 + 50e-9 * u(rng), 0.0}, w).unitarity_defect());

    // Random passive reciprocal network.
    auto c = testing_support::random_passive_circuit(rng, 2 + static_cast<int>(rng() % 6));
    const auto s = reduce_network(c.blocks, c.wiring);
    recip = std::max(recip, (s.entries() - s.entries().transpose()).cwiseAbs().maxCoeff());
    sigma = std::max(sigma, s.max_singular_value());

    // Block order and pair orientation must not matter.
    std::vector<SMatrix> shuffled = c.blocks;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<std::pair<PortId, PortId>> flipped;
    for (const auto& [a, b] : c.wiring.pairs()) flipped.emplace_back(b, a);
    std::shuffle(flipped.begin(), flipped.end(), rng);
    const auto s2 = reduce_network(shuffled, ConnectionMap(flipped, c.wiring.external()));
    perm = std::max(perm, (s.entries() - s2.entries()).cwiseAbs().maxCoeff());

    // Chain of two-ports: full reduction versus iterated star products.
    const int len = 2 + static_cast<int>(rng() % 5);
    std::vector<SMatrix> blocks;
    std::vector<std::pair<PortId, PortId>> links;
    for (int k = 0; k < len; ++k) {
      blocks.push_back(testing_support::random_passive_two_port(rng, "c" + std::to_string(k)));
      if (k > 0) links.push_back({{"c" + std::to_string(k - 1), "p2"}, {"c" + std::to_string(k), "p1"}});
    }
    SMatrix star = blocks[0];
    for (int k = 1; k < len; ++k) star = cascade_two_port(star, blocks[static_cast<std::size_t>(k)]);
    const auto full = reduce_network(
        blocks, ConnectionMap(links, {{"c0", "p1"}, {"c" + std::to_string(len - 1), "p2"}}));
    chain = std::max(chain, (full.entries() - star.entries()).cwiseAbs().maxCoeff());
  }
  const double elapsed = seconds_since(t0);
  o.require(unit < 1e-12, "lossless factories ||S^H S - I|| max " + num(unit, 3));
  o.require(recip < 1e-12, "reciprocity max " + num(recip, 3));
  o.require(sigma <= 1 + 1e-9, "sigma_max max " + num(sigma, 8));
  o.require(chain < 1e-12, "chain vs star max " + num(chain, 3));
  o.require(perm < 1e-12, "permutation max " + num(perm, 3));
  o.require(elapsed < 30.0, "1000 circuits in " + num(elapsed, 3) + " s (< 30)");
  return o;
}

Outcome parser_suite() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto preset = parse_netlist(bundled::kPaperPreset);
  o.require(structurally_equal(preset, parse_netlist(canonical_print(preset))), "preset round trip");

  int positional = 0, total = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(EOSIM_FIXTURES) / "malformed")) {
    ++total;
    const std::string text = read_file(entry.path().string());
    std::istringstream head(text);
    std::string hash, word, expected;
    head >> hash >> word >> expected;
    try {
      validate(parse_netlist(text));
    } catch (const NetlistError& e) {
      if (e.loc().line > 0 && e.loc().column > 0 && format_loc(e.loc()) == expected) ++positional;
    }
  }
  o.require(total >= 10 && positional == total,
            std::to_string(positional) + "/" + std::to_string(total) +
                " malformed fixtures with expected line:col");

  std::mt19937_64 rng(9);
  int ok = 0;
  for (int i = 0; i < 500; ++i) {
    const auto n = testing_support::random_netlist(rng);
    try {
      ok += structurally_equal(n, parse_netlist(canonical_print(n)));
    } catch (const Error&) {
    }
  }
  o.require(ok == 500, std::to_string(ok) + "/500 random netlists round trip");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 5.0, "runtime " + num(elapsed, 3) + " s (< 5)");
  return o;
}

Outcome performance() {
  Outcome o;
  const auto c = paper_preset();
  std::vector<double> wl;
  for (int i = 0; i < 1000; ++i) wl.push_back(880e-9 + i * 50e-9 / 999);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = sweep(c, {axis(-1, 1.2, 0.1), wl, "in", {}});
  const double elapsed = seconds_since(t0);
  o.require(r.amplitudes().size() == 23u * 1000u * 2u, "23 x 1000 x 2 amplitudes");
  o.require(elapsed < 5.0, "sweep in " + num(elapsed, 3) + " s (< 5)");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"analytic V_pi", analytic_vpi},
      {"V_pi and loss versus length", tradeoff},
      {"switching curve of the preset", switching_curve_band},
      {"crossing fit", crossing_fit},
      {"electro-absorption quench", quench},
      {"Fabry-Perot fringe spacing", fringes},
      {"RC dynamics", dynamics},
      {"kernel property suite", kernel_properties},
      {"parser suite", parser_suite},
      {"sweep performance", performance},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    failed += !out.pass;
    std::printf("%s %2zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                out.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
