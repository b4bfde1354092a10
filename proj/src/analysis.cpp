#include "eosim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace eosim {

void SwitchingCurve::validate() const {
  if (voltages.size() != p1.size() || voltages.size() != p2.size()) {
    throw AnalysisError("switching curve columns differ in length");
  }
  if (!a1.empty() && (a1.size() != p1.size() || a2.size() != p2.size())) {
    throw AnalysisError("switching curve amplitudes do not match the powers");
  }
  for (std::size_t i = 0; i < p1.size(); ++i) {
    if (!(p1[i] >= 0 && p2[i] >= 0)) throw AnalysisError("switching curve has negative power");
  }
}

SwitchingCurve switching_curve(const SweepResult& r, std::size_t il, const std::string& port1,
                               const std::string& port2) {
  if (il >= r.wavelength_count()) throw AnalysisError("wavelength index out of range");
  const std::size_t i1 = r.port_index(port1);
  const std::size_t i2 = r.port_index(port2);
  SwitchingCurve c;
  c.voltages = r.grid().voltages;
  for (std::size_t iv = 0; iv < r.voltage_count(); ++iv) {
    c.a1.push_back(r.amplitude(iv, il, i1));
    c.a2.push_back(r.amplitude(iv, il, i2));
    c.p1.push_back(r.power(iv, il, i1));
    c.p2.push_back(r.power(iv, il, i2));
  }
  return c;
}

std::vector<double> normalized_intensity(const SwitchingCurve& c) {
  c.validate();
  std::vector<double> f(c.p1.size());
  std::string bad;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double total = c.p1[i] + c.p2[i];
    if (!(total > 0)) {
      bad += (bad.empty() ? "" : ", ") + format_number(c.voltages[i]);
      continue;
    }
    f[i] = c.p1[i] / total;
  }
  if (!bad.empty()) throw AnalysisError("normalized intensity undefined at V = " + bad);
  return f;
}

namespace {

struct Quadratic {
  double c0, c1, c2;  // c0 + c1 t + c2 t^2
  double at(double t) const { return c0 + t * (c1 + t * c2); }
};

// |z0 + t (z1 - z0)|^2
Quadratic power_along(std::complex<double> z0, std::complex<double> z1) {
  const std::complex<double> dz = z1 - z0;
  return {std::norm(z0), 2 * std::real(std::conj(z0) * dz), std::norm(dz)};
}

// Stationary points of N/D on (0, 1). The cubic terms of N'D - ND' cancel.
std::vector<double> ratio_stationary(const Quadratic& n, const Quadratic& d) {
  const double a = n.c2 * d.c1 - n.c1 * d.c2;
  const double b = 2 * (n.c2 * d.c0 - n.c0 * d.c2);
  const double c = n.c1 * d.c0 - n.c0 * d.c1;
  std::vector<double> t;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0) return t;
  if (std::abs(a) <= 1e-14 * scale) {
    if (b != 0) t.push_back(-c / b);
  } else {
    const double disc = b * b - 4 * a * c;
    if (disc >= 0) {
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      if (q != 0) t.push_back(c / q);
      t.push_back(q / a);
    }
  }
  std::erase_if(t, [](double x) { return !(x > 0 && x < 1); });
  return t;
}

}  // namespace

Extinction extinction_and_visibility(const SwitchingCurve& c) {
  c.validate();
  if (c.p1.empty()) throw AnalysisError("empty switching curve");
  Extinction e;
  double best = -1;
  auto consider = [&](double num, double den, double v) {
    if (num == 0 && den == 0) return;
    if (den == 0) {
      if (!e.infinite) e.at_voltage = v;
      e.infinite = true;
      return;
    }
    const double r = num / den;
    if (r > best) {
      best = r;
      if (!e.infinite) e.at_voltage = v;
    }
  };
  for (std::size_t i = 0; i < c.p1.size(); ++i) consider(c.p1[i], c.p2[i], c.voltages[i]);
  if (!c.a1.empty()) {
    for (std::size_t i = 0; i + 1 < c.p1.size(); ++i) {
      const Quadratic n = power_along(c.a1[i], c.a1[i + 1]);
      const Quadratic d = power_along(c.a2[i], c.a2[i + 1]);
      for (double t : ratio_stationary(n, d)) {
        const double v = c.voltages[i] + t * (c.voltages[i + 1] - c.voltages[i]);
        consider(std::max(0.0, n.at(t)), std::max(0.0, d.at(t)), v);
      }
    }
  }
  if (e.infinite) {
    e.ratio = std::numeric_limits<double>::infinity();
    e.visibility = 1.0;
    return e;
  }
  if (best < 0) throw AnalysisError("extinction ratio undefined: both ports dark everywhere");
  e.ratio = best;
  e.visibility = (best - 1) / (best + 1);
  return e;
}

std::vector<double> crossings(const std::vector<double>& v, const std::vector<double>& f) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double a = f[i] - 0.5;
    const double b = f[i + 1] - 0.5;
    if (a == 0) {
      out.push_back(v[i]);
    } else if (a * b < 0) {
      out.push_back(v[i] + (v[i + 1] - v[i]) * a / (a - b));
    }
  }
  if (!f.empty() && f.back() - 0.5 == 0) out.push_back(v.back());
  return out;
}

// ---------------------------------------------------------------------------
// Crossing fit

CrossingFit fit_crossing(const SwitchingCurve& data, const CurveModel& model, double lo,
                         double hi) {
  const std::vector<double> f = normalized_intensity(data);
  if (f.size() < 3) throw AnalysisError("crossing fit needs at least three points");
  if (!(hi > lo)) throw AnalysisError("crossing fit offset interval is empty");
  int evals = 0;
  auto residuals = [&](double theta) {
    ++evals;
    std::vector<double> m = model(theta, data.voltages);
    if (m.size() != f.size()) throw AnalysisError("model returned the wrong number of points");
    for (std::size_t i = 0; i < m.size(); ++i) m[i] -= f[i];
    return m;
  };
  auto ssr = [&](double theta) {
    const auto r = residuals(theta);
    return std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
  };

  constexpr int kScan = 72;
  const double step = (hi - lo) / kScan;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double s = ssr(lo + step * i);
    if (s < best_val) {
      best_val = s;
      best = i;
    }
  }
  const double centre = lo + step * best;
  std::uintmax_t brent_iters = 200;
  auto [theta, value] = boost::math::tools::brent_find_minima(
      ssr, centre - step, centre + step, std::numeric_limits<double>::digits / 2, brent_iters);

  // Gauss-Newton polish: Brent only pins the minimum to ~sqrt(eps).
  for (int it = 0; it < 30; ++it) {
    const double h = 1e-6;
    const auto r = residuals(theta);
    const auto rp = residuals(theta + h);
    const auto rm = residuals(theta - h);
    double jj = 0, jr = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double j = (rp[i] - rm[i]) / (2 * h);
      jj += j * j;
      jr += j * r[i];
    }
    if (jj == 0) break;
    const double delta = -jr / jj;
    const double trial = ssr(theta + delta);
    if (!(trial < value)) break;
    theta += delta;
    value = trial;
    if (std::abs(delta) < 1e-15 * std::max(1.0, std::abs(theta))) break;
  }

  CrossingFit out;
  out.fit.parameter = "phase_offset";
  out.fit.value = theta;
  out.fit.residual_norm = std::sqrt(value);
  out.fit.iterations = evals;

  // 0.5 crossing of the fitted model within the data span.
  const double v0 = data.voltages.front();
  const double v1 = data.voltages.back();
  constexpr int kFine = 1001;
  std::vector<double> fine(kFine);
  for (int i = 0; i < kFine; ++i) fine[i] = v0 + (v1 - v0) * i / (kFine - 1);
  const std::vector<double> mf = model(theta, fine);
  std::vector<double> cand = crossings(fine, mf);
  if (cand.empty()) throw AnalysisError("fitted model has no 0.5 crossing in the voltage range");

  const std::vector<double> data_cross = crossings(data.voltages, f);
  double pick = cand.front();
  if (!data_cross.empty()) {
    for (double x : cand) {
      if (std::abs(x - data_cross.front()) < std::abs(pick - data_cross.front())) pick = x;
    }
  }
  // Polish on the model itself.
  const double dv = (v1 - v0) / (kFine - 1);
  auto g = [&](double v) { return model(theta, {v})[0] - 0.5; };
  double a = std::max(v0, pick - dv), b = std::min(v1, pick + dv);
  double ga = g(a), gb = g(b);
  if (ga * gb < 0) {
    std::uintmax_t iters = 100;
    auto tol = boost::math::tools::eps_tolerance<double>(48);
    auto [ra, rb] = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters);
    pick = 0.5 * (ra + rb);
  }
  out.crossing_voltage = pick;
  return out;
}

CurveModel preset_curve_model(double wavelength, Overrides overrides) {
  return [wavelength, overrides](double offset, const std::vector<double>& voltages) {
    PresetOptions opt;
    opt.overrides = overrides;
    opt.overrides.emplace_back("arm2.phase_offset", format_number(offset));
    const CheckedCircuit c = paper_preset(opt);
    SweepGrid grid;
    grid.voltages = voltages;
    grid.wavelengths = {wavelength};
    grid.output_ports = {"out1", "out2"};
    return normalized_intensity(switching_curve(sweep_serial(c, grid), 0));
  };
}

// ---------------------------------------------------------------------------

double vpi_analytic(double d, double length, double n, double r41, double wavelength,
                    double gamma) {
  if (!(d > 0 && length > 0 && n > 0 && r41 > 0 && wavelength > 0 && gamma > 0)) {
    throw ParameterError("vpi_analytic needs positive inputs");
  }
  const double k = 2 * std::numbers::pi / wavelength;
  return d * std::numbers::pi / (k * length * n * n * n * r41 * gamma);
}

namespace {

double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double p = (x1 - x0) * (y1 - y2);
  const double q = (x1 - x2) * (y1 - y0);
  const double den = p - q;
  if (den == 0) return x1;
  return x1 - 0.5 * ((x1 - x0) * p - (x1 - x2) * q) / den;
}

}  // namespace

double vpi_from_curve(const SwitchingCurve& c) {
  const std::vector<double> f = normalized_intensity(c);
  const auto& v = c.voltages;
  struct Extremum {
    double v;
    bool max;
  };
  std::vector<Extremum> ext;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const bool is_max = f[i] > f[i - 1] && f[i] >= f[i + 1];
    const bool is_min = f[i] < f[i - 1] && f[i] <= f[i + 1];
    if (is_max || is_min) {
      ext.push_back({parabola_vertex(v[i - 1], f[i - 1], v[i], f[i], v[i + 1], f[i + 1]), is_max});
    }
  }
  for (std::size_t i = 0; i + 1 < ext.size(); ++i) {
    if (ext[i].max != ext[i + 1].max) return std::abs(ext[i + 1].v - ext[i].v);
  }
  throw AnalysisError("switching curve does not span a full switching period");
}

std::vector<TradeoffRow> design_tradeoff(const std::vector<double>& lengths,
                                         const TradeoffParams& p) {
  std::vector<TradeoffRow> rows;
  const double db_per_neper = 10 / std::numbers::ln10;
  const OpticalEnvironment env{p.wavelength, p.bias};
  const double alpha = total_absorption(env, p.arm);
  if (lengths.empty()) throw ParameterError("tradeoff needs at least one length");
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    if (!(lengths[i] > lengths[i - 1])) throw ParameterError("tradeoff lengths must be ascending");
  }
  for (double len : lengths) {
    if (!(len > 0)) throw ParameterError("tradeoff lengths must be positive");
    TradeoffRow r;
    r.length = len;
    r.vpi = vpi_analytic(p.arm.junction.d_intrinsic, len, p.arm.eo.n_bulk, p.arm.eo.r41,
                         p.wavelength, p.arm.eo.gamma_eo);
    r.loss_db = db_per_neper * alpha * len + p.fixed_loss_db;
    rows.push_back(r);
  }
  return rows;
}

double expected_fringe_spacing(double wavelength, double group_index, double cavity_length) {
  return wavelength * wavelength / (2 * group_index * cavity_length);
}

double fringe_spacing(const SweepResult& r, const std::string& port, std::size_t iv) {
  if (iv >= r.voltage_count()) throw AnalysisError("voltage index out of range");
  const std::size_t ip = r.port_index(port);
  const auto& wl = r.grid().wavelengths;
  const std::size_t n = wl.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = r.power(iv, i, ip);
  if (n < 3) throw AnalysisError("no fringes: spectrum has fewer than three points");
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double range = *hi - *lo;
  if (!(range > 1e-9 * std::max(*hi, 1e-300))) throw AnalysisError("no fringes: spectrum is flat");

  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    double left = y[i];
    for (std::size_t j = i; j-- > 0 && y[j] <= y[i];) left = std::min(left, y[j]);
    double right = y[i];
    for (std::size_t j = i + 1; j < n && y[j] <= y[i]; ++j) right = std::min(right, y[j]);
    if (y[i] - std::max(left, right) < 0.01 * range) continue;
    peaks.push_back(parabola_vertex(wl[i - 1], y[i - 1], wl[i], y[i], wl[i + 1], y[i + 1]));
  }
  if (peaks.size() < 2) throw AnalysisError("no fringes: fewer than two resolved peaks");
  const double spacing = (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
  const double step = (wl.back() - wl.front()) / static_cast<double>(n - 1);
  if (spacing / step < 8) {
    throw AnalysisError("wavelength axis too coarse: " + format_number(spacing / step) +
                        " points per fringe (need 8)");
  }
  return spacing;
}

}  // namespace eosim
