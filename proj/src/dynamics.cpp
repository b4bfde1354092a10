#include "eosim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace eosim {

void DiodeDynamics::validate() const {
  if (!(rc > 0)) throw ParameterError("rc must be > 0");
  if (!(v_on > v_off)) throw ParameterError("v_on must exceed v_off");
}

DriveWaveform DriveWaveform::protocol(double frequency, const DiodeDynamics& dyn) {
  return {frequency, dyn.v_on, 2 * dyn.v_off - dyn.v_on};
}

void DriveWaveform::validate() const {
  if (!(frequency > 0)) throw ParameterError("drive frequency must be > 0");
  if (!(v_high > v_low)) throw ParameterError("drive v_high must exceed v_low");
}

// In steady state the junction swings between m - A h and m + A h with
// m = (vh + vl)/2, A = (vh - vl)/2, h = tanh(T / 4RC): each half period is an
// exponential approach toward the current drive level that ends where the
// other half starts.
Waveform filtered_waveform(const DriveWaveform& drive, const DiodeDynamics& dyn, int n) {
  drive.validate();
  dyn.validate();
  if (n < 16 || n % 2 != 0) {
    throw ParameterError("samples_per_period must be even and at least 16");
  }
  const double period = 1 / drive.frequency;
  const double m = 0.5 * (drive.v_high + drive.v_low);
  const double a = 0.5 * (drive.v_high - drive.v_low);
  const double h = std::tanh(period / (4 * dyn.rc));
  Waveform w;
  w.v_min = m - a * h;
  w.v_max = m + a * h;
  w.time.resize(static_cast<std::size_t>(n));
  w.voltage.resize(static_cast<std::size_t>(n));
  const int half = n / 2;
  for (int k = 0; k < half; ++k) {
    const double t = period * k / n;
    const double decay = std::exp(-t / dyn.rc);
    // deviation from m; the second half is its mirror image
    const double dev = a - (a + a * h) * decay;
    w.time[static_cast<std::size_t>(k)] = t;
    w.time[static_cast<std::size_t>(k + half)] = t + 0.5 * period;
    w.voltage[static_cast<std::size_t>(k)] = m + dev;
    w.voltage[static_cast<std::size_t>(k + half)] = m - dev;
  }
  return w;
}

double ripple_peak_to_peak(const DriveWaveform& drive, const DiodeDynamics& dyn) {
  drive.validate();
  dyn.validate();
  return (drive.v_high - drive.v_low) * std::tanh(1 / (4 * drive.frequency * dyn.rc));
}

double intensity_map(double v, const DiodeDynamics& dyn) {
  return std::clamp((v - dyn.v_off) / (dyn.v_on - dyn.v_off), 0.0, 1.0);
}

double sampled_mean(const DriveWaveform& drive, const DiodeDynamics& dyn,
                    const std::function<double(double)>& map, int n) {
  const Waveform w = filtered_waveform(drive, dyn, n);
  double acc = 0;
  for (double v : w.voltage) acc += map(v);
  return acc / static_cast<double>(w.voltage.size());
}

namespace {

// Normalized response as a function of s = f RC. With x = 1/(4 s) the
// clamped map integrates to 1/2 - ln(1 + tanh x)/(4x) per period.
double response_of(double s) {
  const double x = 1 / (4 * s);
  return 1 - std::log1p(std::tanh(x)) / x;
}

}  // namespace

double mean_intensity(double frequency, const DiodeDynamics& dyn) {
  dyn.validate();
  if (!(frequency > 0)) throw ParameterError("frequency must be > 0");
  return 0.5 * response_of(frequency * dyn.rc);
}

std::vector<double> frequency_response(const std::vector<double>& freqs, const DiodeDynamics& dyn) {
  dyn.validate();
  std::vector<double> out;
  out.reserve(freqs.size());
  for (double f : freqs) {
    if (!(f > 0)) throw ParameterError("frequencies must be > 0");
    out.push_back(response_of(f * dyn.rc));
  }
  return out;
}

namespace {

// s = f RC where the response equals level, 0 < level < 1.
double invert_response(double level) {
  auto g = [level](double log_s) { return response_of(std::exp(log_s)) - level; };
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(g, std::log(1e-8), std::log(1e8),
                                                  boost::math::tools::eps_tolerance<double>(50),
                                                  iters);
  return std::exp(0.5 * (a + b));
}

}  // namespace

double response_knee(const DiodeDynamics& dyn, double level) {
  dyn.validate();
  if (!(level > 0 && level < 1)) throw ParameterError("knee level must lie in (0, 1)");
  return invert_response(level) / dyn.rc;
}

RcFit fit_rc(const std::vector<double>& f, const std::vector<double>& y,
             const DiodeDynamics& landmarks) {
  if (f.size() != y.size()) throw AnalysisError("fit_rc: column lengths differ");
  if (f.size() < 5) throw AnalysisError("fit_rc needs at least 5 points");
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] > 0) || !std::isfinite(y[i])) throw AnalysisError("fit_rc: invalid data point");
  }
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  if (*ymax < 0.6 || *ymin > 0.4) {
    throw AnalysisError("knee not bracketed: response spans [" + format_number(*ymin) + ", " +
                        format_number(*ymax) + "], need points above 0.6 and below 0.4");
  }

  // Start from the median of point-wise inversions of the response.
  std::vector<double> guesses;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (y[i] > 0.05 && y[i] < 0.95) guesses.push_back(std::log(invert_response(y[i]) / f[i]));
  }
  if (guesses.empty()) throw AnalysisError("knee not bracketed: no points inside the transition");
  std::nth_element(guesses.begin(), guesses.begin() + guesses.size() / 2, guesses.end());
  const double u0 = guesses[guesses.size() / 2];

  int evals = 0;
  auto residuals = [&](double u) {
    ++evals;
    DiodeDynamics d = landmarks;
    d.rc = std::exp(u);
    std::vector<double> r = frequency_response(f, d);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
    return r;
  };
  auto ssr = [&](double u) {
    const auto r = residuals(u);
    return std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
  };

  std::uintmax_t iters = 200;
  auto [u, value] = boost::math::tools::brent_find_minima(
      ssr, u0 - 1.5, u0 + 1.5, std::numeric_limits<double>::digits / 2, iters);
  double jj = 0;
  for (int it = 0; it < 30; ++it) {
    const double h = 1e-6;
    const auto r = residuals(u);
    const auto rp = residuals(u + h);
    const auto rm = residuals(u - h);
    double jr = 0;
    jj = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double j = (rp[i] - rm[i]) / (2 * h);
      jj += j * j;
      jr += j * r[i];
    }
    if (jj == 0) break;
    const double delta = -jr / jj;
    const double trial = ssr(u + delta);
    if (!(trial < value)) break;
    u += delta;
    value = trial;
    if (std::abs(delta) < 1e-14) break;
  }

  const double rc = std::exp(u);
  const double dof = static_cast<double>(f.size() - 1);
  // d/du = rc d/drc, so the sensitivity to rc is J_u / rc.
  const double se_u = jj > 0 ? std::sqrt(value / dof / jj) : 0.0;

  RcFit out;
  out.fit.parameter = "rc";
  out.fit.value = rc;
  out.fit.residual_norm = std::sqrt(value);
  out.fit.iterations = evals + static_cast<int>(iters);
  out.fit.standard_error = rc * se_u;
  return out;
}

}  // namespace eosim
