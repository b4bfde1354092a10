#include "eosim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include <omp.h>

#include "eosim/bundled.hpp"

namespace eosim {

SweepResult::SweepResult(SweepGrid grid, std::vector<std::complex<double>> amplitudes)
    : grid_(std::move(grid)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != voltage_count() * wavelength_count() * port_count()) {
    throw ParameterError("sweep amplitude array does not match the grid");
  }
  powers_.resize(amplitudes_.size());
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) powers_[i] = std::norm(amplitudes_[i]);
}

std::size_t SweepResult::port_index(const std::string& label) const {
  const auto& p = grid_.output_ports;
  auto it = std::find(p.begin(), p.end(), label);
  if (it == p.end()) throw ConfigError("sweep has no output port '" + label + "'");
  return static_cast<std::size_t>(it - p.begin());
}

namespace {

struct Compiled {
  std::vector<ResolvedInstance> instances;
  std::vector<bool> dynamic;
  NetworkPlan plan;
  Eigen::Index input = 0;
  std::vector<Eigen::Index> outputs;
};

void check_axis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw ParameterError(std::string("sweep ") + name + " axis is empty");
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i])) throw ParameterError(std::string("sweep ") + name + " axis has a non-finite value");
    if (i > 0 && !(axis[i] > axis[i - 1])) {
      throw ParameterError(std::string("sweep ") + name + " axis must be strictly increasing");
    }
  }
}

std::vector<std::vector<PortId>> port_lists(const std::vector<ResolvedInstance>& inst) {
  std::vector<std::vector<PortId>> out;
  out.reserve(inst.size());
  for (const auto& r : inst) out.push_back(r.ports);
  return out;
}

Compiled compile(const CheckedCircuit& c, SweepGrid& grid, const ComponentDefaults& d) {
  check_axis(grid.voltages, "voltage");
  check_axis(grid.wavelengths, "wavelength");
  const auto& labels = c.external_labels();
  auto label_index = [&](const std::string& l) {
    auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw ConfigError("circuit has no external port '" + l + "'");
    return static_cast<Eigen::Index>(it - labels.begin());
  };
  if (grid.output_ports.empty()) {
    for (const auto& l : labels) {
      if (l != grid.input_port) grid.output_ports.push_back(l);
    }
    if (grid.output_ports.empty()) grid.output_ports.push_back(grid.input_port);
  }
  auto instances = resolve(c, d);
  const auto ports = port_lists(instances);
  Compiled k{std::move(instances), {}, NetworkPlan(ports, c.wiring()), 0, {}};
  k.input = label_index(grid.input_port);
  for (const auto& o : grid.output_ports) k.outputs.push_back(label_index(o));
  for (const auto& r : k.instances) k.dynamic.push_back(depends_on_voltage(r));
  return k;
}

std::string point_context(double v, double l) {
  return "at V=" + format_number(v) + " V, wavelength=" + format_number(l * 1e9) + " nm: ";
}

[[noreturn]] void rethrow_with(std::exception_ptr e, const std::string& ctx) {
  try {
    std::rethrow_exception(e);
  } catch (const RangeError& x) {
    throw RangeError(ctx + x.what());
  } catch (const ResonantSingularityError& x) {
    throw ResonantSingularityError(ctx + x.what());
  } catch (const DivergentFeedbackError& x) {
    throw DivergentFeedbackError(ctx + x.what());
  } catch (const WiringError& x) {
    throw WiringError(ctx + x.what());
  } catch (const ParameterError& x) {
    throw ParameterError(ctx + x.what());
  } catch (const Error& x) {
    throw Error(ctx + x.what());
  } catch (const IoError& x) {
    throw IoError(ctx + x.what());
  }
}

// Remembers the failure with the lowest grid index so the reported error does
// not depend on scheduling.
class FirstError {
 public:
  void record(std::size_t index, std::exception_ptr e, std::string ctx) {
    std::lock_guard lock(mu_);
    if (index < index_.load()) {
      index_.store(index);
      error_ = std::move(e);
      ctx_ = std::move(ctx);
    }
  }
  bool before(std::size_t index) const { return index_.load(std::memory_order_relaxed) < index; }
  void raise() const {
    if (error_) rethrow_with(error_, ctx_);
  }

 private:
  mutable std::mutex mu_;
  std::atomic<std::size_t> index_{std::numeric_limits<std::size_t>::max()};
  std::exception_ptr error_;
  std::string ctx_;
};

// Voltage-independent blocks at one wavelength; dynamic slots stay empty.
std::vector<CMatrix> static_blocks(const Compiled& k, double wavelength) {
  std::vector<CMatrix> out(k.instances.size());
  const OpticalEnvironment env{wavelength, 0.0};
  for (std::size_t i = 0; i < k.instances.size(); ++i) {
    if (!k.dynamic[i]) out[i] = instance_smatrix(k.instances[i], env).entries();
  }
  return out;
}

void evaluate_point(const Compiled& k, const std::vector<CMatrix>& cached, double v, double l,
                    std::complex<double>* dest) {
  const OpticalEnvironment env{l, v};
  std::vector<CMatrix> local(k.instances.size());
  std::vector<const CMatrix*> blocks(k.instances.size());
  for (std::size_t i = 0; i < k.instances.size(); ++i) {
    if (k.dynamic[i]) {
      local[i] = instance_smatrix(k.instances[i], env).entries();
      blocks[i] = &local[i];
    } else {
      blocks[i] = &cached[i];
    }
  }
  const CMatrix s = k.plan.reduce_entries(std::span<const CMatrix* const>(blocks));
  for (std::size_t p = 0; p < k.outputs.size(); ++p) dest[p] = s(k.outputs[p], k.input);
}

SweepResult run_sweep(const CheckedCircuit& c, SweepGrid grid, const ComponentDefaults& d,
                      bool parallel) {
  const Compiled k = compile(c, grid, d);
  const std::size_t nv = grid.voltages.size();
  const std::size_t nl = grid.wavelengths.size();
  const std::size_t np = k.outputs.size();
  std::vector<std::vector<CMatrix>> cache(nl);
  std::vector<std::complex<double>> amps(nv * nl * np);
  FirstError first;

  const auto nl_i = static_cast<std::ptrdiff_t>(nl);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t il = 0; il < nl_i; ++il) {
    const auto l = static_cast<std::size_t>(il);
    try {
      cache[l] = static_blocks(k, grid.wavelengths[l]);
    } catch (...) {
      first.record(l, std::current_exception(),
                   "at wavelength=" + format_number(grid.wavelengths[l] * 1e9) + " nm: ");
    }
  }
  first.raise();

  const auto total = static_cast<std::ptrdiff_t>(nv * nl);
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const auto flat = static_cast<std::size_t>(idx);
    if (first.before(flat)) continue;
    const std::size_t iv = flat / nl;
    const std::size_t il = flat % nl;
    try {
      evaluate_point(k, cache[il], grid.voltages[iv], grid.wavelengths[il], &amps[flat * np]);
    } catch (...) {
      first.record(flat, std::current_exception(),
                   point_context(grid.voltages[iv], grid.wavelengths[il]));
    }
  }
  first.raise();
  return SweepResult(std::move(grid), std::move(amps));
}

}  // namespace

SweepResult sweep(const CheckedCircuit& c, SweepGrid grid, const ComponentDefaults& d) {
  return run_sweep(c, std::move(grid), d, true);
}

SweepResult sweep_serial(const CheckedCircuit& c, SweepGrid grid, const ComponentDefaults& d) {
  return run_sweep(c, std::move(grid), d, false);
}

SMatrix evaluate(const CheckedCircuit& c, const OpticalEnvironment& env,
                 const ComponentDefaults& d) {
  Elaboration e = elaborate(c, env, d);
  return reduce_network(e.blocks, e.wiring);
}

// ---------------------------------------------------------------------------
// Preset

Netlist paper_preset_netlist() { return parse_netlist(bundled::kPaperPreset); }

double preset_trim(double crossing, const WaveguideParams& arm, double wavelength) {
  const double n3 = arm.eo.n_bulk * arm.eo.n_bulk * arm.eo.n_bulk;
  const double vpi = arm.junction.d_intrinsic * wavelength /
                     (2 * arm.length * n3 * arm.eo.r41 * arm.eo.gamma_eo);
  const double two_pi = 2 * std::numbers::pi;
  // At the crossing the arm phase difference pi (V_b - V)/V_pi minus the
  // trim must equal pi, with out1 falling as V rises.
  double trim = std::fmod(std::numbers::pi * (arm.junction.v_built_in - crossing) / vpi -
                              std::numbers::pi,
                          two_pi);
  if (trim < 0) trim += two_pi;
  return trim;
}

CheckedCircuit paper_preset(const PresetOptions& options) {
  Netlist n = paper_preset_netlist();
  apply_overrides(n, options.overrides);
  if (options.crossing_voltage) {
    const CheckedCircuit tmp = validate(n);
    const auto resolved = resolve(tmp, {});
    const WaveguideParams* arm2 = nullptr;
    for (const auto& r : resolved) {
      if (r.name == "arm2") arm2 = &std::get<WaveguideParams>(r.params);
    }
    if (!arm2) throw ConfigError("preset has no arm2");
    const double trim = preset_trim(*options.crossing_voltage, *arm2, options.trim_wavelength);
    apply_overrides(n, {{"arm2.phase_offset", format_number(trim)}});
  }
  return validate(std::move(n));
}

Overrides ideal_overrides() {
  return {{"grating.reflection", "0"},
          {"grating.transmission", "1"},
          {"y_splitter.insertion_loss_db", "0"},
          {"y_splitter.reflection_db", "-inf"},
          {"mmi.insertion_loss_db", "0"},
          {"mmi.reflection_db", "-inf"},
          {"arm.tether_loss_db", "0"},
          {"arm.absorption.overlap_p", "0"},
          {"arm.absorption.overlap_n", "0"},
          {"arm.fk.strength", "0"}};
}

}  // namespace eosim
