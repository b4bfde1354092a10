#pragma once

// Line-oriented circuit description:
//
//   # comment
//   component <name> <kind> key=value ...
//   connect <inst>.<port> <inst>.<port>
//   port <label> <inst>.<port>
//
// Values are numbers with an optional unit (nm, um, mm, V, dB), normalized to
// SI at parse time, or strings (bare words or "quoted").

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "eosim/components.hpp"
#include "eosim/error.hpp"
#include "eosim/materials.hpp"
#include "eosim/sparams.hpp"

namespace eosim {

enum class ComponentKind { grating, y_splitter, mmi, arm, port };

std::string_view to_string(ComponentKind k);
std::optional<ComponentKind> parse_kind(std::string_view name);
const std::vector<std::string>& port_names(ComponentKind k);

using AttrValue = std::variant<double, std::string>;

struct Attribute {
  std::string key;
  AttrValue value;
  SourceLoc loc;
};

struct Instance {
  std::string name;
  ComponentKind kind = ComponentKind::arm;
  std::vector<Attribute> attributes;
  SourceLoc loc;

  const Attribute* find(std::string_view key) const;
};

struct Endpoint {
  PortId port;
  SourceLoc loc;
};

struct Connection {
  Endpoint a;
  Endpoint b;
  SourceLoc loc;
};

struct ExternalPort {
  std::string label;
  Endpoint port;
  SourceLoc loc;
};

struct Netlist {
  std::vector<Instance> instances;
  std::vector<Connection> connections;
  std::vector<ExternalPort> externals;
  // Position just past the last line, for whole-file diagnostics.
  SourceLoc end;

  const Instance* find(std::string_view name) const;
  Instance* find(std::string_view name);
};

// Same instances (order, kind, attribute set), same unordered connection set,
// same ordered externals. Source locations are ignored.
bool structurally_equal(const Netlist& a, const Netlist& b);

Netlist parse_netlist(std::string_view text);
Netlist load_netlist(const std::string& path);

// Parses a single attribute value with the netlist value rules. `loc` is used
// for diagnostics.
AttrValue parse_value(std::string_view text, SourceLoc loc = {1, 1});

// Stable text form: one statement per line, attributes sorted by key, numbers
// in shortest round-trip form without units.
std::string canonical_print(const Netlist& n);
std::string format_number(double v);

class CheckedCircuit {
 public:
  const Netlist& netlist() const { return netlist_; }
  const ConnectionMap& wiring() const { return wiring_; }
  // External labels in declaration order (parallel to wiring().external()).
  const std::vector<std::string>& external_labels() const { return labels_; }
  const PortId& external(std::string_view label) const;

 private:
  friend CheckedCircuit validate(Netlist n);
  Netlist netlist_;
  ConnectionMap wiring_;
  std::vector<std::string> labels_;
};

// Throws NetlistError (with the offending location) for unknown instances or
// ports, double connections, dangling ports, duplicate labels and circuits
// with no external port.
CheckedCircuit validate(Netlist n);

struct ComponentDefaults {
  WaveguideParams arm;
  GratingParams grating;
  SplitterParams splitter;
  MmiParams mmi;
};

using ComponentParams =
    std::variant<std::monostate, WaveguideParams, GratingParams, SplitterParams, MmiParams>;

struct ResolvedInstance {
  std::string name;
  ComponentKind kind;
  ComponentParams params;
  std::vector<PortId> ports;
};

// Applies instance attributes over the defaults. Unknown attributes and type
// mismatches throw NetlistError naming the instance; invalid parameter values
// throw ParameterError prefixed with the instance name.
std::vector<ResolvedInstance> resolve(const CheckedCircuit& c, const ComponentDefaults& defaults);

// S-matrix of one resolved instance at env.
SMatrix instance_smatrix(const ResolvedInstance& r, const OpticalEnvironment& env);
// True if the instance S-matrix depends on the bias voltage.
bool depends_on_voltage(const ResolvedInstance& r);

struct Elaboration {
  std::vector<SMatrix> blocks;
  ConnectionMap wiring;
};

Elaboration elaborate(const CheckedCircuit& c, const OpticalEnvironment& env,
                      const ComponentDefaults& defaults = {});

// Dotted overrides applied to the attribute lists: "<instance>.<key>=v" sets
// one instance, "<kind>.<key>=v" every instance of that kind. Values use the
// netlist value syntax. Throws ConfigError for an unknown target.
void apply_overrides(Netlist& n, const std::vector<std::pair<std::string, std::string>>& overrides);
// Parses "a.b.c=value" into its key/value parts; throws ConfigError.
std::pair<std::string, std::string> split_override(std::string_view text);

}  // namespace eosim
