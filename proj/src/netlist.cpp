#include "eosim/netlist.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace eosim {

std::string_view to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::grating: return "grating";
    case ComponentKind::y_splitter: return "y_splitter";
    case ComponentKind::mmi: return "mmi";
    case ComponentKind::arm: return "arm";
    case ComponentKind::port: return "port";
  }
  return "?";
}

std::optional<ComponentKind> parse_kind(std::string_view name) {
  for (auto k : {ComponentKind::grating, ComponentKind::y_splitter, ComponentKind::mmi,
                 ComponentKind::arm, ComponentKind::port}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

const std::vector<std::string>& port_names(ComponentKind k) {
  static const std::vector<std::string> grating{"in", "out"};
  static const std::vector<std::string> ysplit{"in", "out1", "out2"};
  static const std::vector<std::string> mmi{"in1", "in2", "out1", "out2"};
  static const std::vector<std::string> arm{"a", "b"};
  switch (k) {
    case ComponentKind::grating: return grating;
    case ComponentKind::y_splitter: return ysplit;
    case ComponentKind::mmi: return mmi;
    case ComponentKind::arm: return arm;
    case ComponentKind::port: return grating;
  }
  return grating;
}

const Attribute* Instance::find(std::string_view key) const {
  for (const auto& a : attributes) {
    if (a.key == key) return &a;
  }
  return nullptr;
}

const Instance* Netlist::find(std::string_view name) const {
  for (const auto& i : instances) {
    if (i.name == name) return &i;
  }
  return nullptr;
}

Instance* Netlist::find(std::string_view name) {
  for (auto& i : instances) {
    if (i.name == name) return &i;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Values

namespace {

struct Unit {
  std::string_view name;
  double divisor;
};
constexpr std::array<Unit, 5> kUnits{{{"nm", 1e9}, {"um", 1e6}, {"mm", 1e3}, {"V", 1}, {"dB", 1}}};

const Unit* find_unit(std::string_view s) {
  for (const auto& u : kUnits) {
    if (u.name == s) return &u;
  }
  return nullptr;
}

bool all_alpha(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
  });
}

enum class TokenClass { number, string, bad_unit, bad_number };

struct Classified {
  TokenClass cls = TokenClass::string;
  double number = 0;
  std::size_t unit_offset = 0;  // where the unit (or bad suffix) starts
};

// Classifies a bare (unquoted) value token.
Classified classify(std::string_view t) {
  Classified out;
  std::size_t i = 0;
  bool neg = false;
  if (i < t.size() && (t[i] == '+' || t[i] == '-')) {
    neg = t[i] == '-';
    ++i;
  }
  if (t.substr(i, 3) == "inf") {
    std::string_view rest = t.substr(i + 3);
    if (rest.empty() || find_unit(rest)) {
      out.cls = TokenClass::number;
      out.number = neg ? -std::numeric_limits<double>::infinity()
                       : std::numeric_limits<double>::infinity();
      out.unit_offset = i + 3;
    }
    return out;
  }
  const std::size_t mant = i;
  std::size_t digits = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i, ++digits;
  if (i < t.size() && t[i] == '.') {
    ++i;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i, ++digits;
  }
  if (digits == 0) return out;  // a word
  if (i < t.size() && (t[i] == 'e' || t[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < t.size() && (t[j] == '+' || t[j] == '-')) ++j;
    const std::size_t exp_start = j;
    while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
    if (j > exp_start) i = j;
  }
  std::string_view rest = t.substr(i);
  if (!rest.empty() && !all_alpha(rest)) return out;  // e.g. "1m10": a word
  double v = 0;
  const char* first = t.data() + mant;
  auto [ptr, ec] = std::from_chars(first, t.data() + i, v);
  if (ec != std::errc() || ptr != t.data() + i) {
    out.cls = TokenClass::bad_number;
    return out;
  }
  if (neg) v = -v;
  out.unit_offset = i;
  if (!rest.empty()) {
    const Unit* u = find_unit(rest);
    if (!u) {
      out.cls = TokenClass::bad_unit;
      return out;
    }
    v /= u->divisor;
  }
  out.cls = TokenClass::number;
  out.number = v;
  return out;
}

AttrValue bare_value(std::string_view token, SourceLoc loc) {
  Classified c = classify(token);
  switch (c.cls) {
    case TokenClass::number: return c.number;
    case TokenClass::string: return std::string(token);
    case TokenClass::bad_unit:
      throw NetlistError({loc.line, loc.column + static_cast<int>(c.unit_offset)},
                         "unknown unit '" + std::string(token.substr(c.unit_offset)) +
                             "' (expected nm, um, mm, V or dB)");
    case TokenClass::bad_number:
      throw NetlistError(loc, "number '" + std::string(token) + "' out of range");
  }
  return std::string(token);
}

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Cursor over one source line; all positions are 1-based columns.
class LineParser {
 public:
  LineParser(std::string_view line, int lineno) : s_(line), line_(lineno) {}

  SourceLoc here() const { return {line_, static_cast<int>(pos_) + 1}; }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  [[noreturn]] void fail(const std::string& expected) {
    skip_ws();
    std::string found;
    if (pos_ >= s_.size() || s_[pos_] == '#') {
      found = "end of line";
    } else {
      std::size_t e = pos_;
      while (e < s_.size() && !std::isspace(static_cast<unsigned char>(s_[e]))) ++e;
      found = "'" + std::string(s_.substr(pos_, e - pos_)) + "'";
    }
    throw NetlistError(here(), "expected " + expected + ", found " + found);
  }

  std::string name(const std::string& what) {
    skip_ws();
    if (pos_ >= s_.size() || !is_name_start(s_[pos_])) fail(what);
    const std::size_t b = pos_;
    while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }

  // NAME { "." NAME }, no whitespace inside.
  std::string dotted(const std::string& what) {
    std::string key = name(what);
    while (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      if (pos_ >= s_.size() || !is_name_start(s_[pos_])) fail("attribute name after '.'");
      const std::size_t b = pos_;
      while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
      key += ".";
      key += s_.substr(b, pos_ - b);
    }
    return key;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("'") + c + "'");
    ++pos_;
  }

  Endpoint endpoint() {
    skip_ws();
    Endpoint e;
    e.loc = here();
    e.port.instance = name("instance name");
    expect('.');
    e.port.port = name("port name");
    return e;
  }

  AttrValue value() {
    skip_ws();
    const SourceLoc loc = here();
    if (pos_ >= s_.size() || s_[pos_] == '#') fail("attribute value");
    if (s_[pos_] == '"') return quoted();
    const std::size_t b = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != '#' && s_[pos_] != '"') {
      ++pos_;
    }
    return bare_value(s_.substr(b, pos_ - b), loc);
  }

  void end_of_statement() {
    if (!at_end()) fail("end of line");
  }

 private:
  std::string quoted() {
    const SourceLoc open = here();
    ++pos_;
    std::string out;
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        char e = s_[pos_++];
        if (e == 'n') {
          out += '\n';
        } else if (e == '"' || e == '\\') {
          out += e;
        } else {
          throw NetlistError({line_, static_cast<int>(pos_) - 1}, "unknown escape '\\" +
                                                                      std::string(1, e) + "'");
        }
        continue;
      }
      out += c;
    }
    throw NetlistError(open, "unterminated string");
  }

  std::string_view s_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace

AttrValue parse_value(std::string_view text, SourceLoc loc) {
  LineParser p(text, loc.line);
  AttrValue v = p.value();
  p.end_of_statement();
  return v;
}

// ---------------------------------------------------------------------------
// Parser

Netlist parse_netlist(std::string_view text) {
  Netlist n;
  int lineno = 0;
  std::size_t start = 0;
  std::set<std::string> names;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    ++lineno;
    start = nl + 1;

    LineParser p(line, lineno);
    if (p.at_end()) continue;
    const SourceLoc stmt = p.here();
    const std::string kw = p.name("'component', 'connect' or 'port'");
    if (kw == "component") {
      Instance inst;
      inst.loc = stmt;
      p.skip_ws();
      const SourceLoc name_loc = p.here();
      inst.name = p.name("instance name");
      if (!names.insert(inst.name).second) {
        throw NetlistError(name_loc, "duplicate instance '" + inst.name + "'");
      }
      p.skip_ws();
      const SourceLoc kind_loc = p.here();
      const std::string kind = p.name("component kind");
      auto k = parse_kind(kind);
      if (!k) {
        throw NetlistError(kind_loc, "unknown component kind '" + kind +
                                         "' (expected grating, y_splitter, mmi, arm or port)");
      }
      inst.kind = *k;
      while (!p.at_end()) {
        Attribute a;
        a.loc = p.here();
        a.key = p.dotted("attribute name");
        if (inst.find(a.key)) {
          throw NetlistError(a.loc, "duplicate attribute '" + a.key + "' on instance '" +
                                        inst.name + "'");
        }
        p.expect('=');
        a.value = p.value();
        inst.attributes.push_back(std::move(a));
      }
      n.instances.push_back(std::move(inst));
    } else if (kw == "connect") {
      Connection c;
      c.loc = stmt;
      c.a = p.endpoint();
      c.b = p.endpoint();
      p.end_of_statement();
      n.connections.push_back(std::move(c));
    } else if (kw == "port") {
      ExternalPort e;
      e.loc = stmt;
      e.label = p.name("external port label");
      e.port = p.endpoint();
      p.end_of_statement();
      n.externals.push_back(std::move(e));
    } else {
      throw NetlistError(stmt, "expected 'component', 'connect' or 'port', found '" + kw + "'");
    }
    if (nl == text.size()) break;
  }
  n.end = {lineno + 1, 1};
  return n;
}

Netlist load_netlist(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open netlist '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_netlist(ss.str());
}

// ---------------------------------------------------------------------------
// Printing and comparison

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

namespace {

std::string format_string(const std::string& s) {
  bool bare = !s.empty() && classify(s).cls == TokenClass::string;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '#' || c == '"' || c == '\\') {
      bare = false;
    }
  }
  if (bare) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out + "\"";
}

std::string format_value(const AttrValue& v) {
  if (const double* d = std::get_if<double>(&v)) return format_number(*d);
  return format_string(std::get<std::string>(v));
}

std::map<std::string, AttrValue> attr_map(const Instance& i) {
  std::map<std::string, AttrValue> m;
  for (const auto& a : i.attributes) m.emplace(a.key, a.value);
  return m;
}

std::multiset<std::pair<PortId, PortId>> link_set(const Netlist& n) {
  std::multiset<std::pair<PortId, PortId>> s;
  for (const auto& c : n.connections) s.insert(std::minmax(c.a.port, c.b.port));
  return s;
}

}  // namespace

std::string canonical_print(const Netlist& n) {
  std::string out;
  for (const auto& inst : n.instances) {
    out += "component " + inst.name + " " + std::string(to_string(inst.kind));
    for (const auto& [k, v] : attr_map(inst)) out += " " + k + "=" + format_value(v);
    out += "\n";
  }
  for (const auto& c : n.connections) {
    out += "connect " + c.a.port.str() + " " + c.b.port.str() + "\n";
  }
  for (const auto& e : n.externals) out += "port " + e.label + " " + e.port.port.str() + "\n";
  return out;
}

bool structurally_equal(const Netlist& a, const Netlist& b) {
  if (a.instances.size() != b.instances.size()) return false;
  for (std::size_t i = 0; i < a.instances.size(); ++i) {
    const auto& x = a.instances[i];
    const auto& y = b.instances[i];
    if (x.name != y.name || x.kind != y.kind || attr_map(x) != attr_map(y)) return false;
  }
  if (link_set(a) != link_set(b)) return false;
  if (a.externals.size() != b.externals.size()) return false;
  for (std::size_t i = 0; i < a.externals.size(); ++i) {
    if (a.externals[i].label != b.externals[i].label ||
        a.externals[i].port.port != b.externals[i].port.port) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Validation

const PortId& CheckedCircuit::external(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return wiring_.external()[i];
  }
  throw ConfigError("no external port labelled '" + std::string(label) + "'");
}

CheckedCircuit validate(Netlist n) {
  std::map<PortId, SourceLoc> used;

  auto check_endpoint = [&](const Endpoint& e) {
    const Instance* inst = n.find(e.port.instance);
    if (!inst) throw NetlistError(e.loc, "unknown instance '" + e.port.instance + "'");
    const auto& legal = port_names(inst->kind);
    if (std::find(legal.begin(), legal.end(), e.port.port) == legal.end()) {
      std::string list;
      for (const auto& p : legal) list += (list.empty() ? "" : ", ") + p;
      throw NetlistError(e.loc, "instance '" + inst->name + "' (" +
                                    std::string(to_string(inst->kind)) + ") has no port '" +
                                    e.port.port + "'; ports are " + list);
    }
    auto [it, fresh] = used.emplace(e.port, e.loc);
    if (!fresh) {
      throw NetlistError(e.loc, "port " + e.port.str() + " is already connected at " +
                                    format_loc(it->second));
    }
  };

  std::vector<std::pair<PortId, PortId>> pairs;
  for (const auto& c : n.connections) {
    if (c.a.port == c.b.port) {
      throw NetlistError(c.b.loc, "port " + c.a.port.str() + " connected to itself");
    }
    check_endpoint(c.a);
    check_endpoint(c.b);
    pairs.emplace_back(c.a.port, c.b.port);
  }
  std::set<std::string> labels;
  std::vector<PortId> ext;
  std::vector<std::string> label_list;
  for (const auto& e : n.externals) {
    if (!labels.insert(e.label).second) {
      throw NetlistError(e.loc, "duplicate external port label '" + e.label + "'");
    }
    check_endpoint(e.port);
    ext.push_back(e.port.port);
    label_list.push_back(e.label);
  }
  for (const auto& inst : n.instances) {
    for (const auto& p : port_names(inst.kind)) {
      PortId id{inst.name, p};
      if (!used.count(id)) {
        throw NetlistError(inst.loc, "dangling port " + id.str() +
                                         ": neither connected nor declared external");
      }
    }
  }
  if (ext.empty()) throw NetlistError(n.end, "circuit declares no external port");

  CheckedCircuit c;
  c.wiring_ = ConnectionMap(std::move(pairs), std::move(ext));
  c.labels_ = std::move(label_list);
  c.netlist_ = std::move(n);
  return c;
}

// ---------------------------------------------------------------------------
// Elaboration

namespace {

[[noreturn]] void attr_error(const Instance& inst, const Attribute& a, const std::string& msg) {
  throw NetlistError(a.loc, "instance '" + inst.name + "': attribute '" + a.key + "' " + msg);
}

double number_of(const Instance& inst, const Attribute& a) {
  if (const double* d = std::get_if<double>(&a.value)) return *d;
  attr_error(inst, a, "expects a number");
}

const std::string& string_of(const Instance& inst, const Attribute& a) {
  if (const auto* s = std::get_if<std::string>(&a.value)) return *s;
  attr_error(inst, a, "expects a string");
}

bool bool_of(const Instance& inst, const Attribute& a) {
  if (const double* d = std::get_if<double>(&a.value)) {
    if (*d == 0 || *d == 1) return *d == 1;
  } else {
    const auto& s = std::get<std::string>(a.value);
    if (s == "true" || s == "yes") return true;
    if (s == "false" || s == "no") return false;
  }
  attr_error(inst, a, "expects true/false or 1/0");
}

double* arm_slot(WaveguideParams& w, std::string_view key) {
  if (key == "length") return &w.length;
  if (key == "tether_loss_db") return &w.tether_loss_db;
  if (key == "phase_offset") return &w.phase_offset;
  if (key == "junction.v_built_in") return &w.junction.v_built_in;
  if (key == "junction.d_intrinsic") return &w.junction.d_intrinsic;
  if (key == "junction.v_min") return &w.junction.v_min;
  if (key == "junction.v_max") return &w.junction.v_max;
  if (key == "eo.n_bulk") return &w.eo.n_bulk;
  if (key == "eo.r41") return &w.eo.r41;
  if (key == "eo.gamma_eo") return &w.eo.gamma_eo;
  if (key.starts_with("absorption.")) key.remove_prefix(11);
  if (key == "alpha_p_bulk") return &w.absorption.alpha_p_bulk;
  if (key == "alpha_n_bulk") return &w.absorption.alpha_n_bulk;
  if (key == "overlap_p") return &w.absorption.overlap_p;
  if (key == "overlap_n") return &w.absorption.overlap_n;
  if (key == "fk.e_gap") return &w.absorption.fk.e_gap;
  if (key == "fk.reduced_mass_ratio") return &w.absorption.fk.reduced_mass_ratio;
  if (key == "fk.strength") return &w.absorption.fk.strength;
  return nullptr;
}

void apply_arm(const Instance& inst, const Attribute& a, WaveguideParams& w) {
  if (a.key == "orientation") {
    std::string text;
    if (const double* d = std::get_if<double>(&a.value)) {
      text = format_number(*d);
    } else {
      text = std::get<std::string>(a.value);
    }
    try {
      w.orientation = parse_orientation(text);
    } catch (const ParameterError& e) {
      attr_error(inst, a, e.what());
    }
  } else if (a.key == "tether_count") {
    const double v = number_of(inst, a);
    if (v != std::floor(v) || v < 0 || v > 1e6) attr_error(inst, a, "expects a count >= 0");
    w.tether_count = static_cast<int>(v);
  } else if (a.key == "dispersion") {
    if (const double* d = std::get_if<double>(&a.value)) {
      w.dispersion = DispersionModel::constant(*d);
    } else {
      w.dispersion = DispersionModel::load(string_of(inst, a));
    }
  } else if (double* slot = arm_slot(w, a.key)) {
    *slot = number_of(inst, a);
  } else {
    attr_error(inst, a, "is not a parameter of kind arm");
  }
}

void apply_grating(const Instance& inst, const Attribute& a, GratingParams& g) {
  if (a.key == "transmission") {
    g.transmission = number_of(inst, a);
  } else if (a.key == "reflection") {
    g.reflection = number_of(inst, a);
  } else {
    attr_error(inst, a, "is not a parameter of kind grating");
  }
}

void apply_splitter(const Instance& inst, const Attribute& a, SplitterParams& s) {
  if (a.key == "insertion_loss_db") {
    s.insertion_loss_db = number_of(inst, a);
  } else if (a.key == "reflection_db") {
    s.reflection_db = number_of(inst, a);
  } else if (a.key == "odd_mode_reflected") {
    s.odd_mode_reflected = bool_of(inst, a);
  } else {
    attr_error(inst, a, "is not a parameter of kind y_splitter");
  }
}

void apply_mmi(const Instance& inst, const Attribute& a, MmiParams& m) {
  if (a.key == "insertion_loss_db") {
    m.insertion_loss_db = number_of(inst, a);
  } else if (a.key == "imbalance_db") {
    m.imbalance_db = number_of(inst, a);
  } else if (a.key == "reflection_db") {
    m.reflection_db = number_of(inst, a);
  } else if (a.key == "cross_phase") {
    m.cross_phase = number_of(inst, a);
  } else {
    attr_error(inst, a, "is not a parameter of kind mmi");
  }
}

template <class P>
void checked(const std::string& name, const P& p) {
  try {
    p.validate();
  } catch (const ParameterError& e) {
    throw ParameterError("instance '" + name + "': " + e.what());
  }
}

}  // namespace

std::vector<ResolvedInstance> resolve(const CheckedCircuit& c, const ComponentDefaults& d) {
  std::vector<ResolvedInstance> out;
  out.reserve(c.netlist().instances.size());
  for (const auto& inst : c.netlist().instances) {
    ResolvedInstance r;
    r.name = inst.name;
    r.kind = inst.kind;
    for (const auto& p : port_names(inst.kind)) r.ports.push_back({inst.name, p});
    switch (inst.kind) {
      case ComponentKind::arm: {
        WaveguideParams w = d.arm;
        for (const auto& a : inst.attributes) apply_arm(inst, a, w);
        checked(inst.name, w);
        r.params = std::move(w);
        break;
      }
      case ComponentKind::grating: {
        GratingParams g = d.grating;
        for (const auto& a : inst.attributes) apply_grating(inst, a, g);
        checked(inst.name, g);
        r.params = g;
        break;
      }
      case ComponentKind::y_splitter: {
        SplitterParams s = d.splitter;
        for (const auto& a : inst.attributes) apply_splitter(inst, a, s);
        checked(inst.name, s);
        r.params = s;
        break;
      }
      case ComponentKind::mmi: {
        MmiParams m = d.mmi;
        for (const auto& a : inst.attributes) apply_mmi(inst, a, m);
        checked(inst.name, m);
        r.params = m;
        break;
      }
      case ComponentKind::port:
        if (!inst.attributes.empty()) {
          attr_error(inst, inst.attributes.front(), "is not a parameter of kind port");
        }
        break;
    }
    out.push_back(std::move(r));
  }
  return out;
}

SMatrix instance_smatrix(const ResolvedInstance& r, const OpticalEnvironment& env) {
  try {
    switch (r.kind) {
      case ComponentKind::arm:
        return arm_smatrix(env, std::get<WaveguideParams>(r.params), r.name);
      case ComponentKind::grating: return grating_smatrix(std::get<GratingParams>(r.params), r.name);
      case ComponentKind::y_splitter:
        return y_splitter_smatrix(std::get<SplitterParams>(r.params), r.name);
      case ComponentKind::mmi: return mmi_smatrix(std::get<MmiParams>(r.params), r.name);
      case ComponentKind::port: return through_smatrix(r.name);
    }
  } catch (const RangeError& e) {
    throw RangeError("instance '" + r.name + "': " + e.what());
  } catch (const ParameterError& e) {
    throw ParameterError("instance '" + r.name + "': " + e.what());
  }
  throw ParameterError("instance '" + r.name + "': unhandled kind");
}

bool depends_on_voltage(const ResolvedInstance& r) { return r.kind == ComponentKind::arm; }

Elaboration elaborate(const CheckedCircuit& c, const OpticalEnvironment& env,
                      const ComponentDefaults& defaults) {
  Elaboration e;
  for (const auto& r : resolve(c, defaults)) e.blocks.push_back(instance_smatrix(r, env));
  e.wiring = c.wiring();
  return e;
}

// ---------------------------------------------------------------------------
// Overrides

std::pair<std::string, std::string> split_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
    throw ConfigError("override '" + std::string(text) + "' is not of the form key=value");
  }
  return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

void apply_overrides(Netlist& n,
                     const std::vector<std::pair<std::string, std::string>>& overrides) {
  for (const auto& [path, text] : overrides) {
    const auto dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == path.size()) {
      throw ConfigError("override key '" + path + "' must be <instance|kind>.<attribute>");
    }
    const std::string head = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);
    AttrValue value;
    try {
      value = parse_value(text);
    } catch (const NetlistError& e) {
      throw ConfigError("override " + path + ": " + e.message());
    }
    std::vector<Instance*> targets;
    if (Instance* inst = n.find(head)) {
      targets.push_back(inst);
    } else if (auto kind = parse_kind(head)) {
      for (auto& inst : n.instances) {
        if (inst.kind == *kind) targets.push_back(&inst);
      }
    } else {
      throw ConfigError("override target '" + head + "' is neither an instance nor a kind");
    }
    for (Instance* inst : targets) {
      auto it = std::find_if(inst->attributes.begin(), inst->attributes.end(),
                             [&](const Attribute& a) { return a.key == key; });
      if (it != inst->attributes.end()) {
        it->value = value;
      } else {
        inst->attributes.push_back({key, value, SourceLoc{0, 0}});
      }
    }
  }
}

}  // namespace eosim
