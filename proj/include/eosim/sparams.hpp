#pragma once

// Complex scattering-matrix algebra over named ports and exact elimination of
// internal ports in a connected multiport network.
//
// Convention: entry (i, j) is the outgoing amplitude at port i for unit
// incoming amplitude at port j; |amplitude|^2 is power.

#include <complex>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace eosim {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

struct PortId {
  std::string instance;
  std::string port;

  auto operator<=>(const PortId&) const = default;
  bool operator==(const PortId&) const = default;

  std::string str() const { return instance + "." + port; }
};

struct Tolerances {
  double structural = 1e-12;
  double passivity = 1e-9;
};

class SMatrix {
 public:
  SMatrix() = default;
  // Throws ParameterError unless the matrix is square, matches the port
  // count, and the port names are unique.
  SMatrix(std::vector<PortId> ports, CMatrix entries);

  static SMatrix identity(std::vector<PortId> ports);

  const std::vector<PortId>& ports() const { return ports_; }
  const CMatrix& entries() const { return entries_; }
  std::size_t size() const { return ports_.size(); }

  // Index of a port, or throws ParameterError.
  std::size_t index_of(const PortId& p) const;
  cplx at(const PortId& out, const PortId& in) const;

  double max_singular_value() const;
  bool is_reciprocal(double tol = Tolerances{}.structural) const;
  // max |(S^H S - I)_ij|
  double unitarity_defect() const;

  // Same matrix with the ports renamed onto a new instance.
  SMatrix renamed(const std::string& instance) const;

 private:
  std::vector<PortId> ports_;
  CMatrix entries_;
};

// Unordered internal links plus the ordered external port list.
class ConnectionMap {
 public:
  ConnectionMap() = default;
  // Throws WiringError if a port appears twice or an external port is linked.
  ConnectionMap(std::vector<std::pair<PortId, PortId>> pairs, std::vector<PortId> external);

  const std::vector<std::pair<PortId, PortId>>& pairs() const { return pairs_; }
  const std::vector<PortId>& external() const { return external_; }

 private:
  std::vector<std::pair<PortId, PortId>> pairs_;  // each pair stored (min, max)
  std::vector<PortId> external_;
};

// Star composition of a and b joined at (a.port2, b.port1). The result carries
// ports (a.port1, b.port2).
SMatrix cascade_two_port(const SMatrix& a, const SMatrix& b);

struct PassivityReport {
  bool passive = false;
  double max_singular_value = 0.0;
};

PassivityReport check_passivity(const SMatrix& s, double tol = Tolerances{}.passivity);

// Precomputed index layout for a fixed set of block port lists and wiring, so
// repeated reductions (one per sweep point) skip the name lookups. Global ports
// are laid out in sorted PortId order, which makes the result independent of
// block order and of the orientation of internal pairs.
class NetworkPlan {
 public:
  NetworkPlan(std::span<const std::vector<PortId>> block_ports, const ConnectionMap& wiring);

  std::size_t block_count() const { return block_offsets_.size(); }
  const std::vector<PortId>& external() const { return external_; }

  // blocks[k] must have exactly the ports given for block k at construction.
  SMatrix reduce(std::span<const SMatrix> blocks) const;
  // Same, returning only the external matrix entries.
  CMatrix reduce_entries(std::span<const SMatrix> blocks) const;
  // Entry-only variant for hot loops; blocks[k] must be sized like block k.
  CMatrix reduce_entries(std::span<const CMatrix* const> blocks) const;

 private:
  // For block k, global index of each of its local ports.
  std::vector<std::vector<std::size_t>> block_offsets_;
  std::vector<std::size_t> ext_index_;
  std::vector<std::size_t> int_index_;
  std::vector<std::size_t> partner_;  // partner_[i]: position in int_index_ linked to i
  std::vector<PortId> external_;
  std::size_t total_ = 0;
};

// Eliminates every internal port. Throws WiringError for dangling or unknown
// ports and ResonantSingularityError for a singular internal system.
SMatrix reduce_network(std::span<const SMatrix> blocks, const ConnectionMap& wiring);

}  // namespace eosim
