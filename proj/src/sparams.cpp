#include "eosim/sparams.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "eosim/error.hpp"

namespace eosim {

SMatrix::SMatrix(std::vector<PortId> ports, CMatrix entries)
    : ports_(std::move(ports)), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw ParameterError("S-matrix must be square");
  }
  if (static_cast<std::size_t>(entries_.rows()) != ports_.size()) {
    throw ParameterError("S-matrix dimension " + std::to_string(entries_.rows()) +
                         " does not match port count " + std::to_string(ports_.size()));
  }
  std::set<PortId> seen(ports_.begin(), ports_.end());
  if (seen.size() != ports_.size()) {
    throw ParameterError("S-matrix has duplicate port names");
  }
}

SMatrix SMatrix::identity(std::vector<PortId> ports) {
  const auto n = static_cast<Eigen::Index>(ports.size());
  return SMatrix(std::move(ports), CMatrix::Identity(n, n));
}

std::size_t SMatrix::index_of(const PortId& p) const {
  auto it = std::find(ports_.begin(), ports_.end(), p);
  if (it == ports_.end()) {
    throw ParameterError("no port " + p.str() + " in S-matrix");
  }
  return static_cast<std::size_t>(it - ports_.begin());
}

cplx SMatrix::at(const PortId& out, const PortId& in) const {
  return entries_(static_cast<Eigen::Index>(index_of(out)),
                  static_cast<Eigen::Index>(index_of(in)));
}

double SMatrix::max_singular_value() const {
  if (entries_.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(entries_);
  return svd.singularValues()(0);
}

bool SMatrix::is_reciprocal(double tol) const {
  return (entries_ - entries_.transpose()).cwiseAbs().maxCoeff() <= tol;
}

double SMatrix::unitarity_defect() const {
  const auto n = entries_.rows();
  return (entries_.adjoint() * entries_ - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

SMatrix SMatrix::renamed(const std::string& instance) const {
  std::vector<PortId> p = ports_;
  for (auto& id : p) id.instance = instance;
  return SMatrix(std::move(p), entries_);
}

ConnectionMap::ConnectionMap(std::vector<std::pair<PortId, PortId>> pairs,
                             std::vector<PortId> external)
    : external_(std::move(external)) {
  std::set<PortId> used;
  auto claim = [&](const PortId& p) {
    if (!used.insert(p).second) {
      throw WiringError("port " + p.str() + " used more than once");
    }
  };
  pairs_.reserve(pairs.size());
  for (auto& [a, b] : pairs) {
    if (a == b) throw WiringError("port " + a.str() + " connected to itself");
    claim(a);
    claim(b);
    if (b < a) std::swap(a, b);
    pairs_.emplace_back(std::move(a), std::move(b));
  }
  for (const auto& e : external_) claim(e);
}

SMatrix cascade_two_port(const SMatrix& a, const SMatrix& b) {
  if (a.size() != 2 || b.size() != 2) {
    throw ParameterError("cascade_two_port requires two 2-port matrices");
  }
  const CMatrix& A = a.entries();
  const CMatrix& B = b.entries();
  const cplx loop = A(1, 1) * B(0, 0);
  if (std::abs(loop) >= 1.0) {
    throw DivergentFeedbackError("multiple-reflection series diverges: |r_a r_b| = " +
                                 std::to_string(std::abs(loop)));
  }
  const cplx g = 1.0 / (1.0 - loop);
  CMatrix S(2, 2);
  S(0, 0) = A(0, 0) + A(0, 1) * B(0, 0) * A(1, 0) * g;
  S(0, 1) = A(0, 1) * B(0, 1) * g;
  S(1, 0) = B(1, 0) * A(1, 0) * g;
  S(1, 1) = B(1, 1) + B(1, 0) * A(1, 1) * B(0, 1) * g;
  return SMatrix({a.ports()[0], b.ports()[1]}, std::move(S));
}

PassivityReport check_passivity(const SMatrix& s, double tol) {
  const double sv = s.max_singular_value();
  return {sv <= 1.0 + tol, sv};
}

NetworkPlan::NetworkPlan(std::span<const std::vector<PortId>> block_ports,
                         const ConnectionMap& wiring)
    : external_(wiring.external()) {
  if (external_.empty()) throw WiringError("network has no external ports");

  std::map<PortId, std::size_t> global;  // sorted: canonical layout
  for (const auto& ports : block_ports) {
    for (const auto& p : ports) {
      if (!global.emplace(p, 0).second) {
        throw WiringError("port " + p.str() + " appears in more than one block");
      }
    }
  }
  std::size_t next = 0;
  for (auto& [id, idx] : global) idx = next++;
  total_ = next;

  block_offsets_.reserve(block_ports.size());
  for (const auto& ports : block_ports) {
    std::vector<std::size_t> idx;
    idx.reserve(ports.size());
    for (const auto& p : ports) idx.push_back(global.at(p));
    block_offsets_.push_back(std::move(idx));
  }

  auto lookup = [&](const PortId& p) {
    auto it = global.find(p);
    if (it == global.end()) throw WiringError("unknown port " + p.str());
    return it->second;
  };

  std::vector<long> link(total_, -1);
  std::vector<bool> is_ext(total_, false);
  for (const auto& [a, b] : wiring.pairs()) {
    const auto ia = lookup(a);
    const auto ib = lookup(b);
    link[ia] = static_cast<long>(ib);
    link[ib] = static_cast<long>(ia);
  }
  for (const auto& e : external_) {
    const auto ie = lookup(e);
    is_ext[ie] = true;
    ext_index_.push_back(ie);
  }
  std::vector<long> pos(total_, -1);
  for (const auto& [id, g] : global) {
    if (is_ext[g]) continue;
    if (link[g] < 0) throw WiringError("dangling port " + id.str());
    pos[g] = static_cast<long>(int_index_.size());
    int_index_.push_back(g);
  }
  partner_.resize(int_index_.size());
  for (std::size_t k = 0; k < int_index_.size(); ++k) {
    partner_[k] = static_cast<std::size_t>(pos[static_cast<std::size_t>(link[int_index_[k]])]);
  }
}

CMatrix NetworkPlan::reduce_entries(std::span<const SMatrix> blocks) const {
  std::vector<const CMatrix*> ptrs;
  ptrs.reserve(blocks.size());
  for (const auto& b : blocks) ptrs.push_back(&b.entries());
  return reduce_entries(std::span<const CMatrix* const>(ptrs));
}

CMatrix NetworkPlan::reduce_entries(std::span<const CMatrix* const> blocks) const {
  if (blocks.size() != block_offsets_.size()) {
    throw ParameterError("block count does not match network plan");
  }
  const auto n = static_cast<Eigen::Index>(total_);
  CMatrix G = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& idx = block_offsets_[k];
    const CMatrix& B = *blocks[k];
    if (static_cast<std::size_t>(B.rows()) != idx.size() || B.rows() != B.cols()) {
      throw ParameterError("block " + std::to_string(k) + " has wrong port count");
    }
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (std::size_t c = 0; c < idx.size(); ++c) {
        G(static_cast<Eigen::Index>(idx[r]), static_cast<Eigen::Index>(idx[c])) =
            B(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  const auto ne = static_cast<Eigen::Index>(ext_index_.size());
  const auto ni = static_cast<Eigen::Index>(int_index_.size());
  CMatrix See = G(ext_index_, ext_index_);
  if (ni == 0) return See;

  // b_i = S_ie a_e + S_ii C b_i ;  b_e = S_ee a_e + S_ei C b_i
  // where C maps outgoing internal waves onto the incoming wave of the partner.
  CMatrix M = CMatrix::Identity(ni, ni);
  CMatrix SeiC(ne, ni);
  for (Eigen::Index j = 0; j < ni; ++j) {
    const auto pj = static_cast<Eigen::Index>(int_index_[partner_[static_cast<std::size_t>(j)]]);
    for (Eigen::Index i = 0; i < ni; ++i) {
      M(i, j) -= G(static_cast<Eigen::Index>(int_index_[static_cast<std::size_t>(i)]), pj);
    }
    for (Eigen::Index e = 0; e < ne; ++e) {
      SeiC(e, j) = G(static_cast<Eigen::Index>(ext_index_[static_cast<std::size_t>(e)]), pj);
    }
  }
  CMatrix Sie = G(int_index_, ext_index_);

  Eigen::PartialPivLU<CMatrix> lu(M);
  const double rc = lu.rcond();
  if (!(rc > 1e-13)) {
    throw ResonantSingularityError("internal network is singular (rcond " + std::to_string(rc) +
                                   "): lossless loop at unit round-trip gain");
  }
  return See + SeiC * lu.solve(Sie);
}

SMatrix NetworkPlan::reduce(std::span<const SMatrix> blocks) const {
  return SMatrix(external_, reduce_entries(blocks));
}

SMatrix reduce_network(std::span<const SMatrix> blocks, const ConnectionMap& wiring) {
  std::vector<std::vector<PortId>> ports;
  ports.reserve(blocks.size());
  for (const auto& b : blocks) ports.push_back(b.ports());
  return NetworkPlan(ports, wiring).reduce(blocks);
}

}  // namespace eosim
