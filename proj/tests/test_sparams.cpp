#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "eosim/error.hpp"
#include "eosim/sparams.hpp"
#include "random_circuits.hpp"

using namespace eosim;

namespace {

const cplx I{0, 1};

SMatrix two_port(const std::string& inst, cplx s11, cplx s12, cplx s21, cplx s22) {
  CMatrix m(2, 2);
  m << s11, s12, s21, s22;
  return SMatrix({{inst, "p1"}, {inst, "p2"}}, m);
}

SMatrix mirror(const std::string& inst, double R, double T) {
  return two_port(inst, std::sqrt(R), -I * std::sqrt(T), -I * std::sqrt(T), std::sqrt(R));
}

double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(SMatrix, RejectsMalformedConstruction) {
  EXPECT_THROW(SMatrix({{"a", "1"}}, CMatrix::Zero(2, 2)), ParameterError);
  EXPECT_THROW(SMatrix({{"a", "1"}, {"a", "2"}}, CMatrix::Zero(2, 3)), ParameterError);
  EXPECT_THROW(SMatrix({{"a", "1"}, {"a", "1"}}, CMatrix::Zero(2, 2)), ParameterError);
}

TEST(SMatrix, LookupByPortName) {
  const SMatrix s = two_port("x", 1, 2, 3, 4);
  EXPECT_EQ(s.at({"x", "p2"}, {"x", "p1"}), cplx(3));
  EXPECT_THROW(s.at({"x", "nope"}, {"x", "p1"}), ParameterError);
  EXPECT_EQ(s.renamed("y").ports()[1], (PortId{"y", "p2"}));
}

TEST(Cascade, IdentityLeavesMatrixUnchanged) {
  const SMatrix id = two_port("id", 0, 1, 1, 0);
  const SMatrix x = two_port("x", 0.1 + 0.2 * I, 0.3, 0.3, -0.4 * I);
  const SMatrix left = cascade_two_port(id, x);
  const SMatrix right = cascade_two_port(x, id);
  EXPECT_LT(max_diff(left.entries(), x.entries()), 1e-15);
  EXPECT_LT(max_diff(right.entries(), x.entries()), 1e-15);
}

TEST(Cascade, LosslessFabryPerotTransmitsFullyAtResonance) {
  // r real, t = -i sqrt(T): the round trip r^2 e^{0} is in phase with the
  // direct pass, the resonance condition for zero spacer phase.
  const SMatrix s = cascade_two_port(mirror("m1", 0.3, 0.7), mirror("m2", 0.3, 0.7));
  EXPECT_NEAR(std::norm(s.entries()(1, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::norm(s.entries()(0, 0)), 0.0, 1e-14);
}

TEST(Cascade, MatchesExplicitMultipleReflectionSeries) {
  const SMatrix a = mirror("a", 0.30, 0.5);
  const SMatrix b = mirror("b", 0.30, 0.5);
  const cplx a11 = a.entries()(0, 0), a12 = a.entries()(0, 1), a21 = a.entries()(1, 0),
             a22 = a.entries()(1, 1);
  const cplx b11 = b.entries()(0, 0), b12 = b.entries()(0, 1), b21 = b.entries()(1, 0),
             b22 = b.entries()(1, 1);
  // Sum the bounce series term by term until it stops changing.
  cplx t = 0, r = a11, bounce = 1;
  for (int k = 0; k < 400; ++k) {
    t += b21 * bounce * a21;
    r += a12 * b11 * bounce * a21;
    bounce *= a22 * b11;
  }
  const SMatrix s = cascade_two_port(a, b);
  EXPECT_NEAR(std::abs(s.entries()(1, 0) - t), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.entries()(0, 0) - r), 0.0, 1e-12);
  EXPECT_NEAR(std::norm(s.entries()(1, 0)), std::norm(t), 1e-12);
  // Closed form for equal real mirrors at zero phase: T^2 / (1 - R)^2 with R the power reflectance.
  EXPECT_NEAR(std::norm(s.entries()(1, 0)), 0.25 / (0.7 * 0.7), 1e-12);
}

TEST(Cascade, RejectsDivergentJunctionAndWrongSize) {
  const SMatrix full = two_port("a", 0, 0, 0, 1.0);
  const SMatrix full_b = two_port("b", -1.0, 0, 0, 0);
  EXPECT_THROW(cascade_two_port(full, full_b), DivergentFeedbackError);
  const SMatrix three({{"c", "1"}, {"c", "2"}, {"c", "3"}}, CMatrix::Zero(3, 3));
  EXPECT_THROW(cascade_two_port(three, full), ParameterError);
}

TEST(Passivity, ReportsLargestSingularValue) {
  const auto id = check_passivity(SMatrix::identity({{"a", "1"}, {"a", "2"}}));
  EXPECT_TRUE(id.passive);
  EXPECT_NEAR(id.max_singular_value, 1.0, 1e-15);

  const double h = 1 / std::sqrt(2.0);
  CMatrix bs(2, 2);
  bs << h, I * h, I * h, h;
  const auto split = check_passivity(SMatrix({{"b", "1"}, {"b", "2"}}, bs));
  EXPECT_TRUE(split.passive);
  EXPECT_NEAR(split.max_singular_value, 1.0, 1e-15);

  const auto over = check_passivity(SMatrix({{"b", "1"}, {"b", "2"}}, 1.01 * bs));
  EXPECT_FALSE(over.passive);
  EXPECT_NEAR(over.max_singular_value, 1.01, 1e-14);
}

TEST(ReduceNetwork, SingleBlockWithoutLinksIsUnchanged) {
  const SMatrix x = two_port("x", 0.1, 0.5 * I, 0.5 * I, 0.2);
  const SMatrix r = reduce_network(std::vector<SMatrix>{x}, ConnectionMap({}, x.ports()));
  EXPECT_EQ(r.entries(), x.entries());
  EXPECT_EQ(r.ports(), x.ports());
}

TEST(ReduceNetwork, ExternalOrderFollowsConnectionMap) {
  const SMatrix x = two_port("x", 0.1, 0.5 * I, 0.5 * I, 0.2);
  const SMatrix r =
      reduce_network(std::vector<SMatrix>{x}, ConnectionMap({}, {{"x", "p2"}, {"x", "p1"}}));
  EXPECT_EQ(r.entries()(0, 0), cplx(0.2));
  EXPECT_EQ(r.entries()(1, 1), cplx(0.1));
}

TEST(ReduceNetwork, ChainOfFiveEqualsIteratedStar) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SMatrix> blocks;
    for (int k = 0; k < 5; ++k) blocks.push_back(testing_support::random_passive_two_port(rng, "b" + std::to_string(k)));
    SMatrix folded = blocks[0];
    for (int k = 1; k < 5; ++k) folded = cascade_two_port(folded, blocks[k]);
    std::vector<std::pair<PortId, PortId>> pairs;
    for (int k = 0; k + 1 < 5; ++k) {
      pairs.push_back({{"b" + std::to_string(k), "p2"}, {"b" + std::to_string(k + 1), "p1"}});
    }
    const SMatrix r = reduce_network(blocks, ConnectionMap(pairs, {{"b0", "p1"}, {"b4", "p2"}}));
    EXPECT_LT(max_diff(r.entries(), folded.entries()), 1e-12);
  }
}

TEST(ReduceNetwork, IndependentOfBlockOrderAndPairOrientation) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = testing_support::random_passive_circuit(rng, 6);
    const SMatrix ref = reduce_network(c.blocks, c.wiring);
    auto blocks = c.blocks;
    std::shuffle(blocks.begin(), blocks.end(), rng);
    auto pairs = c.wiring.pairs();
    for (auto& p : pairs) {
      if (rng() & 1) std::swap(p.first, p.second);
    }
    std::shuffle(pairs.begin(), pairs.end(), rng);
    const SMatrix other = reduce_network(blocks, ConnectionMap(pairs, c.wiring.external()));
    EXPECT_EQ(max_diff(ref.entries(), other.entries()), 0.0);
  }
}

TEST(ReduceNetwork, WiringErrors) {
  const SMatrix x = two_port("x", 0, 1, 1, 0);
  const SMatrix y = two_port("y", 0, 1, 1, 0);
  const std::vector<SMatrix> blocks{x, y};
  // y.p2 is neither linked nor external
  EXPECT_THROW(reduce_network(blocks, ConnectionMap({{{"x", "p2"}, {"y", "p1"}}}, {{"x", "p1"}})),
               WiringError);
  EXPECT_THROW(reduce_network(blocks, ConnectionMap({{{"x", "p2"}, {"z", "p1"}}}, {{"x", "p1"}})),
               WiringError);
  EXPECT_THROW(reduce_network(blocks, ConnectionMap({}, {})), WiringError);
  EXPECT_THROW(ConnectionMap({{{"x", "p2"}, {"y", "p1"}}}, {{"x", "p2"}}), WiringError);
  EXPECT_THROW(ConnectionMap({{{"x", "p2"}, {"x", "p2"}}}, {}), WiringError);
  EXPECT_THROW(reduce_network(std::vector<SMatrix>{x, x}, ConnectionMap({}, {{"x", "p1"}})),
               WiringError);
}

TEST(ReduceNetwork, LosslessUnitGainLoopIsSingular) {
  const SMatrix loop = two_port("ring", 0, 1, 1, 0);
  const SMatrix term({{"t", "p"}}, CMatrix::Zero(1, 1));
  EXPECT_THROW(reduce_network(std::vector<SMatrix>{loop, term},
                              ConnectionMap({{{"ring", "p1"}, {"ring", "p2"}}}, {{"t", "p"}})),
               ResonantSingularityError);
}

TEST(ReduceNetwork, ConservesEnergyOnRandomPassiveCircuits) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = testing_support::random_passive_circuit(rng, 2 + static_cast<int>(rng() % 6));
    const SMatrix r = reduce_network(c.blocks, c.wiring);
    for (Eigen::Index j = 0; j < r.entries().cols(); ++j) {
      EXPECT_LE(r.entries().col(j).squaredNorm(), 1 + 1e-9);
    }
    EXPECT_TRUE(check_passivity(r).passive);
    EXPECT_TRUE(r.is_reciprocal(1e-12));
  }
}
