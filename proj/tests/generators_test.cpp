#include "ctqw/generators.hpp"

#include <gtest/gtest.h>

#include "ctqw/error.hpp"

using namespace ctqw;

namespace {

Graph pair_graph() { return build_from_coords({{0, 0}, {1, 0}}); }

}  // namespace

TEST(QuantumHamiltonian, TwoSites) {
  Eigen::MatrixXd expected(2, 2);
  expected << -2, -1, -1, 0;
  EXPECT_EQ(quantum_hamiltonian(pair_graph(), {1.0, 2.0, 0}), expected);
}

TEST(QuantumHamiltonian, ZeroDetuningIsScaledAdjacency) {
  const auto g = build_paper31();
  EXPECT_EQ(quantum_hamiltonian(g, {0.7, 0.0, 3}), -0.7 * g.adjacency());
  EXPECT_EQ(quantum_hamiltonian(g, {0.7, 5.0, std::nullopt}), -0.7 * g.adjacency());
}

TEST(QuantumHamiltonian, Paper31PresetAElementwise) {
  const auto g = build_paper31();
  const std::size_t w = *resolve_target(g, TargetSpec::center());
  const auto h = quantum_hamiltonian(g, {0.060, 0.25, w});
  for (std::size_t r = 0; r < g.size(); ++r)
    for (std::size_t c = 0; c < g.size(); ++c) {
      double expected = g.adjacency()(r, c) == 1.0 ? -0.060 : 0.0;
      if (r == w && c == w) expected = -0.25;
      EXPECT_EQ(h(r, c), expected);
      EXPECT_EQ(h(r, c), h(c, r));
    }
}

TEST(QuantumHamiltonian, ScaleCovariance) {
  const auto g = build_hex_patch(2);
  const auto base = quantum_hamiltonian(g, {1.3, 4.1, 4});
  for (double c : {0.1, 2.0, 10.0})
    EXPECT_LE((quantum_hamiltonian(g, {c * 1.3, c * 4.1, 4}) - c * base).cwiseAbs().maxCoeff(),
              1e-14);
}

TEST(QuantumHamiltonian, RejectsBadParameters) {
  const auto g = pair_graph();
  EXPECT_THROW(quantum_hamiltonian(g, {1.0, 1.0, 2}), Error);
  try {
    quantum_hamiltonian(g, {1.0, 1.0, 2});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TargetOutOfRange);
  }
  EXPECT_THROW(quantum_hamiltonian(g, {0.0, 1.0, 0}), Error);
  EXPECT_THROW(quantum_hamiltonian(g, {1.0, -1.0, 0}), Error);
}

TEST(ClassicalGenerator, TwoSitesWithSink) {
  Eigen::MatrixXd expected(2, 2);
  expected << 1, 0, -1, 0;
  EXPECT_EQ(classical_generator(pair_graph(), 1), expected);
}

TEST(ClassicalGenerator, NoTargetIsDegreeMinusAdjacency) {
  const auto g = build_hex_patch(2);
  const Eigen::MatrixXd d = g.adjacency().colwise().sum().asDiagonal();
  const auto lc = classical_generator(g, std::nullopt);
  EXPECT_EQ(lc, d - g.adjacency());
  EXPECT_LE(lc.colwise().sum().cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ClassicalGenerator, Paper31CenterSink) {
  const auto g = build_paper31();
  const std::size_t w = *resolve_target(g, TargetSpec::center());
  const auto lc = classical_generator(g, w);
  const auto n = static_cast<Eigen::Index>(g.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    EXPECT_EQ(lc.col(k).sum(), 0.0);  // integers, so exact
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == k) continue;
      EXPECT_LE(lc(j, k), 0.0);  // Metzler: -L_c off-diagonals non-negative
      if (k != static_cast<Eigen::Index>(w)) EXPECT_EQ(lc(j, k), -g.adjacency()(j, k));
    }
  }
  EXPECT_TRUE(lc.col(static_cast<Eigen::Index>(w)).isZero(0.0));
}

TEST(ClassicalGenerator, RejectsOutOfRangeTarget) {
  try {
    classical_generator(pair_graph(), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TargetOutOfRange);
  }
}
