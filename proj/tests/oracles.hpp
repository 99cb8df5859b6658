#pragma once

// Test-only reference computations, independent of the library code paths
// they are used to check.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ctqw/lattice.hpp"

namespace ctqw::oracle {

// Neighbour relation from embedded Euclidean distance only.
inline Eigen::MatrixXd brute_force_adjacency(const std::vector<LatticeCoord>& coords) {
  const auto n = static_cast<Eigen::Index>(coords.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u)
    for (Eigen::Index v = 0; v < n; ++v) {
      if (u == v) continue;
      const double x = (coords[u].i - coords[v].i) - 0.5 * (coords[u].j - coords[v].j);
      const double y = std::sqrt(3.0) / 2.0 * (coords[u].j - coords[v].j);
      if (std::abs(std::hypot(x, y) - 1.0) < 1e-9) a(u, v) = 1.0;
    }
  return a;
}

inline double distance(LatticeCoord u, LatticeCoord v) {
  const double x = (u.i - v.i) - 0.5 * (u.j - v.j);
  const double y = std::sqrt(3.0) / 2.0 * (u.j - v.j);
  return std::hypot(x, y);
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = r; c < n; ++c) m(r, c) = m(c, r) = dist(rng);
  return m;
}

inline Eigen::VectorXcd random_state(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> dist;
  Eigen::VectorXcd v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = {dist(rng), dist(rng)};
  return v / v.norm();
}

// Random subset of the 37-site patch with `keep` sites.
inline std::vector<LatticeCoord> random_subset(std::mt19937_64& rng, std::size_t keep) {
  std::vector<LatticeCoord> all;
  for (int i = -3; i <= 3; ++i)
    for (int j = -3; j <= 3; ++j)
      if (std::max({std::abs(i), std::abs(j), std::abs(i - j)}) <= 3) all.push_back({i, j});
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(keep);
  return all;
}

}  // namespace ctqw::oracle
