#include "ctqw/generators.hpp"

#include <cmath>
#include <string>

#include "ctqw/error.hpp"

namespace ctqw {

namespace {

void check_target(std::optional<std::size_t> target, std::size_t n) {
  if (target && *target >= n)
    throw Error(ErrorCode::TargetOutOfRange,
                "target " + std::to_string(*target) + " outside [0, " + std::to_string(n) + ")");
}

}  // namespace

void validate(const SearchParams& p, std::size_t n) {
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
    throw Error(ErrorCode::InvalidArgument, "gamma must be positive and finite");
  if (!(p.beta >= 0.0) || !std::isfinite(p.beta))
    throw Error(ErrorCode::InvalidArgument, "beta must be non-negative and finite");
  check_target(p.target, n);
}

Eigen::MatrixXd quantum_hamiltonian(const Graph& g, const SearchParams& p) {
  validate(p, g.size());
  Eigen::MatrixXd h = -p.gamma * g.adjacency();
  if (p.target) {
    const auto w = static_cast<Eigen::Index>(*p.target);
    h(w, w) -= p.beta;
  }
  return h;
}

Eigen::MatrixXd classical_generator(const Graph& g, std::optional<std::size_t> target) {
  check_target(target, g.size());
  const auto n = static_cast<Eigen::Index>(g.size());
  const auto& a = g.adjacency();
  Eigen::MatrixXd lc = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (target && k == static_cast<Eigen::Index>(*target)) continue;
    double column_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == k) continue;
      lc(j, k) = -a(j, k);
      column_sum += a(j, k);
    }
    lc(k, k) = column_sum;
  }
  return lc;
}

}  // namespace ctqw
