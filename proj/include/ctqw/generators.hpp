#pragma once

#include <optional>

#include <Eigen/Dense>

#include "ctqw/lattice.hpp"

namespace ctqw {

struct SearchParams {
  double gamma = 1.0;
  double beta = 0.0;
  std::optional<std::size_t> target;
};

/// Throws InvalidArgument / TargetOutOfRange when `p` is not usable on a graph of size n.
void validate(const SearchParams& p, std::size_t n);

/// -gamma * A - beta * |w><w|
Eigen::MatrixXd quantum_hamiltonian(const Graph& g, const SearchParams& p);

/// Sink generator L_c with exp(-gamma t L_c) column-stochastic: off-diagonals
/// -A[j][k] except in the target column, which is zero; diagonal balances
/// each column to zero.
Eigen::MatrixXd classical_generator(const Graph& g, std::optional<std::size_t> target);

}  // namespace ctqw
