#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ctqw/lattice.hpp"

namespace ctqw {

using ComplexVector = Eigen::VectorXcd;

/// Full spectral decomposition m = V diag(values) V^T, values ascending.
struct Eigensystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns are eigenvectors
};

/// Cyclic Jacobi eigensolver for real symmetric matrices.
Eigensystem eig_symmetric(const Eigen::MatrixXd& m);

/// e^{-iHt} for a fixed real symmetric H, factorized once and reused for
/// any number of times t. Safe to share across threads.
class QuantumPropagator {
 public:
  explicit QuantumPropagator(const Eigen::MatrixXd& h);

  const Eigensystem& eigensystem() const { return eig_; }

  ComplexVector evolve(const ComplexVector& psi0, double t) const;

  /// <site| e^{-iHt} |psi0> without forming the full state. `coefficients`
  /// must be V^T psi0 as returned by `project`.
  std::complex<double> amplitude(std::size_t site, const ComplexVector& coefficients,
                                 double t) const;
  ComplexVector project(const ComplexVector& psi0) const;

 private:
  Eigensystem eig_;
};

ComplexVector evolve_quantum(const Eigen::MatrixXd& h, const ComplexVector& psi0, double t);

/// Matrix exponential by scaling and squaring with the degree-13 diagonal
/// Padé approximant.
Eigen::MatrixXd expm(const Eigen::MatrixXd& m);

/// expm(-gamma t L_c) p0, with round-off negatives clamped to zero.
Eigen::VectorXd evolve_classical(const Eigen::MatrixXd& lc, const Eigen::VectorXd& p0,
                                 double gamma, double t);

/// Clamps entries in [-1e-12, 0) to zero; more negative entries throw
/// NegativeProbability.
void clamp_probabilities(Eigen::VectorXd& p);

/// Spectral route for the absorbing walk generated by classical_generator().
///
/// Restricted to the non-target sites the sink generator is the symmetric
/// block (D - A)|_{V \ w}, so its evolution diagonalizes with eig_symmetric
/// and the target picks up whatever mass leaves the other sites. Without a
/// target the full D - A is used.
class AbsorbingWalk {
 public:
  AbsorbingWalk(const Graph& g, std::optional<std::size_t> target, const Eigen::VectorXd& p0);

  /// Probability at the sink after dimensionless time gamma*t.
  double target_probability(double gamma_t) const;

  /// Full site distribution after dimensionless time gamma*t.
  Eigen::VectorXd distribution(double gamma_t) const;

 private:
  std::optional<std::size_t> target_;
  std::vector<Eigen::Index> free_sites_;
  Eigensystem eig_;
  Eigen::VectorXd coefficients_;  // U^T p0 restricted to free sites
  Eigen::VectorXd column_sums_;   // 1^T U
  double total_mass_ = 0.0;
  double initial_target_mass_ = 0.0;
};

/// Classical RK4 integration of v' = m v on [0, t]. Test oracle; requires
/// steps >= 1000 (||m||_1 t + 1).
Eigen::VectorXd ode_oracle(const Eigen::MatrixXd& m, const Eigen::VectorXd& v0, double t,
                           long steps);
Eigen::VectorXcd ode_oracle(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& v0, double t,
                            long steps);

}  // namespace ctqw
