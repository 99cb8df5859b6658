#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctqw/generators.hpp"
#include "ctqw/lattice.hpp"
#include "ctqw/propagator.hpp"

namespace ctqw {

/// Exact quantum and classical target curves for one (graph, target, beta/gamma)
/// triple with gamma fixed to 1. Evaluates at any dimensionless time.
class SearchModel {
 public:
  SearchModel(const Graph& g, std::size_t target, double beta_over_gamma);

  std::size_t size() const { return n_; }
  std::size_t target() const { return target_; }
  double beta_over_gamma() const { return beta_over_gamma_; }

  double quantum_target(double gamma_t) const;
  double classical_target(double gamma_t) const;
  /// p_Q / p_C; throws DivisionDomain when p_C <= 1e-300.
  double ratio(double gamma_t) const;
  Eigen::VectorXd quantum_sites(double gamma_t) const;

 private:
  std::size_t n_;
  std::size_t target_;
  double beta_over_gamma_;
  QuantumPropagator quantum_;
  ComplexVector coefficients_;
  AbsorbingWalk classical_;
};

struct EvolutionSeries {
  std::vector<double> gamma_t_grid;
  Eigen::MatrixXd quantum_site_probs;  // one row per grid time
  std::vector<double> classical_target_prob;
  std::size_t target = 0;
  SearchParams params;
  std::string graph_id;
  std::shared_ptr<const SearchModel> model;

  std::vector<double> quantum_target_prob() const;
};

struct RatioSeries {
  std::vector<double> gamma_t_grid;
  std::vector<double> ratio;
  std::shared_ptr<const SearchModel> model;  // enables off-grid refinement
};

struct OptimalTime {
  double t_opt = 0.0;
  double r_opt = 0.0;
};

struct ScalingRecord {
  std::size_t n = 0;
  int layers = 0;
  TargetSpec target;
  double beta_over_gamma = 0.0;
  double t_opt = 0.0;
  double r_opt = 0.0;
  double pq_opt = 0.0;
  double pc_opt = 0.0;
};

struct ScalingOptions {
  double window_factor = 2.0;  // search gamma*t in [0, window_factor * n / 6]
  double step = 1e-3;
  bool refine = true;
  unsigned threads = 1;
};

ComplexVector uniform_state(std::size_t n);

/// {0, step, 2 step, ...} up to t_max inclusive (within 1e-9 of a step).
std::vector<double> make_grid(double t_max, double step);

EvolutionSeries run_search(const Graph& g, const TargetSpec& spec, double beta_over_gamma,
                           std::span<const double> gamma_t_grid);

RatioSeries ratio_series(const EvolutionSeries& s);

/// Grid argmax (first maximum wins) with optional golden-section refinement
/// on the bracketing interval.
OptimalTime optimal_time(const RatioSeries& r, bool refine);

/// p_w^Q on the Cartesian grid; row = beta/gamma, column = gamma*t.
Eigen::MatrixXd beta_time_heatmap(const Graph& g, const TargetSpec& spec,
                                  std::span<const double> beta_grid,
                                  std::span<const double> gamma_t_grid, unsigned threads = 1);

ScalingRecord optimal_record(const Graph& g, int layers, const TargetSpec& spec,
                             double beta_over_gamma, const ScalingOptions& options);

/// Hexagonal patches x targets. Pairs whose target site does not exist in
/// the patch (2N on the 7-site patch) are skipped.
std::vector<ScalingRecord> scaling_study(std::span<const int> layer_range,
                                         std::span<const TargetSpec> targets,
                                         double beta_over_gamma,
                                         const ScalingOptions& options = {});

/// One scaling_study per beta value, concatenated in beta_grid order.
std::vector<ScalingRecord> beta_size_surface(std::span<const int> layer_range,
                                             std::span<const TargetSpec> targets,
                                             std::span<const double> beta_grid,
                                             const ScalingOptions& options = {});

}  // namespace ctqw
