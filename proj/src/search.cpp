#include "ctqw/search.hpp"

#include <cmath>
#include <tuple>

#include "ctqw/error.hpp"
#include "parallel.hpp"

namespace ctqw {

namespace {

Eigen::VectorXd uniform_distribution(std::size_t n) {
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
}

Eigen::MatrixXd search_hamiltonian(const Graph& g, std::size_t target, double beta_over_gamma) {
  return quantum_hamiltonian(g, SearchParams{1.0, beta_over_gamma, target});
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "time grid is empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0.0) || !std::isfinite(grid[k]))
      throw Error(ErrorCode::InvalidArgument, "time grid must be non-negative and finite");
    if (k > 0 && !(grid[k] > grid[k - 1]))
      throw Error(ErrorCode::InvalidArgument, "time grid must be strictly ascending");
  }
}

std::size_t require_target(const Graph& g, const TargetSpec& spec) {
  const auto w = resolve_target(g, spec);
  if (!w) throw Error(ErrorCode::InvalidArgument, "search needs a target");
  return *w;
}

}  // namespace

SearchModel::SearchModel(const Graph& g, std::size_t target, double beta_over_gamma)
    : n_(g.size()),
      target_(target),
      beta_over_gamma_(beta_over_gamma),
      quantum_(search_hamiltonian(g, target, beta_over_gamma)),
      coefficients_(quantum_.project(uniform_state(g.size()))),
      classical_(g, target, uniform_distribution(g.size())) {}

double SearchModel::quantum_target(double gamma_t) const {
  return std::norm(quantum_.amplitude(target_, coefficients_, gamma_t));
}

double SearchModel::classical_target(double gamma_t) const {
  return classical_.target_probability(gamma_t);
}

double SearchModel::ratio(double gamma_t) const {
  const double pc = classical_target(gamma_t);
  if (!(pc > 1e-300))
    throw Error(ErrorCode::DivisionDomain,
                "classical target probability vanishes at gamma*t = " + std::to_string(gamma_t));
  return quantum_target(gamma_t) / pc;
}

Eigen::VectorXd SearchModel::quantum_sites(double gamma_t) const {
  return quantum_.evolve(uniform_state(n_), gamma_t).cwiseAbs2();
}

std::vector<double> EvolutionSeries::quantum_target_prob() const {
  std::vector<double> out(gamma_t_grid.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = quantum_site_probs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(target));
  return out;
}

ComplexVector uniform_state(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "uniform_state needs n >= 1");
  return ComplexVector::Constant(static_cast<Eigen::Index>(n),
                                 1.0 / std::sqrt(static_cast<double>(n)));
}

std::vector<double> make_grid(double t_max, double step) {
  if (!(step > 0.0) || !std::isfinite(step) || !(t_max >= 0.0) || !std::isfinite(t_max))
    throw Error(ErrorCode::InvalidArgument, "grid needs t_max >= 0 and step > 0");
  const auto count = static_cast<std::size_t>(std::floor(t_max / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = static_cast<double>(k) * step;
  return grid;
}

EvolutionSeries run_search(const Graph& g, const TargetSpec& spec, double beta_over_gamma,
                           std::span<const double> gamma_t_grid) {
  check_grid(gamma_t_grid);
  const std::size_t w = require_target(g, spec);
  auto model = std::make_shared<const SearchModel>(g, w, beta_over_gamma);

  EvolutionSeries s;
  s.gamma_t_grid.assign(gamma_t_grid.begin(), gamma_t_grid.end());
  s.quantum_site_probs.resize(static_cast<Eigen::Index>(gamma_t_grid.size()),
                              static_cast<Eigen::Index>(g.size()));
  s.classical_target_prob.resize(gamma_t_grid.size());
  for (std::size_t k = 0; k < gamma_t_grid.size(); ++k) {
    s.quantum_site_probs.row(static_cast<Eigen::Index>(k)) =
        model->quantum_sites(gamma_t_grid[k]).transpose();
    s.classical_target_prob[k] = model->classical_target(gamma_t_grid[k]);
  }
  s.target = w;
  s.params = SearchParams{1.0, beta_over_gamma, w};
  s.graph_id = g.id();
  s.model = std::move(model);
  return s;
}

RatioSeries ratio_series(const EvolutionSeries& s) {
  RatioSeries r;
  r.gamma_t_grid = s.gamma_t_grid;
  r.ratio.resize(s.gamma_t_grid.size());
  for (std::size_t k = 0; k < r.ratio.size(); ++k) {
    const double pc = s.classical_target_prob[k];
    if (!(pc > 1e-300))
      throw Error(ErrorCode::DivisionDomain,
                  "classical target probability vanishes at gamma*t = " +
                      std::to_string(s.gamma_t_grid[k]));
    r.ratio[k] =
        s.quantum_site_probs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s.target)) /
        pc;
  }
  r.model = s.model;
  return r;
}

OptimalTime optimal_time(const RatioSeries& r, bool refine) {
  const auto& t = r.gamma_t_grid;
  if (t.size() < 3 || r.ratio.size() != t.size())
    throw Error(ErrorCode::InvalidArgument, "optimal_time needs at least 3 grid points");

  std::size_t best = 0;
  for (std::size_t k = 1; k < r.ratio.size(); ++k)
    if (r.ratio[k] > r.ratio[best]) best = k;
  OptimalTime out{t[best], r.ratio[best]};
  if (!refine) return out;
  if (!r.model)
    throw Error(ErrorCode::InvalidArgument, "refinement needs a ratio series backed by a model");

  // Golden-section maximization on the bracketing interval.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = t[best == 0 ? 0 : best - 1];
  double b = t[best + 1 == t.size() ? best : best + 1];
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = r.model->ratio(c);
  double fd = r.model->ratio(d);
  for (int iter = 0; iter < 200; ++iter) {
    if (b - a <= 1e-6 * std::max(std::abs(0.5 * (a + b)), 1e-12)) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = r.model->ratio(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = r.model->ratio(d);
    }
  }
  const double x = fc >= fd ? c : d;
  const double fx = fc >= fd ? fc : fd;
  if (fx > out.r_opt) out = {x, fx};
  return out;
}

Eigen::MatrixXd beta_time_heatmap(const Graph& g, const TargetSpec& spec,
                                  std::span<const double> beta_grid,
                                  std::span<const double> gamma_t_grid, unsigned threads) {
  if (beta_grid.empty()) throw Error(ErrorCode::InvalidArgument, "beta grid is empty");
  check_grid(gamma_t_grid);
  const std::size_t w = require_target(g, spec);
  const auto rows = detail::parallel_map<Eigen::VectorXd>(
      beta_grid.size(), threads, [&](std::size_t b) {
        const SearchModel model(g, w, beta_grid[b]);
        Eigen::VectorXd row(static_cast<Eigen::Index>(gamma_t_grid.size()));
        for (std::size_t k = 0; k < gamma_t_grid.size(); ++k)
          row(static_cast<Eigen::Index>(k)) = model.quantum_target(gamma_t_grid[k]);
        return row;
      });
  Eigen::MatrixXd out(static_cast<Eigen::Index>(beta_grid.size()),
                      static_cast<Eigen::Index>(gamma_t_grid.size()));
  for (std::size_t b = 0; b < rows.size(); ++b) out.row(static_cast<Eigen::Index>(b)) = rows[b];
  return out;
}

ScalingRecord optimal_record(const Graph& g, int layers, const TargetSpec& spec,
                             double beta_over_gamma, const ScalingOptions& options) {
  if (!(beta_over_gamma > 0.0))
    throw Error(ErrorCode::InvalidArgument, "beta/gamma must be positive");
  const std::size_t w = require_target(g, spec);
  RatioSeries r;
  r.model = std::make_shared<const SearchModel>(g, w, beta_over_gamma);
  r.gamma_t_grid = make_grid(options.window_factor * static_cast<double>(g.size()) / 6.0,
                             options.step);
  r.ratio.reserve(r.gamma_t_grid.size());
  for (double gt : r.gamma_t_grid) r.ratio.push_back(r.model->ratio(gt));
  const auto opt = optimal_time(r, options.refine);

  ScalingRecord rec;
  rec.n = g.size();
  rec.layers = layers;
  rec.target = spec;
  rec.beta_over_gamma = beta_over_gamma;
  rec.t_opt = opt.t_opt;
  rec.pq_opt = r.model->quantum_target(opt.t_opt);
  rec.pc_opt = r.model->classical_target(opt.t_opt);
  rec.r_opt = rec.pq_opt / rec.pc_opt;
  return rec;
}

namespace {

std::vector<ScalingRecord> run_jobs(std::span<const int> layer_range,
                                    std::span<const TargetSpec> targets,
                                    std::span<const double> beta_grid,
                                    const ScalingOptions& options) {
  if (layer_range.empty() || targets.empty())
    throw Error(ErrorCode::InvalidArgument, "scaling needs layers and targets");
  if (beta_grid.empty()) throw Error(ErrorCode::InvalidArgument, "beta grid is empty");
  std::vector<Graph> patches;
  for (int layers : layer_range) {
    if (layers < 1) throw Error(ErrorCode::InvalidArgument, "scaling layers must be >= 1");
    patches.push_back(build_hex_patch(layers));
  }
  std::vector<std::tuple<double, std::size_t, TargetSpec>> jobs;
  for (double beta : beta_grid)
    for (std::size_t p = 0; p < patches.size(); ++p)
      for (const auto& spec : targets) {
        try {
          resolve_target(patches[p], spec);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::TargetNotInGraph) continue;
          throw;
        }
        jobs.emplace_back(beta, p, spec);
      }
  return detail::parallel_map<ScalingRecord>(jobs.size(), options.threads, [&](std::size_t k) {
    const auto& [beta, p, spec] = jobs[k];
    return optimal_record(patches[p], layer_range[p], spec, beta, options);
  });
}

}  // namespace

std::vector<ScalingRecord> scaling_study(std::span<const int> layer_range,
                                         std::span<const TargetSpec> targets,
                                         double beta_over_gamma, const ScalingOptions& options) {
  const double betas[] = {beta_over_gamma};
  return run_jobs(layer_range, targets, betas, options);
}

std::vector<ScalingRecord> beta_size_surface(std::span<const int> layer_range,
                                             std::span<const TargetSpec> targets,
                                             std::span<const double> beta_grid,
                                             const ScalingOptions& options) {
  return run_jobs(layer_range, targets, beta_grid, options);
}

}  // namespace ctqw
