#include "ctqw/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"

#include "ctqw/error.hpp"
#include "ctqw/generators.hpp"
#include "parallel.hpp"

namespace ctqw {

const std::vector<FabPreset>& fabrication_presets() {
  static const std::vector<FabPreset> presets = {
      {"A", 23.40, 3.69, 2.00, 0.060, 0.25, {19.3, 38.6}, {1.16, 2.32}},
      {"B", 24.37, 3.32, 2.00, 0.053, 0.22, {19.3, 38.6}, {1.02, 2.05}},
      {"C", 25.30, 3.03, 2.00, 0.047, 0.19, {19.3, 38.6}, {0.91, 1.81}},
      {"D", 26.56, 2.78, 2.00, 0.040, 0.17, {19.3, 38.6}, {0.77, 1.54}},
  };
  return presets;
}

const FabPreset& fabrication_preset(const std::string& name) {
  for (const auto& p : fabrication_presets())
    if (p.name == name) return p;
  throw Error(ErrorCode::InvalidArgument, "unknown preset '" + name + "' (expected A-D)");
}

std::vector<FabPreset> presets_from_json(const std::string& text) {
  std::vector<FabPreset> out;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& row : doc.at("presets")) {
      FabPreset p;
      p.name = row.at("type").get<std::string>();
      p.spacing_um = row.at("a_um").get<double>();
      p.v_mm_s = row.at("v_mm_s").get<double>();
      p.v0_mm_s = row.at("v0_mm_s").get<double>();
      p.gamma_per_mm = row.at("gamma_per_mm").get<double>();
      p.beta_per_mm = row.at("beta_per_mm").get<double>();
      p.lengths_mm = row.at("lengths_mm").get<std::array<double, 2>>();
      p.tabulated_gamma_t = row.at("nominal_gamma_t").get<std::array<double, 2>>();
      out.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("preset JSON: ") + e.what());
  }
  return out;
}

std::string presets_to_json(std::span<const FabPreset> presets) {
  nlohmann::ordered_json doc;
  doc["presets"] = nlohmann::ordered_json::array();
  for (const auto& p : presets) {
    nlohmann::ordered_json row;
    row["type"] = p.name;
    row["a_um"] = p.spacing_um;
    row["v_mm_s"] = p.v_mm_s;
    row["v0_mm_s"] = p.v0_mm_s;
    row["gamma_per_mm"] = p.gamma_per_mm;
    row["beta_per_mm"] = p.beta_per_mm;
    row["lengths_mm"] = p.lengths_mm;
    row["nominal_gamma_t"] = p.tabulated_gamma_t;
    doc["presets"].push_back(row);
  }
  return doc.dump(2);
}

double CouplingLaw::operator()(double spacing_um) const {
  return gamma0 * std::exp(-spacing_um / decay_length_um);
}

CouplingLaw fit_coupling_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2)
    throw Error(ErrorCode::DegeneratePoints, "coupling fit needs at least two points");
  double mean_a = 0.0;
  double mean_log = 0.0;
  for (const auto& [a, gamma] : points) {
    if (!(gamma > 0.0) || !std::isfinite(a))
      throw Error(ErrorCode::DegeneratePoints, "coupling values must be positive");
    mean_a += a;
    mean_log += std::log(gamma);
  }
  mean_a /= static_cast<double>(points.size());
  mean_log /= static_cast<double>(points.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [a, gamma] : points) {
    sxx += (a - mean_a) * (a - mean_a);
    sxy += (a - mean_a) * (std::log(gamma) - mean_log);
  }
  if (sxx <= 1e-12 * std::max(1.0, mean_a * mean_a))
    throw Error(ErrorCode::DegeneratePoints, "coupling fit needs distinct spacings");
  const double slope = sxy / sxx;
  if (!(slope < 0.0))
    throw Error(ErrorCode::DegeneratePoints, "coupling does not decrease with spacing");
  const double intercept = mean_log - slope * mean_a;
  return {std::exp(intercept), -1.0 / slope};
}

namespace {

void check_spec(const WaveguideArraySpec& spec) {
  if (!spec.graph.spacing_um())
    throw Error(ErrorCode::InvalidArgument, "waveguide array graph needs spacing_um");
  if (!(spec.length_mm >= 0.0) || !std::isfinite(spec.length_mm))
    throw Error(ErrorCode::InvalidArgument, "length_mm must be non-negative");
  if (!(spec.wavelength_nm > 0.0))
    throw Error(ErrorCode::InvalidArgument, "wavelength_nm must be positive");
}

}  // namespace

ComplexVector input_field(const WaveguideArraySpec& spec, const BeamSpec& beam) {
  check_spec(spec);
  if (!(beam.waist_diameter_um > 0.0))
    throw Error(ErrorCode::InvalidArgument, "beam waist must be positive");
  const double waist_radius = beam.waist_diameter_um / 2.0;
  const double k = 2.0 * std::numbers::pi / (spec.wavelength_nm * 1e-3);  // 1/um
  const double kx = k * std::sin(beam.tilt_x_mrad * 1e-3);
  const double ky = k * std::sin(beam.tilt_y_mrad * 1e-3);

  const auto n = static_cast<Eigen::Index>(spec.graph.size());
  ComplexVector field(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Point2 p = spec.graph.position_um(static_cast<std::size_t>(j));
    const double dx = p.x - beam.offset_um.x;
    const double dy = p.y - beam.offset_um.y;
    const double amplitude =
        std::isinf(waist_radius) ? 1.0
                                 : std::exp(-(dx * dx + dy * dy) / (waist_radius * waist_radius));
    field(j) = std::polar(amplitude, kx * p.x + ky * p.y);
  }
  const double norm = field.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::ZeroState, "beam does not reach the array");
  return field / norm;
}

ComplexVector propagate_array(const WaveguideArraySpec& spec, const ComplexVector& input) {
  check_spec(spec);
  const auto h = quantum_hamiltonian(
      spec.graph, SearchParams{spec.gamma_per_mm, spec.target ? spec.beta_per_mm : 0.0,
                               spec.target});
  return evolve_quantum(h, input, spec.length_mm);
}

Eigen::VectorXd intensity_distribution(const ComplexVector& state) {
  Eigen::VectorXd p = state.cwiseAbs2();
  const double total = p.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroState, "state has zero norm");
  return p / total;
}

double rotation_asymmetry(const Graph& g, const Eigen::VectorXd& p) {
  double worst = 0.0;
  for (const auto& perm : automorphism_orbit(g))
    for (std::size_t v = 0; v < perm.size(); ++v)
      worst = std::max(worst, std::abs(p(static_cast<Eigen::Index>(v)) -
                                       p(static_cast<Eigen::Index>(perm[v]))));
  return worst;
}

std::pair<int, int> RasterImage::pixel_of(Point2 p_um) const {
  return {static_cast<int>(std::lround((p_um.x - origin_x_um) / scale_um_per_px)),
          static_cast<int>(std::lround((origin_y_um - p_um.y) / scale_um_per_px))};
}

RasterImage render_facet(const Graph& g, const Eigen::VectorXd& intensities,
                         double mode_diameter_um, double scale_um_per_px) {
  if (g.size() == 0) throw Error(ErrorCode::EmptyGraph, "nothing to render");
  if (!g.spacing_um()) throw Error(ErrorCode::InvalidArgument, "render needs spacing_um");
  if (!(mode_diameter_um > 0.0) || !(scale_um_per_px > 0.0))
    throw Error(ErrorCode::InvalidArgument, "mode diameter and pixel scale must be positive");
  if (intensities.size() != static_cast<Eigen::Index>(g.size()))
    throw Error(ErrorCode::InvalidArgument, "one intensity per waveguide expected");

  std::vector<Point2> centres(g.size());
  double min_x = INFINITY, max_x = -INFINITY, min_y = INFINITY, max_y = -INFINITY;
  for (std::size_t v = 0; v < g.size(); ++v) {
    centres[v] = g.position_um(v);
    min_x = std::min(min_x, centres[v].x);
    max_x = std::max(max_x, centres[v].x);
    min_y = std::min(min_y, centres[v].y);
    max_y = std::max(max_y, centres[v].y);
  }
  const double pad = 2.0 * mode_diameter_um;

  RasterImage img;
  img.scale_um_per_px = scale_um_per_px;
  img.origin_x_um = min_x - pad;
  img.origin_y_um = max_y + pad;
  img.width = static_cast<int>(std::floor((max_x - min_x + 2 * pad) / scale_um_per_px + 1e-9)) + 1;
  img.height = static_cast<int>(std::floor((max_y - min_y + 2 * pad) / scale_um_per_px + 1e-9)) + 1;

  const double w = mode_diameter_um / 2.0;
  std::vector<double> field(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
  for (int y = 0; y < img.height; ++y) {
    const double py = img.origin_y_um - y * scale_um_per_px;
    for (int x = 0; x < img.width; ++x) {
      const double px = img.origin_x_um + x * scale_um_per_px;
      double sum = 0.0;
      for (std::size_t v = 0; v < centres.size(); ++v) {
        const double dx = px - centres[v].x;
        const double dy = py - centres[v].y;
        sum += intensities(static_cast<Eigen::Index>(v)) * std::exp(-2.0 * (dx * dx + dy * dy) / (w * w));
      }
      field[static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width) + static_cast<std::size_t>(x)] = sum;
    }
  }
  const double peak = *std::max_element(field.begin(), field.end());
  img.pixels.resize(field.size(), 0);
  if (peak > 0.0)
    for (std::size_t k = 0; k < field.size(); ++k)
      img.pixels[k] = static_cast<std::uint16_t>(
          std::lround(std::max(0.0, field[k]) / peak * RasterImage::kFullScale));
  return img;
}

Eigen::VectorXd classical_distribution(const Graph& g, std::optional<std::size_t> target,
                                       double gamma_t) {
  const Eigen::VectorXd p0 = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.size()),
                                                       1.0 / static_cast<double>(g.size()));
  return evolve_classical(classical_generator(g, target), p0, 1.0, gamma_t);
}

std::vector<RasterImage> classical_facet_series(const Graph& g, const TargetSpec& spec,
                                                std::span<const double> gamma_t_list,
                                                double mode_diameter_um, double scale_um_per_px,
                                                unsigned threads) {
  const auto target = resolve_target(g, spec);
  return detail::parallel_map<RasterImage>(gamma_t_list.size(), threads, [&](std::size_t k) {
    return render_facet(g, classical_distribution(g, target, gamma_t_list[k]), mode_diameter_um,
                        scale_um_per_px);
  });
}

}  // namespace ctqw
