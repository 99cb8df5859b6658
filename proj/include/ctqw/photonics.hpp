#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ctqw/lattice.hpp"
#include "ctqw/propagator.hpp"

namespace ctqw {

/// One row of the fabrication tables: geometry, inscription speeds (kept for
/// reference only) and the nominal optical parameters they were chosen for.
struct FabPreset {
  std::string name;
  double spacing_um = 0.0;
  double v_mm_s = 0.0;
  double v0_mm_s = 0.0;
  double gamma_per_mm = 0.0;
  double beta_per_mm = 0.0;
  std::array<double, 2> lengths_mm{19.3, 38.6};
  std::array<double, 2> tabulated_gamma_t{};

  double gamma_t(std::size_t length_index) const {
    return gamma_per_mm * lengths_mm.at(length_index);
  }
};

const std::vector<FabPreset>& fabrication_presets();

/// Looks up "A".."D"; throws InvalidArgument otherwise.
const FabPreset& fabrication_preset(const std::string& name);

std::vector<FabPreset> presets_from_json(const std::string& text);
std::string presets_to_json(std::span<const FabPreset> presets);

struct WaveguideArraySpec {
  Graph graph;  // spacing_um must be set
  double gamma_per_mm = 0.0;
  double beta_per_mm = 0.0;
  std::optional<std::size_t> target;
  double length_mm = 0.0;
  double wavelength_nm = 633.0;
};

struct BeamSpec {
  double waist_diameter_um = std::numeric_limits<double>::infinity();  // 1/e^2 intensity
  double tilt_x_mrad = 0.0;
  double tilt_y_mrad = 0.0;
  Point2 offset_um{};
};

/// gamma(a) = gamma0 * exp(-a / decay_length)
struct CouplingLaw {
  double gamma0 = 0.0;
  double decay_length_um = 0.0;

  double operator()(double spacing_um) const;
};

/// Least-squares fit of log(gamma) against spacing.
CouplingLaw fit_coupling_law(std::span<const std::pair<double, double>> points);

/// Beam field sampled at the waveguide centres, normalized to unit norm.
ComplexVector input_field(const WaveguideArraySpec& spec, const BeamSpec& beam);

/// Coupled-mode propagation over the device length.
ComplexVector propagate_array(const WaveguideArraySpec& spec, const ComplexVector& input);

/// |psi_j|^2 renormalized to sum to one.
Eigen::VectorXd intensity_distribution(const ComplexVector& state);

/// Largest |p_j - p_perm(j)| over all rotation permutations of the layout.
double rotation_asymmetry(const Graph& g, const Eigen::VectorXd& p);

struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> pixels;  // row-major, row 0 at the top
  double scale_um_per_px = 1.0;
  double origin_x_um = 0.0;  // position of pixel (0, 0)
  double origin_y_um = 0.0;

  static constexpr std::uint16_t kFullScale = 65535;

  std::uint16_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
  /// Pixel nearest to a facet position in micrometres.
  std::pair<int, int> pixel_of(Point2 p_um) const;
};

/// Gaussian spots of the given 1/e^2 diameter at each waveguide, weighted by
/// intensity and normalized so the brightest pixel is full scale.
RasterImage render_facet(const Graph& g, const Eigen::VectorXd& intensities,
                         double mode_diameter_um, double scale_um_per_px);

/// Site distribution of the classical walk from the uniform start, via expm
/// of the sink generator (plain D - A without a target).
Eigen::VectorXd classical_distribution(const Graph& g, std::optional<std::size_t> target,
                                       double gamma_t);

std::vector<RasterImage> classical_facet_series(const Graph& g, const TargetSpec& spec,
                                                std::span<const double> gamma_t_list,
                                                double mode_diameter_um = 13.0,
                                                double scale_um_per_px = 0.5,
                                                unsigned threads = 1);

}  // namespace ctqw
