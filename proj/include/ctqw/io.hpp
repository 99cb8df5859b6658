#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "ctqw/photonics.hpp"
#include "ctqw/search.hpp"

namespace ctqw {

/// 12 significant digits, '.' decimal separator, independent of locale.
std::string format_number(double value);

/// Writes through a temporary sibling file and renames it into place, so a
/// failed write never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string curves_csv(const EvolutionSeries& series);
std::string scaling_csv(std::span<const ScalingRecord> records);
std::string heatmap_csv(std::span<const double> beta_grid, std::span<const double> gamma_t_grid,
                        const Eigen::MatrixXd& probs);
std::string distribution_csv(const Graph& g, const Eigen::VectorXd& probs);
std::string matrix_csv(const Eigen::MatrixXd& m);

/// Binary P5, 16-bit big-endian samples, one comment line.
std::string encode_pgm(const RasterImage& image, std::string_view comment);
RasterImage decode_pgm(std::string_view bytes);

}  // namespace ctqw
