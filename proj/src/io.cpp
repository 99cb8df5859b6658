#include "ctqw/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "ctqw/error.hpp"

namespace ctqw {

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
  if (ec != std::errc()) throw Error(ErrorCode::Io, "number formatting failed");
  return std::string(buf, end);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::Io, "write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorCode::Io, "cannot move output into " + path.string() + ": " + ec.message());
  }
}

std::string curves_csv(const EvolutionSeries& series) {
  const auto pq = series.quantum_target_prob();
  std::string out = "gamma_t,p_quantum_target,p_classical_target,ratio\n";
  for (std::size_t k = 0; k < series.gamma_t_grid.size(); ++k) {
    const double pc = series.classical_target_prob[k];
    out += format_number(series.gamma_t_grid[k]) + ',' + format_number(pq[k]) + ',' +
           format_number(pc) + ',' + format_number(pq[k] / pc) + '\n';
  }
  return out;
}

std::string scaling_csv(std::span<const ScalingRecord> records) {
  std::string out = "n,layers,target,beta_over_gamma,t_opt,r_opt,pq_opt,pc_opt\n";
  for (const auto& r : records)
    out += std::to_string(r.n) + ',' + std::to_string(r.layers) + ',' + target_label(r.target) +
           ',' + format_number(r.beta_over_gamma) + ',' + format_number(r.t_opt) + ',' +
           format_number(r.r_opt) + ',' + format_number(r.pq_opt) + ',' +
           format_number(r.pc_opt) + '\n';
  return out;
}

std::string heatmap_csv(std::span<const double> beta_grid, std::span<const double> gamma_t_grid,
                        const Eigen::MatrixXd& probs) {
  std::string out = "beta_over_gamma,gamma_t,p_quantum_target\n";
  for (std::size_t b = 0; b < beta_grid.size(); ++b)
    for (std::size_t k = 0; k < gamma_t_grid.size(); ++k)
      out += format_number(beta_grid[b]) + ',' + format_number(gamma_t_grid[k]) + ',' +
             format_number(probs(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(k))) +
             '\n';
  return out;
}

std::string distribution_csv(const Graph& g, const Eigen::VectorXd& probs) {
  std::string out = "site,i,j,probability\n";
  for (std::size_t v = 0; v < g.size(); ++v)
    out += std::to_string(v) + ',' + std::to_string(g.coords()[v].i) + ',' +
           std::to_string(g.coords()[v].j) + ',' +
           format_number(probs(static_cast<Eigen::Index>(v))) + '\n';
  return out;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_number(m(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string encode_pgm(const RasterImage& image, std::string_view comment) {
  std::string out = "P5\n# ";
  for (char ch : comment) out += (ch == '\n' || ch == '\r') ? ' ' : ch;
  out += '\n' + std::to_string(image.width) + ' ' + std::to_string(image.height) + "\n65535\n";
  out.reserve(out.size() + image.pixels.size() * 2);
  for (std::uint16_t px : image.pixels) {
    out += static_cast<char>(px >> 8);
    out += static_cast<char>(px & 0xff);
  }
  return out;
}

RasterImage decode_pgm(std::string_view bytes) {
  std::size_t pos = 0;
  const auto skip_space_and_comments = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  const auto read_int = [&] {
    skip_space_and_comments();
    int value = 0;
    const auto [ptr, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), value);
    if (ec != std::errc()) throw Error(ErrorCode::Io, "malformed PGM header");
    pos = static_cast<std::size_t>(ptr - bytes.data());
    return value;
  };
  if (bytes.substr(0, 2) != "P5") throw Error(ErrorCode::Io, "not a binary PGM");
  pos = 2;
  RasterImage img;
  img.width = read_int();
  img.height = read_int();
  const int maxval = read_int();
  if (maxval != 65535) throw Error(ErrorCode::Io, "only 16-bit PGM supported");
  ++pos;  // single whitespace before raster
  const auto count = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  if (bytes.size() - pos != 2 * count) throw Error(ErrorCode::Io, "PGM raster size mismatch");
  img.pixels.resize(count);
  for (std::size_t k = 0; k < count; ++k)
    img.pixels[k] = static_cast<std::uint16_t>(
        (static_cast<unsigned char>(bytes[pos + 2 * k]) << 8) |
        static_cast<unsigned char>(bytes[pos + 2 * k + 1]));
  return img;
}

}  // namespace ctqw
