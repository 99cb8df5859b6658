#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctqw_cli {

enum class Command { Evolve, Sweep, Scaling, Photonics, RenderClassical };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::Evolve;
  std::string graph = "paper31";  // hex:<layers> | paper31 | file:<path>
  std::string target = "C";
  double beta_over_gamma = 4.16;
  double t_max = 5.0;
  double step = 0.01;
  std::vector<double> beta_grid;
  std::vector<int> layers;
  std::vector<std::string> targets;
  std::optional<std::string> preset;  // e.g. "A-long"
  std::vector<double> gamma_t_list;
  double spacing_um = 0.0;  // 0: preset spacing, else 25 um
  double waist_um = 0.0;    // 0: uniform illumination
  double tilt_x_mrad = 0.0;
  double tilt_y_mrad = 0.0;
  double mode_diameter_um = 13.0;
  double scale_um_per_px = 0.5;
  double window_factor = 2.0;
  bool refine = true;
  std::string output_dir = ".";
  unsigned threads = 1;
};

/// Flags override values from --config <file.json>. `env_output_dir` is the
/// value of CTQW_OUTPUT_DIR (or null) and loses to --output-dir.
RunConfig parse_config(const std::vector<std::string>& args, const char* env_output_dir);

/// Runs one command; returns 0 on success, 1 on a computation error.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full front-end: parse, execute, map usage errors to exit code 2.
int run(int argc, const char* const* argv);

}  // namespace ctqw_cli
