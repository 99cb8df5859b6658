#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctqw/ctqw.h"

namespace ctqw_cli {

namespace {

namespace fs = std::filesystem;

// Every option the front-end understands, shared by all subcommands and by
// the JSON config file (same keys without the leading dashes).
const std::vector<std::pair<std::string, std::string>> kOptions = {
    {"graph", "hex:<layers> | paper31 | file:<path.json>"},
    {"target", "none | C | S | 1N | 2N | <index>"},
    {"beta", "target detuning beta/gamma"},
    {"t-max", "largest gamma*t on the curve grid"},
    {"step", "gamma*t grid step"},
    {"beta-grid", "beta/gamma values: start:stop:step or a,b,c"},
    {"layers", "hexagonal patch layers: lo..hi or a,b,c"},
    {"targets", "comma-separated target list"},
    {"preset", "fabrication preset A-D with length: A-short | A-long ..."},
    {"gamma-t", "comma-separated gamma*t values"},
    {"spacing", "waveguide spacing in um"},
    {"waist", "input beam 1/e^2 diameter in um (0: uniform)"},
    {"tilt-x", "input beam tilt about y in mrad"},
    {"tilt-y", "input beam tilt about x in mrad"},
    {"mode-diameter", "rendered mode 1/e^2 diameter in um"},
    {"scale", "image scale in um per pixel"},
    {"window-factor", "t_opt window is [0, factor * n / 6]"},
    {"output-dir", "directory for output files"},
    {"threads", "worker threads"},
};

const std::map<std::string, Command> kCommands = {
    {"evolve", Command::Evolve},
    {"sweep", Command::Sweep},
    {"scaling", Command::Scaling},
    {"photonics", Command::Photonics},
    {"render-classical", Command::RenderClassical},
};

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(value))
    throw UsageError("--" + key + ": expected a number, got '" + text + "'");
  return value;
}

long parse_long(const std::string& key, const std::string& text) {
  long value = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw UsageError("--" + key + ": expected an integer, got '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

std::vector<int> parse_layers(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const long lo = parse_long("layers", text.substr(0, dots));
    const long hi = parse_long("layers", text.substr(dots + 2));
    if (hi < lo) throw UsageError("--layers: empty range '" + text + "'");
    for (long l = lo; l <= hi; ++l) out.push_back(static_cast<int>(l));
  } else {
    for (const auto& part : split(text, ',')) out.push_back(static_cast<int>(parse_long("layers", part)));
  }
  if (out.empty()) throw UsageError("--layers: no values");
  for (int l : out)
    if (l < 1) throw UsageError("--layers: every patch needs at least 1 layer");
  return out;
}

std::vector<double> parse_values(const std::string& key, const std::string& text) {
  std::vector<double> out;
  const auto parts = split(text, ':');
  if (parts.size() == 3 && text.find(',') == std::string::npos) {
    const double lo = parse_double(key, parts[0]);
    const double hi = parse_double(key, parts[1]);
    const double step = parse_double(key, parts[2]);
    if (!(step > 0.0) || hi < lo) throw UsageError("--" + key + ": invalid range '" + text + "'");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
  } else {
    for (const auto& part : split(text, ',')) out.push_back(parse_double(key, part));
  }
  if (out.empty()) throw UsageError("--" + key + ": no values");
  return out;
}

void check_target_token(const std::string& token) {
  ctqw_target t;
  if (ctqw_parse_target(token.c_str(), &t) != CTQW_OK)
    throw UsageError("--target: " + std::string(ctqw_last_error()));
}

void check_graph_token(const std::string& token) {
  if (token == "paper31") return;
  if (token.rfind("hex:", 0) == 0) {
    if (parse_long("graph", token.substr(4)) < 0)
      throw UsageError("--graph: hexagonal patch needs layers >= 0, got '" + token + "'");
    return;
  }
  if (token.rfind("file:", 0) == 0) {
    if (!fs::exists(token.substr(5)))
      throw UsageError("--graph: file '" + token.substr(5) + "' does not exist");
    return;
  }
  throw UsageError("--graph: expected hex:<layers>, paper31 or file:<path>, got '" + token + "'");
}

std::string json_to_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string joined;
    for (const auto& item : v) {
      if (!joined.empty()) joined += ',';
      joined += json_to_text(item);
    }
    return joined;
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("--config: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw UsageError("--config: top level must be an object");
  std::map<std::string, std::string> values;
  for (const auto& [key, value] : doc.items()) {
    const bool known = key == "command" || key == "no-refine" ||
                       std::any_of(kOptions.begin(), kOptions.end(),
                                   [&](const auto& o) { return o.first == key; });
    if (!known) throw UsageError("--config: unknown key '" + key + "'");
    values[key] = json_to_text(value);
  }
  return values;
}

std::string sanitize(std::string text) {
  for (char& ch : text)
    if (ch == ':' || ch == '/' || ch == '\\' || ch == ' ') ch = '-';
  return text;
}

// ---- execution helpers over the C API ----

struct Failure {
  ctqw_status status;
  std::string message;
};

void check(ctqw_status status) {
  if (status != CTQW_OK) throw Failure{status, ctqw_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using GraphPtr = std::unique_ptr<ctqw_graph, Deleter<ctqw_graph, ctqw_graph_free>>;
using SeriesPtr = std::unique_ptr<ctqw_series, Deleter<ctqw_series, ctqw_series_free>>;
using TablePtr = std::unique_ptr<ctqw_scaling_table, Deleter<ctqw_scaling_table, ctqw_scaling_free>>;
using ImagePtr = std::unique_ptr<ctqw_image, Deleter<ctqw_image, ctqw_image_free>>;

GraphPtr load_graph(const std::string& token) {
  ctqw_graph* g = nullptr;
  if (token == "paper31") {
    check(ctqw_graph_paper31(&g));
  } else if (token.rfind("hex:", 0) == 0) {
    check(ctqw_graph_hex(static_cast<int>(parse_long("graph", token.substr(4))), &g));
  } else {
    check(ctqw_graph_load(token.substr(5).c_str(), &g));
  }
  return GraphPtr(g);
}

GraphPtr with_spacing(const ctqw_graph* g, double spacing_um) {
  ctqw_graph* out = nullptr;
  check(ctqw_graph_with_spacing(g, spacing_um, &out));
  return GraphPtr(out);
}

ctqw_target target_of(const std::string& token) {
  ctqw_target t;
  check(ctqw_parse_target(token.c_str(), &t));
  return t;
}

std::string path_in(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

int run_evolve(const RunConfig& cfg, std::ostream& out) {
  const auto g = load_graph(cfg.graph);
  double t_max = cfg.t_max;
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor(t_max / cfg.step + 1e-9));
  for (long k = 0; k <= count; ++k) grid.push_back(static_cast<double>(k) * cfg.step);

  ctqw_series* raw = nullptr;
  check(ctqw_run_search(g.get(), target_of(cfg.target), cfg.beta_over_gamma, grid.data(),
                        grid.size(), &raw));
  const SeriesPtr series(raw);
  const auto path = path_in(cfg, "evolve_" + sanitize(ctqw_graph_id(g.get())) + "_" +
                                     sanitize(cfg.target) + ".csv");
  check(ctqw_series_write_csv(series.get(), path.c_str()));

  out << "evolve graph=" << ctqw_graph_id(g.get()) << " target=" << cfg.target
      << " beta_over_gamma=" << format_number(cfg.beta_over_gamma);
  if (grid.size() >= 3) {
    double t_opt = 0.0, r_opt = 0.0;
    check(ctqw_series_optimal_time(series.get(), cfg.refine ? 1 : 0, &t_opt, &r_opt));
    out << " t_opt=" << format_number(t_opt) << " r_opt=" << format_number(r_opt);
  }
  out << " -> " << path << '\n';
  return 0;
}

int run_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto g = load_graph(cfg.graph);
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor(cfg.t_max / cfg.step + 1e-9));
  for (long k = 0; k <= count; ++k) grid.push_back(static_cast<double>(k) * cfg.step);
  std::vector<double> betas = cfg.beta_grid;
  if (betas.empty()) betas = parse_values("beta-grid", "0:8:0.05");

  std::vector<double> probs(betas.size() * grid.size());
  check(ctqw_beta_time_heatmap(g.get(), target_of(cfg.target), betas.data(), betas.size(),
                               grid.data(), grid.size(), cfg.threads, probs.data()));
  const auto path = path_in(cfg, "sweep_" + sanitize(ctqw_graph_id(g.get())) + "_" +
                                     sanitize(cfg.target) + ".csv");
  check(ctqw_write_heatmap_csv(betas.data(), betas.size(), grid.data(), grid.size(), probs.data(),
                               path.c_str()));
  const auto best = static_cast<std::size_t>(
      std::max_element(probs.begin(), probs.end()) - probs.begin());
  out << "sweep graph=" << ctqw_graph_id(g.get()) << " target=" << cfg.target
      << " max_p_quantum=" << format_number(probs[best])
      << " beta_over_gamma=" << format_number(betas[best / grid.size()])
      << " gamma_t=" << format_number(grid[best % grid.size()]) << " -> " << path << '\n';
  return 0;
}

int run_scaling(const RunConfig& cfg, std::ostream& out) {
  std::vector<ctqw_target> targets;
  for (const auto& t : cfg.targets) targets.push_back(target_of(t));
  std::vector<double> betas = cfg.beta_grid;
  if (betas.empty()) betas.push_back(cfg.beta_over_gamma);
  ctqw_scaling_options opts = ctqw_scaling_defaults();
  opts.window_factor = cfg.window_factor;
  opts.step = cfg.step;
  opts.refine = cfg.refine ? 1 : 0;
  opts.threads = cfg.threads;

  ctqw_scaling_table* raw = nullptr;
  check(ctqw_scaling_run(cfg.layers.data(), cfg.layers.size(), targets.data(), targets.size(),
                         betas.data(), betas.size(), &opts, &raw));
  const TablePtr table(raw);
  const auto path = path_in(cfg, "scaling.csv");
  check(ctqw_scaling_write_csv(table.get(), path.c_str()));

  double min_r = INFINITY;
  for (std::size_t k = 0; k < ctqw_scaling_size(table.get()); ++k) {
    ctqw_scaling_record rec;
    check(ctqw_scaling_get(table.get(), k, &rec));
    min_r = std::min(min_r, rec.r_opt);
  }
  out << "scaling records=" << ctqw_scaling_size(table.get())
      << " min_r_opt=" << format_number(min_r) << " -> " << path << '\n';
  return 0;
}

int run_photonics(const RunConfig& cfg, std::ostream& out) {
  const std::string preset_token = cfg.preset.value_or("A-long");
  const auto dash = preset_token.find('-');
  const std::string name = preset_token.substr(0, dash);
  const std::string length = dash == std::string::npos ? "long" : preset_token.substr(dash + 1);
  ctqw_preset preset;
  check(ctqw_preset_find(name.c_str(), &preset));
  const std::size_t length_index = length == "short" ? 0 : 1;

  const auto base = load_graph(cfg.graph);
  const auto g = with_spacing(base.get(), cfg.spacing_um > 0.0 ? cfg.spacing_um : preset.spacing_um);
  const double gamma_t = preset.gamma_per_mm * preset.lengths_mm[length_index];

  for (const auto& token : cfg.targets) {
    ctqw_array_params array{preset.gamma_per_mm, preset.beta_per_mm, target_of(token),
                            preset.lengths_mm[length_index], 633.0};
    ctqw_beam_params beam{cfg.waist_um, cfg.tilt_x_mrad, cfg.tilt_y_mrad, 0.0, 0.0};
    std::vector<double> intensities(ctqw_graph_size(g.get()));
    check(ctqw_photonics_propagate(g.get(), &array, &beam, intensities.data()));

    ctqw_image* raw = nullptr;
    check(ctqw_render_facet(g.get(), intensities.data(), cfg.mode_diameter_um,
                            cfg.scale_um_per_px, &raw));
    const ImagePtr image(raw);
    const std::string stem = "photonics_" + sanitize(preset_token) + "_" + sanitize(token);
    const std::string comment = "graph_id=" + std::string(ctqw_graph_id(g.get())) +
                                " gamma_t=" + format_number(gamma_t) + " target=" + token;
    check(ctqw_image_write_pgm(image.get(), comment.c_str(), path_in(cfg, stem + ".pgm").c_str()));
    check(ctqw_write_distribution_csv(g.get(), intensities.data(),
                                      path_in(cfg, stem + ".csv").c_str()));
    const auto brightest = static_cast<std::size_t>(
        std::max_element(intensities.begin(), intensities.end()) - intensities.begin());
    out << "photonics preset=" << preset_token << " gamma_t=" << format_number(gamma_t)
        << " target=" << token << " brightest_site=" << brightest
        << " p_max=" << format_number(intensities[brightest]) << " -> "
        << path_in(cfg, stem + ".pgm") << '\n';
  }
  return 0;
}

int run_render_classical(const RunConfig& cfg, std::ostream& out) {
  const auto base = load_graph(cfg.graph);
  const auto g = with_spacing(base.get(), cfg.spacing_um > 0.0 ? cfg.spacing_um : 25.0);
  std::vector<double> probs(ctqw_graph_size(g.get()));
  std::size_t written = 0;
  for (const auto& token : cfg.targets) {
    for (double gt : cfg.gamma_t_list) {
      check(ctqw_classical_distribution(g.get(), target_of(token), gt, probs.data()));
      ctqw_image* raw = nullptr;
      check(ctqw_render_facet(g.get(), probs.data(), cfg.mode_diameter_um, cfg.scale_um_per_px,
                              &raw));
      const ImagePtr image(raw);
      const std::string name = "classical_" + sanitize(ctqw_graph_id(g.get())) + "_" +
                               sanitize(token) + "_gt" + format_number(gt) + ".pgm";
      const std::string comment = "graph_id=" + std::string(ctqw_graph_id(g.get())) +
                                  " gamma_t=" + format_number(gt) + " target=" + token;
      check(ctqw_image_write_pgm(image.get(), comment.c_str(), path_in(cfg, name).c_str()));
      ++written;
    }
  }
  out << "render-classical graph=" << ctqw_graph_id(g.get()) << " images=" << written << " -> "
      << cfg.output_dir << '\n';
  return 0;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args, const char* env_output_dir) {
  CLI::App app{"Quantum spatial search on triangular lattices", "ctqw-cli"};
  app.require_subcommand(0, 1);
  std::map<std::string, std::string> flags;
  std::string config_path;
  bool no_refine = false;
  app.add_option("--config", config_path, "JSON file with any of the options below");
  for (const auto& [name, help] : kOptions) app.add_option("--" + name, flags[name], help);
  app.add_flag("--no-refine", no_refine, "skip golden-section refinement of t_opt");
  for (const auto& [name, cmd] : kCommands) app.add_subcommand(name)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  // File values first, explicit flags on top.
  std::map<std::string, std::string> values;
  if (!config_path.empty()) values = load_config_file(config_path);
  for (const auto& [name, help] : kOptions)
    if (app.count("--" + name) > 0) values[name] = flags[name];
  if (no_refine) values["no-refine"] = "true";

  RunConfig cfg;
  const auto subs = app.get_subcommands();
  std::string command;
  if (!subs.empty()) command = subs.front()->get_name();
  else if (values.contains("command")) command = values["command"];
  if (command.empty())
    throw UsageError("missing command (evolve, sweep, scaling, photonics, render-classical)");
  if (!kCommands.contains(command)) throw UsageError("unknown command '" + command + "'");
  cfg.command = kCommands.at(command);

  const auto has = [&](const std::string& key) { return values.contains(key); };
  const auto number = [&](const std::string& key, double& field) {
    if (has(key)) field = parse_double(key, values[key]);
  };

  if (has("graph")) cfg.graph = values["graph"];
  check_graph_token(cfg.graph);
  if (has("target")) cfg.target = values["target"];
  check_target_token(cfg.target);

  if (cfg.command == Command::Scaling) {
    cfg.beta_over_gamma = 4.0;
    cfg.step = 1e-3;
  }
  number("beta", cfg.beta_over_gamma);
  number("t-max", cfg.t_max);
  number("step", cfg.step);
  number("spacing", cfg.spacing_um);
  number("waist", cfg.waist_um);
  number("tilt-x", cfg.tilt_x_mrad);
  number("tilt-y", cfg.tilt_y_mrad);
  number("mode-diameter", cfg.mode_diameter_um);
  number("scale", cfg.scale_um_per_px);
  number("window-factor", cfg.window_factor);
  if (has("no-refine")) cfg.refine = values["no-refine"] != "true";
  if (has("beta-grid")) cfg.beta_grid = parse_values("beta-grid", values["beta-grid"]);
  if (has("gamma-t")) cfg.gamma_t_list = parse_values("gamma-t", values["gamma-t"]);
  if (has("preset")) cfg.preset = values["preset"];
  if (has("threads")) {
    const long threads = parse_long("threads", values["threads"]);
    if (threads < 1 || threads > 1024) throw UsageError("--threads: expected 1..1024");
    cfg.threads = static_cast<unsigned>(threads);
  }

  if (!(cfg.beta_over_gamma >= 0.0)) throw UsageError("--beta: must be non-negative");
  if (!(cfg.t_max > 0.0)) throw UsageError("--t-max: must be positive");
  if (!(cfg.step > 0.0)) throw UsageError("--step: must be positive");
  if (!(cfg.spacing_um >= 0.0)) throw UsageError("--spacing: must be positive");
  if (!(cfg.waist_um >= 0.0)) throw UsageError("--waist: must be non-negative");
  if (!(cfg.mode_diameter_um > 0.0)) throw UsageError("--mode-diameter: must be positive");
  if (!(cfg.scale_um_per_px > 0.0)) throw UsageError("--scale: must be positive");
  if (!(cfg.window_factor > 0.0)) throw UsageError("--window-factor: must be positive");
  for (double b : cfg.beta_grid)
    if (b < 0.0) throw UsageError("--beta-grid: values must be non-negative");
  for (double gt : cfg.gamma_t_list)
    if (gt < 0.0) throw UsageError("--gamma-t: values must be non-negative");

  switch (cfg.command) {
    case Command::Evolve:
    case Command::Sweep:
      if (cfg.target == "none" || cfg.target == "None")
        throw UsageError(command + " needs a target (--target C, S, 1N, 2N or an index)");
      break;
    case Command::Scaling:
      cfg.layers = parse_layers(has("layers") ? values["layers"] : "1..4");
      cfg.targets = split(has("targets") ? values["targets"] : "C,1N,2N", ',');
      for (const auto& t : cfg.targets)
        if (t != "C" && t != "1N" && t != "2N")
          throw UsageError("--targets: scaling accepts C, 1N and 2N, got '" + t + "'");
      if (!(cfg.beta_over_gamma > 0.0)) throw UsageError("--beta: must be positive for scaling");
      for (double b : cfg.beta_grid)
        if (!(b > 0.0)) throw UsageError("--beta-grid: values must be positive for scaling");
      break;
    case Command::Photonics: {
      const std::string preset = cfg.preset.value_or("A-long");
      static const std::vector<std::string> names = {"A", "B", "C", "D"};
      const auto dash = preset.find('-');
      const std::string name = preset.substr(0, dash);
      const std::string length = dash == std::string::npos ? "" : preset.substr(dash + 1);
      if (std::find(names.begin(), names.end(), name) == names.end() ||
          (length != "short" && length != "long"))
        throw UsageError("--preset: expected A-short, A-long, ..., D-long, got '" + preset + "'");
      cfg.preset = preset;
      cfg.targets = split(has("targets") ? values["targets"] : "none,C,S", ',');
      for (const auto& t : cfg.targets) check_target_token(t);
      break;
    }
    case Command::RenderClassical:
      cfg.targets = split(has("targets") ? values["targets"] : "none,C,S", ',');
      for (const auto& t : cfg.targets) check_target_token(t);
      if (cfg.gamma_t_list.empty()) cfg.gamma_t_list = {0.0, 0.5, 1.0, 1.5, 2.0};
      break;
  }

  if (has("output-dir")) cfg.output_dir = values["output-dir"];
  else if (env_output_dir != nullptr && *env_output_dir != '\0') cfg.output_dir = env_output_dir;
  return cfg;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw Failure{CTQW_ERR_IO, "cannot create " + cfg.output_dir + ": " + ec.message()};
    switch (cfg.command) {
      case Command::Evolve: return run_evolve(cfg, out);
      case Command::Sweep: return run_sweep(cfg, out);
      case Command::Scaling: return run_scaling(cfg, out);
      case Command::Photonics: return run_photonics(cfg, out);
      case Command::RenderClassical: return run_render_classical(cfg, out);
    }
  } catch (const Failure& f) {
    err << "error: " << ctqw_status_name(f.status) << ": " << f.message << '\n';
    return 1;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  RunConfig cfg;
  try {
    cfg = parse_config(args, std::getenv("CTQW_OUTPUT_DIR"));
  } catch (const UsageError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  return execute(cfg, std::cout, std::cerr);
}

}  // namespace ctqw_cli
