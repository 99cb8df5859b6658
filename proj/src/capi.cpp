#include "ctqw/ctqw.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ctqw/error.hpp"
#include "ctqw/io.hpp"
#include "ctqw/lattice.hpp"
#include "ctqw/photonics.hpp"
#include "ctqw/search.hpp"

struct ctqw_graph {
  ctqw::Graph graph;
};

struct ctqw_series {
  ctqw::EvolutionSeries series;
};

struct ctqw_scaling_table {
  std::vector<ctqw::ScalingRecord> records;
};

struct ctqw_image {
  ctqw::RasterImage image;
};

namespace {

thread_local std::string last_error;

ctqw_status to_status(ctqw::ErrorCode code) {
  using ctqw::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return CTQW_ERR_INVALID_ARGUMENT;
    case ErrorCode::DuplicateCoordinate: return CTQW_ERR_DUPLICATE_COORDINATE;
    case ErrorCode::TargetNotInGraph: return CTQW_ERR_TARGET_NOT_IN_GRAPH;
    case ErrorCode::TargetOutOfRange: return CTQW_ERR_TARGET_OUT_OF_RANGE;
    case ErrorCode::NotSymmetric: return CTQW_ERR_NOT_SYMMETRIC;
    case ErrorCode::ConvergenceFailure: return CTQW_ERR_CONVERGENCE;
    case ErrorCode::NonFinite: return CTQW_ERR_NON_FINITE;
    case ErrorCode::StepCountTooSmall: return CTQW_ERR_STEP_COUNT;
    case ErrorCode::DivisionDomain: return CTQW_ERR_DIVISION_DOMAIN;
    case ErrorCode::DegeneratePoints: return CTQW_ERR_DEGENERATE_POINTS;
    case ErrorCode::ZeroState: return CTQW_ERR_ZERO_STATE;
    case ErrorCode::EmptyGraph: return CTQW_ERR_EMPTY_GRAPH;
    case ErrorCode::NegativeProbability: return CTQW_ERR_NEGATIVE_PROBABILITY;
    case ErrorCode::Io: return CTQW_ERR_IO;
  }
  return CTQW_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes at the C boundary.
template <typename Fn>
ctqw_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return CTQW_OK;
  } catch (const ctqw::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return CTQW_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CTQW_ERR_INTERNAL;
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw ctqw::Error(ctqw::ErrorCode::InvalidArgument, what);
}

ctqw::TargetSpec to_spec(ctqw_target t) {
  switch (t.kind) {
    case CTQW_TARGET_NONE: return ctqw::TargetSpec::none();
    case CTQW_TARGET_C: return ctqw::TargetSpec::center();
    case CTQW_TARGET_S: return {ctqw::TargetKind::S, 0};
    case CTQW_TARGET_1N: return {ctqw::TargetKind::FirstNeighbor, 0};
    case CTQW_TARGET_2N: return {ctqw::TargetKind::SecondNeighbor, 0};
    case CTQW_TARGET_EXPLICIT: return ctqw::TargetSpec::explicit_index(t.index);
  }
  throw ctqw::Error(ctqw::ErrorCode::InvalidArgument, "unknown target kind");
}

ctqw_target from_spec(const ctqw::TargetSpec& s) {
  switch (s.kind) {
    case ctqw::TargetKind::None: return {CTQW_TARGET_NONE, 0};
    case ctqw::TargetKind::C: return {CTQW_TARGET_C, 0};
    case ctqw::TargetKind::S: return {CTQW_TARGET_S, 0};
    case ctqw::TargetKind::FirstNeighbor: return {CTQW_TARGET_1N, 0};
    case ctqw::TargetKind::SecondNeighbor: return {CTQW_TARGET_2N, 0};
    case ctqw::TargetKind::Explicit: return {CTQW_TARGET_EXPLICIT, s.index};
  }
  return {CTQW_TARGET_NONE, 0};
}

std::span<const double> view(const double* data, std::size_t len) {
  require(data != nullptr || len == 0, "null array");
  return {data, len};
}

Eigen::VectorXd vector_of(const double* data, std::size_t len) {
  require(data != nullptr, "null array");
  return Eigen::Map<const Eigen::VectorXd>(data, static_cast<Eigen::Index>(len));
}

void copy_out(const Eigen::VectorXd& v, double* out) {
  require(out != nullptr, "null output");
  std::copy(v.data(), v.data() + v.size(), out);
}

template <typename Handle, typename... Args>
void emit(Handle** out, Args&&... args) {
  require(out != nullptr, "null output handle");
  *out = new Handle{std::forward<Args>(args)...};
}

void fill_preset(const ctqw::FabPreset& p, ctqw_preset* out) {
  require(out != nullptr, "null output");
  std::memset(out, 0, sizeof(*out));
  std::strncpy(out->name, p.name.c_str(), sizeof(out->name) - 1);
  out->spacing_um = p.spacing_um;
  out->v_mm_s = p.v_mm_s;
  out->v0_mm_s = p.v0_mm_s;
  out->gamma_per_mm = p.gamma_per_mm;
  out->beta_per_mm = p.beta_per_mm;
  out->lengths_mm[0] = p.lengths_mm[0];
  out->lengths_mm[1] = p.lengths_mm[1];
  out->tabulated_gamma_t[0] = p.tabulated_gamma_t[0];
  out->tabulated_gamma_t[1] = p.tabulated_gamma_t[1];
}

}  // namespace

extern "C" {

const char* ctqw_version(void) { return "1.0.0"; }

const char* ctqw_status_name(ctqw_status status) {
  switch (status) {
    case CTQW_OK: return "OK";
    case CTQW_ERR_INTERNAL: return "Internal";
    default: return ctqw::to_string(static_cast<ctqw::ErrorCode>(status));
  }
}

const char* ctqw_last_error(void) { return last_error.c_str(); }

ctqw_status ctqw_parse_target(const char* token, ctqw_target* out) {
  return guarded([&] {
    require(token != nullptr && out != nullptr, "null argument");
    *out = from_spec(ctqw::parse_target(token));
  });
}

ctqw_status ctqw_target_label(ctqw_target target, char* buf, size_t buf_size) {
  return guarded([&] {
    const auto label = ctqw::target_label(to_spec(target));
    require(buf != nullptr && buf_size > label.size(), "label buffer too small");
    std::memcpy(buf, label.c_str(), label.size() + 1);
  });
}

ctqw_status ctqw_graph_hex(int layers, ctqw_graph** out) {
  return guarded([&] { emit(out, ctqw::build_hex_patch(layers)); });
}

ctqw_status ctqw_graph_paper31(ctqw_graph** out) {
  return guarded([&] { emit(out, ctqw::build_paper31()); });
}

ctqw_status ctqw_graph_from_coords(const int* ij, size_t n, double spacing_um, ctqw_graph** out) {
  return guarded([&] {
    require(ij != nullptr || n == 0, "null coordinate array");
    std::vector<ctqw::LatticeCoord> coords(n);
    for (size_t k = 0; k < n; ++k) coords[k] = {ij[2 * k], ij[2 * k + 1]};
    std::optional<double> spacing;
    if (spacing_um > 0.0) spacing = spacing_um;
    emit(out, ctqw::build_from_coords(std::move(coords), spacing));
  });
}

ctqw_status ctqw_graph_from_json(const char* json, const char* id, ctqw_graph** out) {
  return guarded([&] {
    require(json != nullptr, "null JSON");
    emit(out, ctqw::graph_from_json(json, id ? id : "json"));
  });
}

ctqw_status ctqw_graph_load(const char* path, ctqw_graph** out) {
  return guarded([&] {
    require(path != nullptr, "null path");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ctqw::Error(ctqw::ErrorCode::Io, std::string("cannot open ") + path);
    std::ostringstream text;
    text << in.rdbuf();
    emit(out, ctqw::graph_from_json(text.str(),
                                    "file:" + std::filesystem::path(path).stem().string()));
  });
}

ctqw_status ctqw_graph_with_spacing(const ctqw_graph* g, double spacing_um, ctqw_graph** out) {
  return guarded([&] {
    require(g != nullptr, "null graph");
    emit(out, g->graph.with_spacing(spacing_um));
  });
}

void ctqw_graph_free(ctqw_graph* g) { delete g; }

size_t ctqw_graph_size(const ctqw_graph* g) { return g ? g->graph.size() : 0; }

size_t ctqw_graph_edge_count(const ctqw_graph* g) { return g ? g->graph.edge_count() : 0; }

double ctqw_graph_spacing(const ctqw_graph* g) {
  return g && g->graph.spacing_um() ? *g->graph.spacing_um() : 0.0;
}

const char* ctqw_graph_id(const ctqw_graph* g) { return g ? g->graph.id().c_str() : ""; }

ctqw_status ctqw_graph_to_json(const ctqw_graph* g, char** out) {
  return guarded([&] {
    require(g != nullptr && out != nullptr, "null argument");
    const auto text = ctqw::graph_to_json(g->graph);
    auto* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void ctqw_string_free(char* s) { delete[] s; }

ctqw_status ctqw_resolve_target(const ctqw_graph* g, ctqw_target target, int* found,
                                size_t* index) {
  return guarded([&] {
    require(g != nullptr && found != nullptr && index != nullptr, "null argument");
    const auto w = ctqw::resolve_target(g->graph, to_spec(target));
    *found = w ? 1 : 0;
    *index = w.value_or(0);
  });
}

ctqw_status ctqw_graph_rotations(const ctqw_graph* g, size_t* count, size_t* perms,
                                 size_t perms_capacity) {
  return guarded([&] {
    require(g != nullptr && count != nullptr, "null argument");
    const auto orbit = ctqw::automorphism_orbit(g->graph);
    *count = orbit.size();
    if (perms == nullptr) return;
    require(perms_capacity >= orbit.size() * g->graph.size(), "permutation buffer too small");
    for (const auto& p : orbit) perms = std::copy(p.begin(), p.end(), perms);
  });
}

ctqw_status ctqw_run_search(const ctqw_graph* g, ctqw_target target, double beta_over_gamma,
                            const double* gamma_t_grid, size_t grid_len, ctqw_series** out) {
  return guarded([&] {
    require(g != nullptr, "null graph");
    emit(out, ctqw::run_search(g->graph, to_spec(target), beta_over_gamma,
                               view(gamma_t_grid, grid_len)));
  });
}

void ctqw_series_free(ctqw_series* s) { delete s; }

size_t ctqw_series_length(const ctqw_series* s) {
  return s ? s->series.gamma_t_grid.size() : 0;
}

size_t ctqw_series_target(const ctqw_series* s) { return s ? s->series.target : 0; }

ctqw_status ctqw_series_target_curves(const ctqw_series* s, double* p_quantum,
                                      double* p_classical, double* ratio) {
  return guarded([&] {
    require(s != nullptr, "null series");
    if (p_quantum) {
      const auto pq = s->series.quantum_target_prob();
      std::copy(pq.begin(), pq.end(), p_quantum);
    }
    if (p_classical)
      std::copy(s->series.classical_target_prob.begin(), s->series.classical_target_prob.end(),
                p_classical);
    if (ratio) {
      const auto r = ctqw::ratio_series(s->series);
      std::copy(r.ratio.begin(), r.ratio.end(), ratio);
    }
  });
}

ctqw_status ctqw_series_site_probs(const ctqw_series* s, size_t k, double* out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "null argument");
    require(k < s->series.gamma_t_grid.size(), "time index out of range");
    copy_out(s->series.quantum_site_probs.row(static_cast<Eigen::Index>(k)).transpose(), out);
  });
}

ctqw_status ctqw_series_optimal_time(const ctqw_series* s, int refine, double* t_opt,
                                     double* r_opt) {
  return guarded([&] {
    require(s != nullptr && t_opt != nullptr && r_opt != nullptr, "null argument");
    const auto opt = ctqw::optimal_time(ctqw::ratio_series(s->series), refine != 0);
    *t_opt = opt.t_opt;
    *r_opt = opt.r_opt;
  });
}

ctqw_status ctqw_series_write_csv(const ctqw_series* s, const char* path) {
  return guarded([&] {
    require(s != nullptr && path != nullptr, "null argument");
    ctqw::write_file_atomic(path, ctqw::curves_csv(s->series));
  });
}

ctqw_status ctqw_beta_time_heatmap(const ctqw_graph* g, ctqw_target target,
                                   const double* beta_grid, size_t beta_len,
                                   const double* gamma_t_grid, size_t grid_len, unsigned threads,
                                   double* out) {
  return guarded([&] {
    require(g != nullptr && out != nullptr, "null argument");
    const Eigen::MatrixXd m = ctqw::beta_time_heatmap(
        g->graph, to_spec(target), view(beta_grid, beta_len), view(gamma_t_grid, grid_len),
        threads);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) *out++ = m(r, c);
  });
}

ctqw_status ctqw_write_heatmap_csv(const double* beta_grid, size_t beta_len,
                                   const double* gamma_t_grid, size_t grid_len,
                                   const double* probs, const char* path) {
  return guarded([&] {
    require(probs != nullptr && path != nullptr, "null argument");
    const Eigen::MatrixXd m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                            Eigen::Dynamic, Eigen::RowMajor>>(
        probs, static_cast<Eigen::Index>(beta_len), static_cast<Eigen::Index>(grid_len));
    ctqw::write_file_atomic(path, ctqw::heatmap_csv(view(beta_grid, beta_len),
                                                    view(gamma_t_grid, grid_len), m));
  });
}

ctqw_scaling_options ctqw_scaling_defaults(void) {
  const ctqw::ScalingOptions d;
  return {d.window_factor, d.step, d.refine ? 1 : 0, d.threads};
}

ctqw_status ctqw_scaling_run(const int* layers, size_t layers_len, const ctqw_target* targets,
                             size_t targets_len, const double* betas, size_t betas_len,
                             const ctqw_scaling_options* options, ctqw_scaling_table** out) {
  return guarded([&] {
    require(layers != nullptr && targets != nullptr && betas != nullptr, "null argument");
    ctqw::ScalingOptions opts;
    if (options) {
      opts.window_factor = options->window_factor;
      opts.step = options->step;
      opts.refine = options->refine != 0;
      opts.threads = options->threads;
    }
    std::vector<ctqw::TargetSpec> specs;
    for (size_t k = 0; k < targets_len; ++k) specs.push_back(to_spec(targets[k]));
    emit(out, ctqw::beta_size_surface(std::span<const int>(layers, layers_len), specs,
                                      view(betas, betas_len), opts));
  });
}

void ctqw_scaling_free(ctqw_scaling_table* t) { delete t; }

size_t ctqw_scaling_size(const ctqw_scaling_table* t) { return t ? t->records.size() : 0; }

ctqw_status ctqw_scaling_get(const ctqw_scaling_table* t, size_t k, ctqw_scaling_record* out) {
  return guarded([&] {
    require(t != nullptr && out != nullptr, "null argument");
    require(k < t->records.size(), "record index out of range");
    const auto& r = t->records[k];
    *out = {r.n, r.layers, from_spec(r.target), r.beta_over_gamma,
            r.t_opt, r.r_opt, r.pq_opt, r.pc_opt};
  });
}

ctqw_status ctqw_scaling_write_csv(const ctqw_scaling_table* t, const char* path) {
  return guarded([&] {
    require(t != nullptr && path != nullptr, "null argument");
    ctqw::write_file_atomic(path, ctqw::scaling_csv(t->records));
  });
}

size_t ctqw_preset_count(void) { return ctqw::fabrication_presets().size(); }

ctqw_status ctqw_preset_at(size_t k, ctqw_preset* out) {
  return guarded([&] {
    require(k < ctqw::fabrication_presets().size(), "preset index out of range");
    fill_preset(ctqw::fabrication_presets()[k], out);
  });
}

ctqw_status ctqw_preset_find(const char* name, ctqw_preset* out) {
  return guarded([&] {
    require(name != nullptr, "null name");
    fill_preset(ctqw::fabrication_preset(name), out);
  });
}

ctqw_status ctqw_presets_write_json(const char* path) {
  return guarded([&] {
    require(path != nullptr, "null path");
    ctqw::write_file_atomic(path, ctqw::presets_to_json(ctqw::fabrication_presets()) + "\n");
  });
}

ctqw_status ctqw_fit_coupling_law(const double* spacing_um, const double* gamma_per_mm, size_t n,
                                  double* gamma0, double* decay_length_um) {
  return guarded([&] {
    require(spacing_um != nullptr && gamma_per_mm != nullptr, "null argument");
    require(gamma0 != nullptr && decay_length_um != nullptr, "null output");
    std::vector<std::pair<double, double>> points;
    for (size_t k = 0; k < n; ++k) points.emplace_back(spacing_um[k], gamma_per_mm[k]);
    const auto law = ctqw::fit_coupling_law(points);
    *gamma0 = law.gamma0;
    *decay_length_um = law.decay_length_um;
  });
}

ctqw_status ctqw_photonics_propagate(const ctqw_graph* g, const ctqw_array_params* array,
                                     const ctqw_beam_params* beam, double* intensities) {
  return guarded([&] {
    require(g != nullptr && array != nullptr && beam != nullptr, "null argument");
    ctqw::WaveguideArraySpec spec{g->graph,
                                  array->gamma_per_mm,
                                  array->beta_per_mm,
                                  ctqw::resolve_target(g->graph, to_spec(array->target)),
                                  array->length_mm,
                                  array->wavelength_nm};
    ctqw::BeamSpec b;
    if (beam->waist_diameter_um > 0.0) b.waist_diameter_um = beam->waist_diameter_um;
    b.tilt_x_mrad = beam->tilt_x_mrad;
    b.tilt_y_mrad = beam->tilt_y_mrad;
    b.offset_um = {beam->offset_x_um, beam->offset_y_um};
    copy_out(ctqw::intensity_distribution(
                 ctqw::propagate_array(spec, ctqw::input_field(spec, b))),
             intensities);
  });
}

ctqw_status ctqw_rotation_asymmetry(const ctqw_graph* g, const double* probs, double* out) {
  return guarded([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = ctqw::rotation_asymmetry(g->graph, vector_of(probs, g->graph.size()));
  });
}

ctqw_status ctqw_classical_distribution(const ctqw_graph* g, ctqw_target target, double gamma_t,
                                        double* out) {
  return guarded([&] {
    require(g != nullptr, "null graph");
    copy_out(ctqw::classical_distribution(g->graph, ctqw::resolve_target(g->graph, to_spec(target)),
                                          gamma_t),
             out);
  });
}

ctqw_status ctqw_write_distribution_csv(const ctqw_graph* g, const double* probs,
                                        const char* path) {
  return guarded([&] {
    require(g != nullptr && path != nullptr, "null argument");
    ctqw::write_file_atomic(path, ctqw::distribution_csv(g->graph, vector_of(probs, g->graph.size())));
  });
}

ctqw_status ctqw_render_facet(const ctqw_graph* g, const double* intensities,
                              double mode_diameter_um, double scale_um_per_px, ctqw_image** out) {
  return guarded([&] {
    require(g != nullptr, "null graph");
    emit(out, ctqw::render_facet(g->graph, vector_of(intensities, g->graph.size()),
                                 mode_diameter_um, scale_um_per_px));
  });
}

void ctqw_image_free(ctqw_image* img) { delete img; }

int ctqw_image_width(const ctqw_image* img) { return img ? img->image.width : 0; }

int ctqw_image_height(const ctqw_image* img) { return img ? img->image.height : 0; }

const uint16_t* ctqw_image_pixels(const ctqw_image* img) {
  return img ? img->image.pixels.data() : nullptr;
}

ctqw_status ctqw_image_write_pgm(const ctqw_image* img, const char* comment, const char* path) {
  return guarded([&] {
    require(img != nullptr && path != nullptr, "null argument");
    ctqw::write_file_atomic(path, ctqw::encode_pgm(img->image, comment ? comment : ""));
  });
}

}  // extern "C"
