#include "ctqw/photonics.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ctqw/error.hpp"
#include "ctqw/search.hpp"

using namespace ctqw;

namespace {

WaveguideArraySpec preset_array(const FabPreset& p, std::optional<TargetSpec> target, double length) {
  const auto g = build_paper31().with_spacing(p.spacing_um);
  WaveguideArraySpec spec{g, p.gamma_per_mm, p.beta_per_mm, std::nullopt, length, 633.0};
  if (target) spec.target = resolve_target(g, *target);
  return spec;
}

Eigen::Index argmax(const Eigen::VectorXd& v) {
  Eigen::Index k = 0;
  v.maxCoeff(&k);
  return k;
}

}  // namespace

TEST(CouplingLaw, TwoPointsExact) {
  const std::vector<std::pair<double, double>> pts{{20.0, 0.1}, {30.0, 0.02}};
  const auto law = fit_coupling_law(pts);
  EXPECT_NEAR(law(20.0), 0.1, 1e-14);
  EXPECT_NEAR(law(30.0), 0.02, 1e-14);
  EXPECT_NEAR(law.decay_length_um, 10.0 / std::log(5.0), 1e-12);
}

TEST(CouplingLaw, FabricationTableWithinFivePercent) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : fabrication_presets()) pts.emplace_back(p.spacing_um, p.gamma_per_mm);
  const auto law = fit_coupling_law(pts);
  for (const auto& [a, gamma] : pts) EXPECT_NEAR(law(a) / gamma, 1.0, 0.05) << a;
  EXPECT_NEAR(law(25.30), 0.047, 0.047 * 0.05);
}

TEST(CouplingLaw, Degenerate) {
  const std::vector<std::pair<double, double>> one{{20.0, 0.1}};
  const std::vector<std::pair<double, double>> same{{20.0, 0.1}, {20.0, 0.2}};
  for (const auto& pts : {one, same}) {
    try {
      fit_coupling_law(pts);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DegeneratePoints);
    }
  }
}

TEST(Presets, TableInvariants) {
  ASSERT_EQ(fabrication_presets().size(), 4u);
  for (const auto& p : fabrication_presets()) {
    EXPECT_GT(p.gamma_per_mm, 0.0);
    EXPECT_NEAR(p.beta_per_mm / p.gamma_per_mm / 4.1, 1.0, 0.05) << p.name;
    for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(p.gamma_t(k), p.tabulated_gamma_t[k], 0.005);
  }
  EXPECT_NEAR(fabrication_preset("A").gamma_t(1), 2.316, 1e-12);
  EXPECT_THROW(fabrication_preset("E"), Error);
}

TEST(Presets, ShippedFileMatchesCompiledTable) {
  std::ifstream in(CTQW_PRESETS_JSON);
  ASSERT_TRUE(in);
  std::stringstream text;
  text << in.rdbuf();
  const auto loaded = presets_from_json(text.str());
  const auto& table = fabrication_presets();
  ASSERT_EQ(loaded.size(), table.size());
  for (std::size_t k = 0; k < table.size(); ++k) {
    EXPECT_EQ(loaded[k].name, table[k].name);
    EXPECT_EQ(loaded[k].spacing_um, table[k].spacing_um);
    EXPECT_EQ(loaded[k].v_mm_s, table[k].v_mm_s);
    EXPECT_EQ(loaded[k].v0_mm_s, table[k].v0_mm_s);
    EXPECT_EQ(loaded[k].gamma_per_mm, table[k].gamma_per_mm);
    EXPECT_EQ(loaded[k].beta_per_mm, table[k].beta_per_mm);
    EXPECT_EQ(loaded[k].lengths_mm, table[k].lengths_mm);
    EXPECT_EQ(loaded[k].tabulated_gamma_t, table[k].tabulated_gamma_t);
  }
  const auto round_trip = presets_from_json(presets_to_json(table));
  EXPECT_EQ(round_trip.size(), 4u);
  EXPECT_EQ(round_trip[3].beta_per_mm, 0.17);
  EXPECT_THROW(presets_from_json("{\"presets\": [{}]}"), Error);
}

TEST(InputField, FlatBeamIsUniformState) {
  const auto spec = preset_array(fabrication_preset("C"), std::nullopt, 38.6);
  EXPECT_LE((input_field(spec, {}) - uniform_state(31)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(InputField, GaussianProfile) {
  const auto spec = preset_array(fabrication_preset("C"), std::nullopt, 38.6);
  const auto psi = input_field(spec, {400.0, 0.0, 0.0, {}});
  const Eigen::VectorXd p = psi.cwiseAbs2();
  const auto c = static_cast<Eigen::Index>(*resolve_target(spec.graph, TargetSpec::center()));
  EXPECT_EQ(argmax(p), c);
  const double w0 = 200.0;
  for (std::size_t v = 0; v < spec.graph.size(); ++v) {
    const auto pos = spec.graph.position_um(v);
    const double r2 = pos.x * pos.x + pos.y * pos.y;
    EXPECT_NEAR(p(static_cast<Eigen::Index>(v)) / p(c), std::exp(-2.0 * r2 / (w0 * w0)), 1e-12);
    if (static_cast<Eigen::Index>(v) != c) EXPECT_LT(p(static_cast<Eigen::Index>(v)), p(c));
  }
  EXPECT_NEAR(psi.norm(), 1.0, 1e-14);
}

TEST(InputField, TiltPhaseGradient) {
  const auto spec = preset_array(fabrication_preset("C"), std::nullopt, 38.6);
  const double theta = 2e-3;
  const auto psi = input_field(spec, {INFINITY, 2.0, 0.0, {}});
  const auto& g = spec.graph;
  const auto u = static_cast<Eigen::Index>(*g.index_of({0, 0}));
  const auto v = static_cast<Eigen::Index>(*g.index_of({1, 0}));
  const double expected = 2.0 * std::numbers::pi * 25.30 * std::sin(theta) / 0.633;
  EXPECT_NEAR(std::remainder(std::arg(psi(v) / psi(u)) - expected, 2.0 * std::numbers::pi), 0.0, 1e-12);
}

TEST(PropagateArray, ZeroLengthAndNorm) {
  auto spec = preset_array(fabrication_preset("A"), TargetSpec::center(), 0.0);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> dist;
  Eigen::VectorXcd psi(31);
  for (Eigen::Index k = 0; k < 31; ++k) psi(k) = {dist(rng), dist(rng)};
  psi.normalize();
  EXPECT_LE((propagate_array(spec, psi) - psi).cwiseAbs().maxCoeff(), 1e-14);
  spec.length_mm = 38.6;
  EXPECT_NEAR(propagate_array(spec, psi).norm(), 1.0, 1e-10);
}

TEST(PropagateArray, MatchesDimensionlessSearch) {
  const auto& a = fabrication_preset("A");
  const auto spec = preset_array(a, TargetSpec::center(), 38.6);
  const auto p = intensity_distribution(propagate_array(spec, input_field(spec, {})));
  const SearchModel model(spec.graph, *spec.target, a.beta_per_mm / a.gamma_per_mm);
  EXPECT_LE((p - model.quantum_sites(a.gamma_t(1))).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(argmax(p), static_cast<Eigen::Index>(*spec.target));
}

TEST(PropagateArray, SymmetricWithoutTilt) {
  const auto spec = preset_array(fabrication_preset("A"), std::nullopt, 38.6);
  for (double waist : {std::numeric_limits<double>::infinity(), 400.0}) {
    const auto p = intensity_distribution(propagate_array(spec, input_field(spec, {waist, 0.0, 0.0, {}})));
    EXPECT_LE(rotation_asymmetry(spec.graph, p), 1e-9);
  }
}

// Fixture: independent scipy expm evaluation, a = 25 um, gamma = 0.060/mm,
// 38.6 mm, 633 nm, flat beam tilted along x.
TEST(PropagateArray, TiltBreaksRotationSymmetry) {
  const auto g = build_paper31().with_spacing(25.0);
  const WaveguideArraySpec spec{g, 0.060, 0.25, std::nullopt, 38.6, 633.0};
  const auto asym = [&](double tilt) {
    return rotation_asymmetry(g, intensity_distribution(propagate_array(spec, input_field(spec, {INFINITY, tilt, 0.0, {}}))));
  };
  const double flat = asym(0.0);
  EXPECT_NEAR(asym(1.0), 0.04326499277713441, 1e-10);
  EXPECT_NEAR(asym(2.0), 0.08163080297407933, 1e-10);
  EXPECT_GT(asym(1.0), 10.0 * std::max(flat, 1e-12));
}

TEST(IntensityDistribution, Normalization) {
  Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(5);
  delta(2) = {0.0, 3.0};
  EXPECT_EQ(intensity_distribution(delta), Eigen::VectorXd::Unit(5, 2));
  const auto uni = intensity_distribution(uniform_state(7));
  EXPECT_LE((uni.array() - 1.0 / 7.0).abs().maxCoeff(), 1e-15);
  Eigen::VectorXcd arbitrary = Eigen::VectorXcd::Random(13);
  EXPECT_NEAR(intensity_distribution(arbitrary).sum(), 1.0, 1e-12);
  try {
    intensity_distribution(Eigen::VectorXcd::Zero(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroState);
  }
}

TEST(RenderFacet, SingleSpot) {
  const auto g = build_from_coords({{0, 0}}).with_spacing(25.0);
  const auto img = render_facet(g, Eigen::VectorXd::Ones(1), 13.0, 0.5);
  EXPECT_EQ(img.width, 105);
  EXPECT_EQ(img.height, 105);
  const auto [x, y] = img.pixel_of({0.0, 0.0});
  EXPECT_EQ(img.at(x, y), RasterImage::kFullScale);
  EXPECT_EQ(*std::max_element(img.pixels.begin(), img.pixels.end()), RasterImage::kFullScale);
  // 1/e^2 intensity at the mode radius.
  EXPECT_NEAR(img.at(x + 13, y) / 65535.0, std::exp(-2.0), 1e-4);
}

TEST(RenderFacet, TwoEqualPeaks) {
  const auto g = build_from_coords({{0, 0}, {1, 0}}).with_spacing(40.0);
  const auto img = render_facet(g, Eigen::VectorXd::Constant(2, 0.5), 13.0, 0.5);
  const auto [x0, y0] = img.pixel_of(g.position_um(0));
  const auto [x1, y1] = img.pixel_of(g.position_um(1));
  EXPECT_EQ(img.at(x0, y0), img.at(x1, y1));
  EXPECT_EQ(img.at(x0, y0), RasterImage::kFullScale);
}

TEST(RenderFacet, LinearUpToNormalization) {
  const auto g = build_paper31().with_spacing(25.0);
  const Eigen::VectorXd p = Eigen::VectorXd::LinSpaced(31, 1.0, 2.0);
  const auto a = render_facet(g, p, 13.0, 1.0);
  const auto b = render_facet(g, 7.0 * p, 13.0, 1.0);
  EXPECT_EQ(a.pixels, b.pixels);
}

TEST(RenderFacet, BrightestSpotOnTarget) {
  const auto& a = fabrication_preset("A");
  const auto spec = preset_array(a, TargetSpec::center(), 38.6);
  const auto p = intensity_distribution(propagate_array(spec, input_field(spec, {})));
  const auto img = render_facet(spec.graph, p, 13.0, 0.5);
  const auto peak = std::max_element(img.pixels.begin(), img.pixels.end()) - img.pixels.begin();
  const auto [x, y] = img.pixel_of(spec.graph.position_um(*spec.target));
  EXPECT_EQ(peak, static_cast<long>(y) * img.width + x);
}

TEST(RenderFacet, Errors) {
  EXPECT_THROW(render_facet(build_paper31(), Eigen::VectorXd::Ones(31), 13.0, 0.5), Error);
  const auto g = build_paper31().with_spacing(25.0);
  EXPECT_THROW(render_facet(g, Eigen::VectorXd::Ones(31), 0.0, 0.5), Error);
}

TEST(ClassicalSeries, UniformStartAndLimits) {
  const auto g = build_paper31().with_spacing(25.0);
  const auto w = *resolve_target(g, TargetSpec::center());
  EXPECT_LE((classical_distribution(g, w, 0.0).array() - 1.0 / 31.0).abs().maxCoeff(), 1e-15);

  // Stationary distribution of the undirected walk with generator D - A is uniform.
  const auto free = classical_distribution(g, std::nullopt, 200.0);
  EXPECT_LE((free.array() - 1.0 / 31.0).abs().maxCoeff(), 1e-10);
  EXPECT_GE(classical_distribution(g, w, 200.0)(static_cast<Eigen::Index>(w)), 1.0 - 1e-8);

  const std::vector<double> times{0.0, 1.0, 200.0};
  const auto images = classical_facet_series(g, TargetSpec::center(), times, 13.0, 0.5, 2);
  ASSERT_EQ(images.size(), 3u);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto [x, y] = images[0].pixel_of(g.position_um(v));
    EXPECT_GE(images[0].at(x, y), RasterImage::kFullScale - 700);
  }
  const auto [cx, cy] = images[2].pixel_of(g.position_um(w));
  EXPECT_EQ(images[2].at(cx, cy), RasterImage::kFullScale);
  const auto [ex, ey] = images[2].pixel_of(g.position_um(0));
  EXPECT_LT(images[2].at(ex, ey), 10);
  const auto serial = classical_facet_series(g, TargetSpec::center(), times, 13.0, 0.5, 1);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(serial[k].pixels, images[k].pixels);
}
