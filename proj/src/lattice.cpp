#include "ctqw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <set>

#include "json.hpp"

#include "ctqw/error.hpp"

namespace ctqw {

namespace {

constexpr double kSin120 = std::numbers::sqrt3 / 2.0;
constexpr double kCos120 = -0.5;

const std::vector<LatticeCoord> kNeighborSteps = {
    {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}};

}  // namespace

Point2 embed(LatticeCoord c) {
  return {c.i + c.j * kCos120, c.j * kSin120};
}

int hex_distance(LatticeCoord c) {
  return std::max({std::abs(c.i), std::abs(c.j), std::abs(c.i - c.j)});
}

bool are_neighbors(LatticeCoord u, LatticeCoord v) {
  const LatticeCoord d{v.i - u.i, v.j - u.j};
  return std::find(kNeighborSteps.begin(), kNeighborSteps.end(), d) !=
         kNeighborSteps.end();
}

// a -> a + b, b -> -a
LatticeCoord rotate60(LatticeCoord c) { return {c.i - c.j, c.i}; }

Graph::Graph(std::vector<LatticeCoord> coords, std::optional<double> spacing_um,
             std::string id)
    : coords_(std::move(coords)), spacing_um_(spacing_um), id_(std::move(id)) {
  if (coords_.empty())
    throw Error(ErrorCode::EmptyGraph, "graph needs at least one coordinate");
  if (spacing_um_ && !(*spacing_um_ > 0.0 && std::isfinite(*spacing_um_)))
    throw Error(ErrorCode::InvalidArgument, "spacing_um must be positive");

  std::set<LatticeCoord> seen;
  for (const auto& c : coords_) {
    if (!seen.insert(c).second)
      throw Error(ErrorCode::DuplicateCoordinate,
                  "duplicate coordinate (" + std::to_string(c.i) + "," +
                      std::to_string(c.j) + ")");
  }

  const auto n = static_cast<Eigen::Index>(coords_.size());
  adjacency_ = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u)
    for (Eigen::Index v = u + 1; v < n; ++v)
      if (are_neighbors(coords_[u], coords_[v])) {
        adjacency_(u, v) = 1.0;
        adjacency_(v, u) = 1.0;
      }
}

int Graph::degree(std::size_t v) const {
  return static_cast<int>(adjacency_.row(static_cast<Eigen::Index>(v)).sum());
}

std::size_t Graph::edge_count() const {
  return static_cast<std::size_t>(adjacency_.sum() / 2.0);
}

bool Graph::connected() const {
  std::vector<bool> visited(size(), false);
  std::vector<std::size_t> stack{0};
  visited[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < size(); ++v) {
      if (!visited[v] && adjacency_(u, v) != 0.0) {
        visited[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == size();
}

std::optional<std::size_t> Graph::index_of(LatticeCoord c) const {
  const auto it = std::find(coords_.begin(), coords_.end(), c);
  if (it == coords_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - coords_.begin());
}

Point2 Graph::position_um(std::size_t v) const {
  if (!spacing_um_)
    throw Error(ErrorCode::InvalidArgument, "graph has no spacing_um set");
  const auto p = embed(coords_.at(v));
  return {p.x * *spacing_um_, p.y * *spacing_um_};
}

Graph Graph::with_spacing(double spacing_um) const {
  return Graph(coords_, spacing_um, id_);
}

Graph Graph::with_id(std::string id) const {
  return Graph(coords_, spacing_um_, std::move(id));
}

TargetSpec parse_target(const std::string& token) {
  if (token == "none" || token == "None") return TargetSpec::none();
  if (token == "C") return TargetSpec::center();
  if (token == "S") return {TargetKind::S, 0};
  if (token == "1N") return {TargetKind::FirstNeighbor, 0};
  if (token == "2N") return {TargetKind::SecondNeighbor, 0};
  if (!token.empty() &&
      std::all_of(token.begin(), token.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
    return TargetSpec::explicit_index(std::stoul(token));
  throw Error(ErrorCode::InvalidArgument,
              "unknown target '" + token + "' (expected none, C, S, 1N, 2N or an index)");
}

std::string target_label(const TargetSpec& spec) {
  switch (spec.kind) {
    case TargetKind::None: return "none";
    case TargetKind::C: return "C";
    case TargetKind::S: return "S";
    case TargetKind::FirstNeighbor: return "1N";
    case TargetKind::SecondNeighbor: return "2N";
    case TargetKind::Explicit: return std::to_string(spec.index);
  }
  return "?";
}

Graph build_hex_patch(int layers) {
  if (layers < 0)
    throw Error(ErrorCode::InvalidArgument, "layers must be non-negative");
  std::vector<LatticeCoord> coords;
  for (int i = -layers; i <= layers; ++i)
    for (int j = -layers; j <= layers; ++j)
      if (hex_distance({i, j}) <= layers) coords.push_back({i, j});
  return Graph(std::move(coords), std::nullopt, "hex:" + std::to_string(layers));
}

Graph build_paper31() {
  std::vector<LatticeCoord> coords;
  LatticeCoord corner{3, 0};
  std::set<LatticeCoord> corners;
  for (int k = 0; k < 6; ++k) {
    corners.insert(corner);
    corner = rotate60(corner);
  }
  const Graph hex = build_hex_patch(3);
  for (const auto& c : hex.coords())
    if (!corners.contains(c)) coords.push_back(c);
  return Graph(std::move(coords), std::nullopt, "paper31");
}

Graph build_from_coords(std::vector<LatticeCoord> coords,
                        std::optional<double> spacing_um, std::string id) {
  return Graph(std::move(coords), spacing_um, std::move(id));
}

std::optional<std::size_t> resolve_target(const Graph& g, const TargetSpec& spec) {
  if (spec.kind == TargetKind::None) return std::nullopt;
  if (spec.kind == TargetKind::Explicit) {
    if (spec.index >= g.size())
      throw Error(ErrorCode::TargetNotInGraph,
                  "explicit target " + std::to_string(spec.index) +
                      " out of range for graph of size " + std::to_string(g.size()));
    return spec.index;
  }

  const auto center = g.index_of({0, 0});
  if (!center)
    throw Error(ErrorCode::TargetNotInGraph, "graph does not contain the origin (0,0)");
  if (spec.kind == TargetKind::C) return center;

  // Hex distance 1 is embedded distance |a|; hex distance 2 with i != 0, j != 0
  // and i != j is embedded distance sqrt(3)|a|.
  const auto wanted = [&](LatticeCoord c) {
    if (spec.kind == TargetKind::SecondNeighbor)
      return hex_distance(c) == 2 && c.i != 0 && c.j != 0 && c.i != c.j;
    return hex_distance(c) == 1;
  };
  std::optional<LatticeCoord> best;
  for (const auto& c : g.coords())
    if (wanted(c) && (!best || c < *best)) best = c;
  if (!best)
    throw Error(ErrorCode::TargetNotInGraph,
                "target " + target_label(spec) + " does not exist in graph " + g.id());
  return g.index_of(*best);
}

std::vector<Permutation> automorphism_orbit(const Graph& g) {
  std::vector<Permutation> perms;
  std::vector<LatticeCoord> rotated = g.coords();
  for (int k = 0; k < 6; ++k) {
    Permutation perm(g.size());
    bool ok = true;
    for (std::size_t v = 0; v < g.size() && ok; ++v) {
      const auto image = g.index_of(rotated[v]);
      if (image) perm[v] = *image; else ok = false;
    }
    if (ok) perms.push_back(std::move(perm));
    for (auto& c : rotated) c = rotate60(c);
  }
  return perms;
}

Graph graph_from_json(const std::string& text, std::string id) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("graph JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("coords") || !doc["coords"].is_array())
    throw Error(ErrorCode::InvalidArgument, "graph JSON needs a \"coords\" array");
  std::vector<LatticeCoord> coords;
  for (const auto& entry : doc["coords"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() ||
        !entry[1].is_number_integer())
      throw Error(ErrorCode::InvalidArgument, "graph JSON coords must be [i, j] integer pairs");
    coords.push_back({entry[0].get<int>(), entry[1].get<int>()});
  }
  std::optional<double> spacing;
  if (doc.contains("spacing_um") && !doc["spacing_um"].is_null()) {
    if (!doc["spacing_um"].is_number())
      throw Error(ErrorCode::InvalidArgument, "spacing_um must be a number");
    spacing = doc["spacing_um"].get<double>();
  }
  return Graph(std::move(coords), spacing, std::move(id));
}

std::string graph_to_json(const Graph& g) {
  nlohmann::json doc;
  doc["coords"] = nlohmann::json::array();
  for (const auto& c : g.coords()) doc["coords"].push_back({c.i, c.j});
  if (g.spacing_um()) doc["spacing_um"] = *g.spacing_um();
  else doc["spacing_um"] = nullptr;
  return doc.dump();
}

}  // namespace ctqw
