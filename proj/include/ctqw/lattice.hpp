#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ctqw {

/// Integer coordinates on the triangular Bravais lattice spanned by a and b,
/// |a| = |b|, 120 degrees apart.
struct LatticeCoord {
  int i = 0;
  int j = 0;

  auto operator<=>(const LatticeCoord&) const = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Embedded position in units of |a|.
Point2 embed(LatticeCoord c);

/// Hexagonal (graph) distance from the origin.
int hex_distance(LatticeCoord c);

bool are_neighbors(LatticeCoord u, LatticeCoord v);

/// Rotation by 60 degrees about the origin.
LatticeCoord rotate60(LatticeCoord c);

/// Finite triangular-lattice graph with dense 0/1 adjacency.
///
/// Immutable after construction. Adjacency is always derived from the
/// coordinate list, never supplied by the caller.
class Graph {
 public:
  Graph(std::vector<LatticeCoord> coords, std::optional<double> spacing_um,
        std::string id);

  std::size_t size() const { return coords_.size(); }
  const std::vector<LatticeCoord>& coords() const { return coords_; }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  std::optional<double> spacing_um() const { return spacing_um_; }
  const std::string& id() const { return id_; }

  int degree(std::size_t v) const;
  std::size_t edge_count() const;
  bool connected() const;
  std::optional<std::size_t> index_of(LatticeCoord c) const;

  /// Embedded position in micrometres; requires spacing.
  Point2 position_um(std::size_t v) const;

  Graph with_spacing(double spacing_um) const;
  Graph with_id(std::string id) const;

 private:
  std::vector<LatticeCoord> coords_;
  Eigen::MatrixXd adjacency_;
  std::optional<double> spacing_um_;
  std::string id_;
};

enum class TargetKind { None, C, S, FirstNeighbor, SecondNeighbor, Explicit };

struct TargetSpec {
  TargetKind kind = TargetKind::None;
  std::size_t index = 0;  // Explicit only

  static TargetSpec none() { return {TargetKind::None, 0}; }
  static TargetSpec center() { return {TargetKind::C, 0}; }
  static TargetSpec explicit_index(std::size_t k) { return {TargetKind::Explicit, k}; }

  bool operator==(const TargetSpec&) const = default;
};

/// Parses "none", "C", "S", "1N", "2N" or a non-negative integer index.
TargetSpec parse_target(const std::string& token);
std::string target_label(const TargetSpec& spec);

Graph build_hex_patch(int layers);
Graph build_paper31();
Graph build_from_coords(std::vector<LatticeCoord> coords,
                        std::optional<double> spacing_um = std::nullopt,
                        std::string id = "custom");

std::optional<std::size_t> resolve_target(const Graph& g, const TargetSpec& spec);

using Permutation = std::vector<std::size_t>;

/// Permutations induced by the six rotations about the origin that map the
/// coordinate set onto itself. perm[v] is the image of vertex v.
std::vector<Permutation> automorphism_orbit(const Graph& g);

Graph graph_from_json(const std::string& text, std::string id = "file");
std::string graph_to_json(const Graph& g);

}  // namespace ctqw
