#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace quasim::qgnn {

/// Highest vertex degree any submodel supports (9 qubits).
inline constexpr std::size_t kMaxSupportedDegree = 8;

struct GridShape {
  std::size_t nx = 0;
  std::size_t ny = 0;
  friend bool operator==(const GridShape&, const GridShape&) = default;
};

struct Edge {
  std::size_t a;  // a < b
  std::size_t b;
};

/// Undirected mesh graph with one real feature per edge. Neighbor lists are
/// sorted by vertex id; `neighbor_features(v)[k]` belongs to `neighbors(v)[k]`.
class MeshGraph {
 public:
  MeshGraph() = default;
  /// `edge_features` defaults to 1.0 per edge. Rejects self-loops, duplicate
  /// edges, out-of-range endpoints and degrees above kMaxSupportedDegree.
  MeshGraph(std::size_t n_vertices, std::vector<std::pair<std::size_t, std::size_t>> edges,
            std::vector<double> edge_features = {}, std::optional<GridShape> grid = std::nullopt);

  std::size_t n_vertices() const noexcept { return adjacency_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const double> edge_features() const noexcept { return edge_features_; }
  std::span<const std::size_t> neighbors(std::size_t v) const { return adjacency_.at(v); }
  std::span<const double> neighbor_features(std::size_t v) const { return adjacency_features_.at(v); }
  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }
  std::size_t max_degree() const noexcept;
  /// Sorted distinct degrees present.
  std::vector<std::size_t> degree_set() const;
  const std::optional<GridShape>& grid() const noexcept { return grid_; }

  /// Same graph with vertex v renamed to perm[v]. Grid metadata is dropped.
  MeshGraph relabeled(std::span<const std::size_t> perm) const;

 private:
  std::vector<Edge> edges_;
  std::vector<double> edge_features_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::vector<double>> adjacency_features_;
  std::optional<GridShape> grid_;
};

/// Per-vertex node feature (temperature) at time step `t`.
struct NodeFrame {
  std::size_t t = 0;
  std::vector<double> values;
};

}  // namespace quasim::qgnn
