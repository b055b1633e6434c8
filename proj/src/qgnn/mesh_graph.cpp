#include "quasim/qgnn/mesh_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "quasim/error.hpp"

namespace quasim::qgnn {

MeshGraph::MeshGraph(std::size_t n_vertices, std::vector<std::pair<std::size_t, std::size_t>> edges,
                     std::vector<double> edge_features, std::optional<GridShape> grid)
    : grid_(grid) {
  if (edge_features.empty()) edge_features.assign(edges.size(), 1.0);
  if (edge_features.size() != edges.size())
    throw InvalidArgument("edge feature count " + std::to_string(edge_features.size()) + " != edge count " +
                          std::to_string(edges.size()));
  if (grid_ && grid_->nx * grid_->ny != n_vertices) throw InvalidArgument("grid shape does not match vertex count");

  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto& [a, b] = edges[i];
    if (a >= n_vertices || b >= n_vertices)
      throw InvalidArgument("edge (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range");
    if (a == b) throw InvalidArgument("self-loop at vertex " + std::to_string(a));
    if (!std::isfinite(edge_features[i])) throw InvalidArgument("non-finite edge feature");
    if (a > b) std::swap(a, b);
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return edges[x] < edges[y]; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& e = edges[order[k]];
    if (k > 0 && edges[order[k - 1]] == e)
      throw InvalidArgument("duplicate edge (" + std::to_string(e.first) + ", " + std::to_string(e.second) + ")");
    edges_.push_back({e.first, e.second});
    edge_features_.push_back(edge_features[order[k]]);
  }

  adjacency_.assign(n_vertices, {});
  adjacency_features_.assign(n_vertices, {});
  std::vector<std::vector<std::pair<std::size_t, double>>> tmp(n_vertices);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    tmp[edges_[i].a].emplace_back(edges_[i].b, edge_features_[i]);
    tmp[edges_[i].b].emplace_back(edges_[i].a, edge_features_[i]);
  }
  for (std::size_t v = 0; v < n_vertices; ++v) {
    if (tmp[v].size() > kMaxSupportedDegree)
      throw InvalidArgument("vertex " + std::to_string(v) + " has degree " + std::to_string(tmp[v].size()) +
                            " above the supported maximum " + std::to_string(kMaxSupportedDegree));
    std::sort(tmp[v].begin(), tmp[v].end());
    for (const auto& [w, f] : tmp[v]) {
      adjacency_[v].push_back(w);
      adjacency_features_[v].push_back(f);
    }
  }
}

std::size_t MeshGraph::max_degree() const noexcept {
  std::size_t m = 0;
  for (const auto& nb : adjacency_) m = std::max(m, nb.size());
  return m;
}

std::vector<std::size_t> MeshGraph::degree_set() const {
  std::vector<std::size_t> d;
  for (const auto& nb : adjacency_) d.push_back(nb.size());
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

MeshGraph MeshGraph::relabeled(std::span<const std::size_t> perm) const {
  const std::size_t n = n_vertices();
  if (perm.size() != n) throw InvalidArgument("permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw InvalidArgument("not a permutation");
    seen[p] = true;
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const Edge& e : edges_) edges.emplace_back(perm[e.a], perm[e.b]);
  return MeshGraph(n, std::move(edges), edge_features_);
}

}  // namespace quasim::qgnn
