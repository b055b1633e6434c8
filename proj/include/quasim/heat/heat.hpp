#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "quasim/qgnn/mesh_graph.hpp"

namespace quasim::heat {

using qgnn::MeshGraph;
using qgnn::NodeFrame;

/// 4-connected nx-by-ny grid, vertex (x, y) = y * nx + x, edge features 1.0.
/// Throws InvalidArgument when either side is below 2.
MeshGraph build_grid_mesh(std::size_t nx, std::size_t ny);

/// One vertex index per time step; -1 means the laser is off.
struct LaserPath {
  std::vector<std::int64_t> positions;

  std::size_t size() const noexcept { return positions.size(); }
  bool empty() const noexcept { return positions.empty(); }
  /// Repeats the path cyclically until it has `length` entries.
  LaserPath tiled(std::size_t length) const;
};

struct Boundary {
  enum class Kind { Insulated, Fixed };
  Kind kind = Kind::Insulated;
  double value = 0.0;  // Fixed only

  static Boundary insulated() { return {}; }
  static Boundary fixed(double v) { return {Kind::Fixed, v}; }
};

struct HeatScenario {
  std::shared_ptr<const MeshGraph> mesh;
  double alpha_dt = 0.1;
  double source_power = 1.0;
  LaserPath path;
  Boundary boundary;
  double initial_temperature = 0.0;

  /// Checks alpha_dt * d_max < 1 (NumericalError) and the remaining fields
  /// (InvalidArgument). A fixed boundary needs a grid mesh.
  void validate() const;
  NodeFrame initial_frame() const;
};

/// Vertices on the outer ring of a grid.
std::vector<bool> boundary_mask(const MeshGraph& grid);

/// f_v' = f_v + alpha_dt * sum_w (f_w - f_v) + source_power * [v == path[step]],
/// then fixed boundaries are pinned back to their value. Vertex loop is
/// OpenMP-parallel above a size threshold.
NodeFrame diffusion_step(const NodeFrame& frame, const HeatScenario& scenario, std::size_t step_index);

namespace serial {
NodeFrame diffusion_step(const NodeFrame& frame, const HeatScenario& scenario, std::size_t step_index);
}

/// steps + 1 frames starting from the uniform initial frame. A nonempty path
/// must cover every step.
std::vector<NodeFrame> simulate(const HeatScenario& scenario, std::size_t steps);

/// Perimeter of the width-by-height cell rectangle whose lower-left corner is
/// `start`: 2 * (width + height) vertices, counter-clockwise from `start`,
/// each repeated `dwell` times.
LaserPath rect_laser_path(const MeshGraph& grid, std::size_t start, std::size_t width, std::size_t height,
                          std::size_t dwell);

struct DatasetSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Seeded shuffle of 0..n-1; the first floor(val_fraction * n) go to
/// validation. Both lists are returned sorted.
DatasetSplit split_indices(std::size_t n, double val_fraction, std::uint64_t seed);

struct FramePair {
  NodeFrame input;
  NodeFrame label;
};

struct HeatDataset {
  HeatScenario scenario;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::uint64_t seed = 0;
  double val_fraction = 0.0;
  std::vector<FramePair> pairs;
  DatasetSplit split;

  const MeshGraph& graph() const { return *scenario.mesh; }
};

HeatDataset generate_dataset(const HeatScenario& scenario, std::size_t steps, double val_fraction, std::uint64_t seed);

}  // namespace quasim::heat
