#include "quasim/heat/heat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quasim/error.hpp"
#include "quasim/qsim/rng.hpp"

namespace quasim::heat {
namespace {

constexpr std::size_t kParallelThreshold = 4096;

void check_frame(const NodeFrame& frame, const HeatScenario& s) {
  if (!s.mesh) throw InvalidArgument("scenario has no mesh");
  if (frame.values.size() != s.mesh->n_vertices())
    throw InvalidArgument("frame has " + std::to_string(frame.values.size()) + " values, mesh has " +
                          std::to_string(s.mesh->n_vertices()) + " vertices");
}

std::int64_t source_at(const HeatScenario& s, std::size_t step) {
  if (s.path.empty()) return -1;
  if (step >= s.path.size())
    throw InvalidArgument("step " + std::to_string(step) + " is past the laser path (" +
                          std::to_string(s.path.size()) + " entries)");
  return s.path.positions[step];
}

double updated_value(const NodeFrame& frame, const HeatScenario& s, std::size_t v, std::int64_t source) {
  const double fv = frame.values[v];
  double lap = 0.0;
  for (std::size_t w : s.mesh->neighbors(v)) lap += frame.values[w] - fv;
  double out = fv + s.alpha_dt * lap;
  if (static_cast<std::int64_t>(v) == source) out += s.source_power;
  return out;
}

void pin_boundary(NodeFrame& out, const HeatScenario& s) {
  if (s.boundary.kind != Boundary::Kind::Fixed) return;
  const auto mask = boundary_mask(*s.mesh);
  for (std::size_t v = 0; v < mask.size(); ++v)
    if (mask[v]) out.values[v] = s.boundary.value;
}

}  // namespace

MeshGraph build_grid_mesh(std::size_t nx, std::size_t ny) {
  if (nx < 2 || ny < 2)
    throw InvalidArgument("grid " + std::to_string(nx) + "x" + std::to_string(ny) + " is too small (need 2x2)");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(nx * (ny - 1) + ny * (nx - 1));
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x) {
      const std::size_t v = y * nx + x;
      if (x + 1 < nx) edges.emplace_back(v, v + 1);
      if (y + 1 < ny) edges.emplace_back(v, v + nx);
    }
  return MeshGraph(nx * ny, std::move(edges), {}, qgnn::GridShape{nx, ny});
}

LaserPath LaserPath::tiled(std::size_t length) const {
  if (positions.empty()) return {};
  LaserPath out;
  out.positions.reserve(length);
  for (std::size_t i = 0; i < length; ++i) out.positions.push_back(positions[i % positions.size()]);
  return out;
}

std::vector<bool> boundary_mask(const MeshGraph& grid) {
  if (!grid.grid()) throw InvalidArgument("boundary mask needs a grid mesh");
  const auto [nx, ny] = *grid.grid();
  std::vector<bool> mask(nx * ny, false);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x)
      mask[y * nx + x] = x == 0 || y == 0 || x + 1 == nx || y + 1 == ny;
  return mask;
}

void HeatScenario::validate() const {
  if (!mesh) throw InvalidArgument("scenario has no mesh");
  if (!std::isfinite(alpha_dt) || alpha_dt < 0.0) throw InvalidArgument("alpha_dt must be finite and non-negative");
  if (!std::isfinite(source_power) || source_power < 0.0)
    throw InvalidArgument("source_power must be finite and non-negative");
  if (!std::isfinite(initial_temperature)) throw InvalidArgument("initial temperature must be finite");
  const auto n = static_cast<std::int64_t>(mesh->n_vertices());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const std::int64_t p = path.positions[i];
    if (p < -1 || p >= n)
      throw InvalidArgument("laser path entry " + std::to_string(i) + " = " + std::to_string(p) +
                            " is not a vertex or -1");
  }
  if (boundary.kind == Boundary::Kind::Fixed) {
    if (!mesh->grid()) throw InvalidArgument("a fixed boundary needs a grid mesh");
    if (!std::isfinite(boundary.value)) throw InvalidArgument("boundary value must be finite");
  }
  const double d_max = static_cast<double>(mesh->max_degree());
  if (!(alpha_dt * d_max < 1.0))
    throw NumericalError("unstable scheme: alpha_dt * d_max = " + std::to_string(alpha_dt * d_max) +
                         " must be below 1");
}

NodeFrame HeatScenario::initial_frame() const {
  if (!mesh) throw InvalidArgument("scenario has no mesh");
  NodeFrame f{0, std::vector<double>(mesh->n_vertices(), initial_temperature)};
  pin_boundary(f, *this);
  return f;
}

namespace serial {
NodeFrame diffusion_step(const NodeFrame& frame, const HeatScenario& s, std::size_t step_index) {
  s.validate();
  check_frame(frame, s);
  const std::int64_t source = source_at(s, step_index);
  NodeFrame out{frame.t + 1, std::vector<double>(frame.values.size())};
  for (std::size_t v = 0; v < out.values.size(); ++v) out.values[v] = updated_value(frame, s, v, source);
  pin_boundary(out, s);
  return out;
}
}  // namespace serial

NodeFrame diffusion_step(const NodeFrame& frame, const HeatScenario& s, std::size_t step_index) {
  s.validate();
  check_frame(frame, s);
  const std::int64_t source = source_at(s, step_index);
  const auto n = static_cast<std::ptrdiff_t>(frame.values.size());
  NodeFrame out{frame.t + 1, std::vector<double>(frame.values.size())};
#pragma omp parallel for schedule(static) if (n >= static_cast<std::ptrdiff_t>(kParallelThreshold))
  for (std::ptrdiff_t v = 0; v < n; ++v)
    out.values[v] = updated_value(frame, s, static_cast<std::size_t>(v), source);
  pin_boundary(out, s);
  return out;
}

std::vector<NodeFrame> simulate(const HeatScenario& scenario, std::size_t steps) {
  scenario.validate();
  if (!scenario.path.empty() && steps > scenario.path.size())
    throw InvalidArgument("laser path has " + std::to_string(scenario.path.size()) + " entries, " +
                          std::to_string(steps) + " steps requested");
  std::vector<NodeFrame> frames;
  frames.reserve(steps + 1);
  frames.push_back(scenario.initial_frame());
  for (std::size_t s = 0; s < steps; ++s) frames.push_back(diffusion_step(frames.back(), scenario, s));
  return frames;
}

LaserPath rect_laser_path(const MeshGraph& grid, std::size_t start, std::size_t width, std::size_t height,
                          std::size_t dwell) {
  if (!grid.grid()) throw InvalidArgument("laser path needs a grid mesh");
  if (width < 1 || height < 1 || dwell < 1) throw InvalidArgument("rectangle sides and dwell must be at least 1");
  const auto [nx, ny] = *grid.grid();
  if (start >= nx * ny) throw InvalidArgument("start vertex out of range");
  const std::size_t x0 = start % nx, y0 = start / nx;
  if (x0 + width >= nx || y0 + height >= ny)
    throw InvalidArgument("rectangle " + std::to_string(width) + "x" + std::to_string(height) + " at (" +
                          std::to_string(x0) + ", " + std::to_string(y0) + ") leaves the " + std::to_string(nx) +
                          "x" + std::to_string(ny) + " grid");
  std::vector<std::size_t> ring;
  for (std::size_t i = 0; i < width; ++i) ring.push_back(y0 * nx + x0 + i);
  for (std::size_t j = 0; j < height; ++j) ring.push_back((y0 + j) * nx + x0 + width);
  for (std::size_t i = width; i > 0; --i) ring.push_back((y0 + height) * nx + x0 + i);
  for (std::size_t j = height; j > 0; --j) ring.push_back((y0 + j) * nx + x0);
  LaserPath path;
  for (std::size_t v : ring) path.positions.insert(path.positions.end(), dwell, static_cast<std::int64_t>(v));
  return path;
}

DatasetSplit split_indices(std::size_t n, double val_fraction, std::uint64_t seed) {
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) throw InvalidArgument("val_fraction must lie in [0, 1)");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t k = n; k > 1; --k) std::swap(idx[k - 1], idx[rng.index(k)]);
  const auto n_val = static_cast<std::size_t>(std::floor(val_fraction * static_cast<double>(n)));
  DatasetSplit split;
  split.validation.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
  split.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

HeatDataset generate_dataset(const HeatScenario& scenario, std::size_t steps, double val_fraction,
                             std::uint64_t seed) {
  if (steps < 1) throw InvalidArgument("dataset needs at least one step");
  const auto frames = simulate(scenario, steps);
  HeatDataset ds;
  ds.scenario = scenario;
  if (scenario.mesh->grid()) {
    ds.nx = scenario.mesh->grid()->nx;
    ds.ny = scenario.mesh->grid()->ny;
  }
  ds.seed = seed;
  ds.val_fraction = val_fraction;
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) ds.pairs.push_back({frames[i], frames[i + 1]});
  ds.split = split_indices(ds.pairs.size(), val_fraction, seed);
  return ds;
}

}  // namespace quasim::heat
