#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "edgesim/config.hpp"
#include "edgesim/mobility.hpp"
#include "edgesim/rng.hpp"
#include "edgesim/types.hpp"

namespace edgesim {

/// Centered sqrt(k) x sqrt(k) lattice: on both axes the coordinates are
/// floor((2i + 1) * N / (2 * sqrt(k))), i = 0 .. sqrt(k) - 1. Rows are emitted
/// in y-major order.
inline std::vector<Position> optimized_positions(std::int32_t k, std::int32_t grid_size) {
  if (!detail::is_perfect_square(k) || k < 1)
    throw ConfigError("edge_count", "optimized placement needs a perfect square, got " +
                                        std::to_string(k));
  if (std::int64_t{k} > std::int64_t{grid_size} * grid_size)
    throw ConfigError("edge_count", "exceeds the number of cells");
  const auto side = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(k))));
  std::vector<std::int32_t> coords;
  for (std::int64_t i = 0; i < side; ++i)
    coords.push_back(static_cast<std::int32_t>((2 * i + 1) * grid_size / (2 * side)));
  std::vector<Position> out;
  out.reserve(static_cast<std::size_t>(k));
  for (auto y : coords)
    for (auto x : coords) out.push_back({x, y});
  return out;
}

/// k distinct uniform cells; a repeated cell is redrawn.
inline std::vector<Position> random_positions(std::int32_t k, std::int32_t grid_size, Rng& rng) {
  if (k < 1) throw ConfigError("edge_count", "must be >= 1");
  if (std::int64_t{k} > std::int64_t{grid_size} * grid_size)
    throw ConfigError("edge_count", "exceeds the number of cells");
  std::vector<Position> out;
  std::set<std::pair<std::int32_t, std::int32_t>> used;
  while (out.size() < static_cast<std::size_t>(k)) {
    const Position p = random_cell(grid_size, rng);
    if (used.emplace(p.x, p.y).second) out.push_back(p);
  }
  return out;
}

inline std::vector<Position> place_edge_nodes(const PlacementSpec& spec, std::int32_t grid_size,
                                              Rng& rng) {
  return std::visit(
      [&](const auto& s) -> std::vector<Position> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, placement_spec::OptimizedLattice>) {
          return optimized_positions(s.k, grid_size);
        } else if constexpr (std::is_same_v<T, placement_spec::UniformRandom>) {
          return random_positions(s.k, grid_size, rng);
        } else {
          return s.positions;
        }
      },
      spec);
}

inline double distance_to_nearest(Position cell, std::span<const Position> positions) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& p : positions) best = std::min(best, squared_distance(cell, p));
  return std::sqrt(static_cast<double>(best));
}

struct MeanDistance {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo estimate of the mean distance from a uniform cell to its
/// nearest listed position.
inline MeanDistance mean_distance_to_nearest(std::span<const Position> positions,
                                             std::int32_t grid_size, std::int64_t samples,
                                             Rng& rng) {
  if (positions.empty()) throw std::invalid_argument("mean_distance_to_nearest: no positions");
  if (samples < 1) throw std::invalid_argument("mean_distance_to_nearest: samples must be >= 1");
  // Welford
  double mean = 0.0, m2 = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double d = distance_to_nearest(random_cell(grid_size, rng), positions);
    const double delta = d - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (d - mean);
  }
  const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

}  // namespace edgesim
