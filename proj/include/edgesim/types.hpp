#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace edgesim {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// Integer cell on an N x N grid, 0 <= x, y < N.
struct Position {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend constexpr bool operator==(const Position&, const Position&) = default;
};

inline constexpr bool in_grid(Position p, std::int32_t grid_size) {
  return p.x >= 0 && p.y >= 0 && p.x < grid_size && p.y < grid_size;
}

inline constexpr std::int64_t squared_distance(Position a, Position b) {
  const std::int64_t dx = std::int64_t{a.x} - b.x;
  const std::int64_t dy = std::int64_t{a.y} - b.y;
  return dx * dx + dy * dy;
}

inline double euclidean_distance(Position a, Position b) {
  return std::sqrt(static_cast<double>(squared_distance(a, b)));
}

// Inclusive range test: a node exactly at `radius` is in range.
inline bool within(Position a, Position b, double radius) {
  return static_cast<double>(squared_distance(a, b)) <= radius * radius;
}

inline constexpr std::int32_t chebyshev_distance(Position a, Position b) {
  const std::int32_t dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  const std::int32_t dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx > dy ? dx : dy;
}

// ---------------------------------------------------------------------------
// Mobility models

namespace mobility_model {
struct Static {
  friend bool operator==(const Static&, const Static&) = default;
};
struct RandomIndependent {
  double move_prob = 0.5;
  friend bool operator==(const RandomIndependent&, const RandomIndependent&) = default;
};
struct RandomWaypoint {
  double activate_prob = 0.0125;
  friend bool operator==(const RandomWaypoint&, const RandomWaypoint&) = default;
};
struct CommunityBased {
  double activate_prob = 0.0125;
  double community_radius = 40.0;
  friend bool operator==(const CommunityBased&, const CommunityBased&) = default;
};
}  // namespace mobility_model

using MobilityModel =
    std::variant<mobility_model::Static, mobility_model::RandomIndependent,
                 mobility_model::RandomWaypoint, mobility_model::CommunityBased>;

// ---------------------------------------------------------------------------
// Dissemination policies

namespace policy {
struct PureBroadcast {
  friend bool operator==(const PureBroadcast&, const PureBroadcast&) = default;
};
struct Probabilistic {
  double forward_prob = 1.0;
  friend bool operator==(const Probabilistic&, const Probabilistic&) = default;
};
// Emission radius in cells, absolute (not a percentage of comm_radius).
struct ReducedRange {
  double emit_radius = 40.0;
  friend bool operator==(const ReducedRange&, const ReducedRange&) = default;
};
struct Directed {
  double half_angle = 90.0;  // degrees
  Position target{};
  friend bool operator==(const Directed&, const Directed&) = default;
};
}  // namespace policy

using DisseminationPolicy = std::variant<policy::PureBroadcast, policy::Probabilistic,
                                         policy::ReducedRange, policy::Directed>;

// ---------------------------------------------------------------------------
// Edge-node placement

namespace placement_spec {
// sqrt(k) x sqrt(k) centered lattice; k must be a perfect square.
struct OptimizedLattice {
  std::int32_t k = 9;
  friend bool operator==(const OptimizedLattice&, const OptimizedLattice&) = default;
};
struct UniformRandom {
  std::int32_t k = 9;
  friend bool operator==(const UniformRandom&, const UniformRandom&) = default;
};
struct Explicit {
  std::vector<Position> positions;
  friend bool operator==(const Explicit&, const Explicit&) = default;
};
}  // namespace placement_spec

using PlacementSpec = std::variant<placement_spec::OptimizedLattice,
                                   placement_spec::UniformRandom, placement_spec::Explicit>;

inline std::size_t edge_count(const PlacementSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, placement_spec::Explicit>) {
          return s.positions.size();
        } else {
          return s.k < 0 ? 0 : static_cast<std::size_t>(s.k);
        }
      },
      spec);
}

// ---------------------------------------------------------------------------

struct SimConfig {
  std::int32_t grid_size = 1000;
  std::int32_t num_end_nodes = 10000;
  double comm_radius = 40.0;
  std::int32_t ttl = 20;
  std::int32_t epoch_length = 25;
  std::int32_t num_epochs = 1000;
  std::int32_t warmup_steps = 1000;
  MobilityModel mobility = mobility_model::RandomWaypoint{};
  DisseminationPolicy policy = policy::PureBroadcast{};
  PlacementSpec placement = placement_spec::OptimizedLattice{};
  std::uint64_t seed = 1;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

enum class NodeKind : std::uint8_t { EndNode, EdgeNode };

struct Motion {
  bool moving = false;
  Position dest{};  // meaningful only when moving

  static constexpr Motion stationary() { return {}; }
  static constexpr Motion moving_to(Position d) { return {true, d}; }

  friend constexpr bool operator==(const Motion&, const Motion&) = default;
};

struct NodeState {
  NodeId id = 0;
  NodeKind kind = NodeKind::EndNode;
  Position pos{};
  Motion motion{};

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

// A request token. `epoch_id` doubles as the message id; hops + ttl_remaining
// always equals the configured ttl.
struct Message {
  std::int32_t epoch_id = 0;
  NodeId origin = kNoNode;
  std::int32_t ttl_remaining = 0;
  std::int32_t hops = 0;

  friend constexpr bool operator==(const Message&, const Message&) = default;
};

}  // namespace edgesim
