#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <vector>

#include "edgesim/rng.hpp"
#include "edgesim/spatial_index.hpp"
#include "edgesim/types.hpp"

namespace edgesim {

struct MoveOutcome {
  Position new_pos{};
  Motion new_motion{};

  friend bool operator==(const MoveOutcome&, const MoveOutcome&) = default;
};

inline constexpr std::int32_t sign(std::int32_t v) { return (v > 0) - (v < 0); }

/// One Moore step from `pos` toward `dest`; identity when already there.
inline constexpr Position step_toward(Position pos, Position dest) {
  return {pos.x + sign(dest.x - pos.x), pos.y + sign(dest.y - pos.y)};
}

inline Position random_cell(std::int32_t grid_size, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(grid_size);
  const auto x = static_cast<std::int32_t>(rng.below(n));
  const auto y = static_cast<std::int32_t>(rng.below(n));
  return {x, y};
}

/// Uniform choice among the in-grid cells of the Moore neighborhood.
inline Position random_adjacent(Position pos, std::int32_t grid_size, Rng& rng) {
  static constexpr std::array<std::array<std::int32_t, 2>, 8> kOffsets = {
      {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};
  std::array<Position, 8> legal{};
  std::size_t count = 0;
  for (const auto& [dx, dy] : kOffsets) {
    const Position p{pos.x + dx, pos.y + dy};
    if (in_grid(p, grid_size)) legal[count++] = p;
  }
  return legal[rng.below(count)];
}

/// Advances a single end-node by one time-step.
///
/// A stationary waypoint node that activates only picks its destination this
/// step; it starts stepping on the next one. Community activation of the
/// neighbours is the caller's job (see community_activate).
inline MoveOutcome mobility_step(const NodeState& node, const MobilityModel& model,
                                 std::int32_t grid_size, Rng& rng) {
  return std::visit(
      [&](const auto& m) -> MoveOutcome {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, mobility_model::Static>) {
          return {node.pos, node.motion};
        } else if constexpr (std::is_same_v<T, mobility_model::RandomIndependent>) {
          if (!rng.bernoulli(m.move_prob)) return {node.pos, Motion::stationary()};
          return {random_adjacent(node.pos, grid_size, rng), Motion::stationary()};
        } else {
          if (node.motion.moving) {
            const Position next = step_toward(node.pos, node.motion.dest);
            return {next, next == node.motion.dest ? Motion::stationary() : node.motion};
          }
          if (!rng.bernoulli(m.activate_prob)) return {node.pos, node.motion};
          // Drawing its own cell means the node has already arrived.
          const Position dest = random_cell(grid_size, rng);
          return {node.pos, dest == node.pos ? Motion::stationary() : Motion::moving_to(dest)};
        }
      },
      model);
}

/// Sends every stationary end-node within `community_radius` of the activator
/// (the activator included) toward `dest`. Nodes already moving keep their
/// destination. `index` must be built over `nodes` (ids = indices) with
/// bucket size >= community_radius; without it a linear scan is used.
/// Returns the number of nodes switched.
inline std::size_t community_activate(std::span<NodeState> nodes, NodeId activator,
                                      Position dest, double community_radius,
                                      const BucketGrid* index = nullptr) {
  const Position center = nodes[static_cast<std::size_t>(activator)].pos;
  std::size_t switched = 0;
  auto visit = [&](std::size_t i) {
    NodeState& n = nodes[i];
    if (n.kind != NodeKind::EndNode || n.motion.moving) return;
    n.motion = Motion::moving_to(dest);
    ++switched;
  };
  if (index != nullptr) {
    index->for_each_within(center, community_radius,
                           [&](const BucketGrid::Entry& e) { visit(static_cast<std::size_t>(e.id)); });
  } else {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (within(center, nodes[i].pos, community_radius)) visit(i);
  }
  return switched;
}

/// Scratch buffers reused across steps.
struct MobilityScratch {
  std::vector<std::uint8_t> was_moving;
  std::vector<Position> positions;
};

/// Advances all end-nodes by one time-step.
///
/// Two phases keep the result independent of node order: nodes that were
/// moving at the start of the step take their step, then nodes that were
/// stationary draw activation in id order. A community activation can pull in
/// stationary nodes with larger ids, which then skip their own draw.
inline void advance_mobility(std::span<NodeState> end_nodes, const MobilityModel& model,
                             std::int32_t grid_size, Rng& rng, MobilityScratch& scratch) {
  if (std::holds_alternative<mobility_model::Static>(model)) return;

  const std::size_t n = end_nodes.size();
  scratch.was_moving.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    NodeState& node = end_nodes[i];
    if (!node.motion.moving) continue;
    scratch.was_moving[i] = 1;
    const MoveOutcome out = mobility_step(node, model, grid_size, rng);
    node.pos = out.new_pos;
    node.motion = out.new_motion;
  }

  const auto* community = std::get_if<mobility_model::CommunityBased>(&model);
  std::optional<BucketGrid> index;
  for (std::size_t i = 0; i < n; ++i) {
    NodeState& node = end_nodes[i];
    if (scratch.was_moving[i] || node.motion.moving) continue;
    const MoveOutcome out = mobility_step(node, model, grid_size, rng);
    node.pos = out.new_pos;
    node.motion = out.new_motion;
    if (community != nullptr && node.motion.moving) {
      if (!index) {
        scratch.positions.resize(n);
        for (std::size_t j = 0; j < n; ++j) scratch.positions[j] = end_nodes[j].pos;
        index = BucketGrid::rebuild(std::span<const Position>(scratch.positions),
                                    community->community_radius);
      }
      community_activate(end_nodes, static_cast<NodeId>(i), node.motion.dest,
                         community->community_radius, &*index);
    }
  }
}

/// Fraction of positions closer than `band` cells to the grid boundary, i.e.
/// min(x, y, N-1-x, N-1-y) < band.
inline double border_fraction(std::span<const Position> positions, std::int32_t grid_size,
                              double band) {
  if (positions.empty()) return 0.0;
  std::size_t count = 0;
  for (const Position& p : positions) {
    const std::int32_t m =
        std::min({p.x, p.y, grid_size - 1 - p.x, grid_size - 1 - p.y});
    if (m < band) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(positions.size());
}

inline double border_fraction(std::span<const NodeState> nodes, std::int32_t grid_size,
                              double band) {
  std::vector<Position> positions;
  positions.reserve(nodes.size());
  for (const auto& n : nodes)
    if (n.kind == NodeKind::EndNode) positions.push_back(n.pos);
  return border_fraction(std::span<const Position>(positions), grid_size, band);
}

}  // namespace edgesim
