#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "edgesim/rng.hpp"
#include "edgesim/spatial_index.hpp"
#include "edgesim/types.hpp"

namespace edgesim {

// Angular restriction of an emission: receivers must lie within `half_angle`
// degrees of `direction` as seen from the sender.
struct Sector {
  double dx = 1.0;  // unit direction
  double dy = 0.0;
  double half_angle = 180.0;
  double cos_half = -1.0;

  static Sector make(double dx, double dy, double half_angle) {
    return {dx, dy, half_angle, std::cos(half_angle * std::numbers::pi / 180.0)};
  }

  bool full_circle() const noexcept { return half_angle >= 180.0; }

  bool contains(Position sender, Position v) const noexcept {
    if (full_circle()) return true;
    const double wx = static_cast<double>(v.x) - sender.x;
    const double wy = static_cast<double>(v.y) - sender.y;
    const double norm = std::hypot(wx, wy);
    if (norm == 0.0) return true;  // co-located: no defined bearing
    return wx * dx + wy * dy >= norm * cos_half - 1e-9 * norm;
  }

  friend bool operator==(const Sector&, const Sector&) = default;
};

namespace forward_action {
struct Silent {
  friend bool operator==(const Silent&, const Silent&) = default;
};
struct Emit {
  double radius = 0.0;
  std::optional<Sector> sector;
  friend bool operator==(const Emit&, const Emit&) = default;
};
}  // namespace forward_action

using ForwardAction = std::variant<forward_action::Silent, forward_action::Emit>;

inline std::optional<Sector> sector_toward(Position from, Position target, double half_angle) {
  if (from == target) return std::nullopt;
  const double wx = static_cast<double>(target.x) - from.x;
  const double wy = static_cast<double>(target.y) - from.y;
  const double norm = std::hypot(wx, wy);
  return Sector::make(wx / norm, wy / norm, half_angle);
}

/// Emission used by the applicant. It always emits: the probabilistic drop
/// applies to relays only.
inline forward_action::Emit originator_action(const DisseminationPolicy& policy,
                                              double comm_radius, Position node_pos) {
  return std::visit(
      [&](const auto& p) -> forward_action::Emit {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, policy::ReducedRange>) {
          return {p.emit_radius, std::nullopt};
        } else if constexpr (std::is_same_v<T, policy::Directed>) {
          return {comm_radius, sector_toward(node_pos, p.target, p.half_angle)};
        } else {
          return {comm_radius, std::nullopt};
        }
      },
      policy);
}

/// Relay decision for a node holding a fresh message with ttl left.
/// Only Probabilistic consumes a draw.
inline ForwardAction decide_forward(const DisseminationPolicy& policy, double comm_radius,
                                    Position node_pos, Rng& rng) {
  if (const auto* p = std::get_if<policy::Probabilistic>(&policy)) {
    if (!rng.bernoulli(p->forward_prob)) return forward_action::Silent{};
  }
  return originator_action(policy, comm_radius, node_pos);
}

/// Visits every receiver of an emission from `sender`: nodes within
/// `action.radius` (and inside the sector, if any), except the sender and
/// `prev_forwarder`. `candidates` bounds the scan; `pos_of(id)` yields current
/// positions.
template <class PosOf, class Fn>
void for_each_receiver(const forward_action::Emit& action, NodeId sender, Position sender_pos,
                       NodeId prev_forwarder, std::span<const NodeId> candidates,
                       PosOf&& pos_of, Fn&& fn) {
  const double r2 = action.radius * action.radius;
  const bool sectored = action.sector && !action.sector->full_circle();
  for (const NodeId v : candidates) {
    if (v == sender || v == prev_forwarder) continue;
    const Position p = pos_of(v);
    if (static_cast<double>(squared_distance(sender_pos, p)) > r2) continue;
    if (sectored && !action.sector->contains(sender_pos, p)) continue;
    fn(v);
  }
}

/// Receivers resolved against a bucket grid of current positions. The result
/// is sorted ascending.
inline std::vector<NodeId> receivers(const forward_action::Emit& action, NodeId sender,
                                     NodeId prev_forwarder, const BucketGrid& index,
                                     Position sender_pos) {
  std::vector<NodeId> out;
  const bool sectored = action.sector && !action.sector->full_circle();
  index.for_each_within(sender_pos, action.radius, [&](const BucketGrid::Entry& e) {
    if (e.id == sender || e.id == prev_forwarder) return;
    if (sectored && !action.sector->contains(sender_pos, e.pos)) return;
    out.push_back(e.id);
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Duplicate suppression memory.
///
/// Each node remembers the id of the message it currently holds. The engine
/// runs one message per epoch and clears the set between epochs, so a single
/// slot per node represents the whole set.
class SeenSet {
 public:
  explicit SeenSet(std::size_t nodes = 0) : seen_(nodes, kNone) {}

  std::size_t size() const noexcept { return seen_.size(); }

  bool contains(NodeId v, std::int32_t message_id) const {
    return seen_[static_cast<std::size_t>(v)] == message_id;
  }

  // Records the id; returns true if it was not already present.
  bool insert(NodeId v, std::int32_t message_id) {
    auto& slot = seen_[static_cast<std::size_t>(v)];
    if (slot == message_id) return false;
    slot = message_id;
    return true;
  }

  void clear() { std::fill(seen_.begin(), seen_.end(), kNone); }

 private:
  static constexpr std::int32_t kNone = -1;
  std::vector<std::int32_t> seen_;
};

struct ReceiveOutcome {
  bool is_new = false;
  // Copy to emit on the next time-step, one hop further.
  std::optional<Message> scheduled;
};

/// Handles the receipt of `msg` (as it was emitted) by `receiver`.
///
/// The receiver's copy is one hop further than the emitted one:
/// ttl_remaining - 1, hops + 1. A relay is scheduled only for a fresh message
/// whose copy still has ttl left, so no message travels more than ttl hops.
inline ReceiveOutcome on_receive(SeenSet& seen, NodeId receiver, const Message& msg) {
  ReceiveOutcome out;
  out.is_new = seen.insert(receiver, msg.epoch_id);
  if (out.is_new && msg.ttl_remaining > 1) {
    out.scheduled = Message{msg.epoch_id, msg.origin, msg.ttl_remaining - 1, msg.hops + 1};
  }
  return out;
}

/// Expected share of pure-broadcast receivers reached at a reduced radius,
/// for uniformly spread nodes away from the border.
inline double reduced_range_reach_fraction(double emit_radius, double comm_radius) {
  const double ratio = emit_radius / comm_radius;
  return ratio * ratio;
}

}  // namespace edgesim
