#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "edgesim/config.hpp"
#include "edgesim/dissemination.hpp"
#include "edgesim/metrics.hpp"
#include "edgesim/mobility.hpp"
#include "edgesim/placement.hpp"
#include "edgesim/rng.hpp"
#include "edgesim/spatial_index.hpp"
#include "edgesim/types.hpp"

namespace edgesim {

/// Uniform draw over the end-nodes.
inline NodeId select_applicant(std::span<const NodeId> end_nodes, Rng& rng) {
  if (end_nodes.empty()) throw std::invalid_argument("select_applicant: no end-nodes");
  return end_nodes[rng.below(end_nodes.size())];
}

// How emitters find their receivers.
enum class ReceiverScan {
  Candidates,  // epoch-start candidate lists (normal operation)
  BruteForce,  // every node, every emission; reference path for tests
};

struct Delivery {
  std::int32_t step = 0;
  NodeId sender = kNoNode;
  NodeId receiver = kNoNode;
};

/// Optional per-epoch observations.
struct EpochTrace {
  NodeId applicant = kNoNode;
  std::vector<std::int32_t> first_hop;  // per node; -1 if never reached, 0 for the applicant
  std::vector<Delivery> deliveries;
  std::vector<std::vector<Position>> positions;  // per step, before mobility
};

/// Nodes, per-node dissemination state and the rng streams of one run.
///
/// End-nodes take ids [0, num_end_nodes), edge nodes follow. A step is two
/// phases: every scheduled emission is resolved against the current
/// positions, then all receipts are applied. Mobility runs at the end of
/// each step.
class World {
 public:
  explicit World(const SimConfig& cfg) : cfg_(validate_config(cfg)), rng_(cfg.seed) {
    const auto n = static_cast<std::size_t>(cfg_.num_end_nodes);
    nodes_.reserve(n + edge_count(cfg_.placement));
    for (std::size_t i = 0; i < n; ++i)
      nodes_.push_back({static_cast<NodeId>(i), NodeKind::EndNode,
                        random_cell(cfg_.grid_size, rng_.population), Motion::stationary()});
    for (const Position& p : place_edge_nodes(cfg_.placement, cfg_.grid_size, rng_.placement))
      nodes_.push_back({static_cast<NodeId>(nodes_.size()), NodeKind::EdgeNode, p,
                        Motion::stationary()});
    init_buffers();
  }

  /// Explicit layout, for tests and hand-built scenarios. `nodes[i].id` must
  /// equal i and end-nodes must precede edge nodes.
  World(const SimConfig& cfg, std::vector<NodeState> nodes)
      : cfg_(validate_config(cfg)), rng_(cfg.seed), nodes_(std::move(nodes)) {
    bool seen_edge = false;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& s = nodes_[i];
      if (s.id != static_cast<NodeId>(i)) throw std::invalid_argument("World: ids must be dense");
      if (!in_grid(s.pos, cfg_.grid_size)) throw std::invalid_argument("World: node off grid");
      if (s.kind == NodeKind::EdgeNode) {
        seen_edge = true;
      } else if (seen_edge) {
        throw std::invalid_argument("World: end-nodes must precede edge nodes");
      }
    }
    init_buffers();
  }

  const SimConfig& config() const noexcept { return cfg_; }
  std::span<const NodeState> nodes() const noexcept { return nodes_; }
  std::size_t num_end_nodes() const noexcept { return num_end_; }
  std::int64_t step_count() const noexcept { return global_step_; }
  ReceiverScan receiver_scan() const noexcept { return scan_; }
  void set_receiver_scan(ReceiverScan scan) noexcept { scan_ = scan; }

  std::span<const NodeState> end_nodes() const noexcept {
    return std::span<const NodeState>(nodes_).first(num_end_);
  }

  std::vector<Position> end_positions() const {
    std::vector<Position> out;
    out.reserve(num_end_);
    for (std::size_t i = 0; i < num_end_; ++i) out.push_back(nodes_[i].pos);
    return out;
  }

  double border_fraction() const {
    std::vector<Position> p = end_positions();
    return edgesim::border_fraction(std::span<const Position>(p), cfg_.grid_size,
                                    cfg_.comm_radius);
  }

  /// One mobility-only time-step.
  void mobility_tick() {
    advance_mobility(std::span<NodeState>(nodes_).first(num_end_), cfg_.mobility,
                     cfg_.grid_size, rng_.mobility, mobility_scratch_);
    for (std::size_t i = 0; i < num_end_; ++i) positions_[i] = nodes_[i].pos;
    ++global_step_;
  }

  void warm_up(std::int64_t steps) {
    for (std::int64_t i = 0; i < steps; ++i) mobility_tick();
  }

  NodeId select_applicant() {
    if (num_end_ == 0) throw std::invalid_argument("select_applicant: no end-nodes");
    return static_cast<NodeId>(rng_.applicant.below(num_end_));
  }

  /// Runs one epoch: epoch_length steps hosting a single message.
  EpochRecord run_epoch(std::int32_t epoch_id, std::optional<NodeId> applicant = std::nullopt,
                        EpochTrace* trace = nullptr) {
    EpochRecord rec;
    rec.epoch_id = epoch_id;

    snapshot_pos_ = positions_;
    snapshot_ = BucketGrid::rebuild(std::span<const Position>(snapshot_pos_),
                                    cfg_.comm_radius / kSnapshotBucketsPerRadius);
    const double cand_radius = candidate_radius(cfg_.comm_radius, cfg_.epoch_length);

    const NodeId origin = applicant ? *applicant : select_applicant();
    if (origin < 0 || static_cast<std::size_t>(origin) >= num_end_)
      throw std::invalid_argument("run_epoch: applicant must be an end-node");

    if (trace != nullptr) {
      trace->applicant = origin;
      trace->first_hop.assign(nodes_.size(), -1);
      trace->first_hop[static_cast<std::size_t>(origin)] = 0;
      trace->deliveries.clear();
      trace->positions.clear();
    }

    seen_.clear();
    seen_.insert(origin, epoch_id);
    emitters_.clear();
    emitters_.push_back({origin, Message{epoch_id, origin, cfg_.ttl, 0}, kNoNode});
    bool originating = true;

    auto pos_of = [this](NodeId v) { return positions_[static_cast<std::size_t>(v)]; };

    for (std::int32_t step = 0; step < cfg_.epoch_length; ++step) {
      if (trace != nullptr) {
        auto& snap = trace->positions.emplace_back();
        snap.reserve(nodes_.size());
        for (const auto& n : nodes_) snap.push_back(n.pos);
      }

      // Phase 1: emissions.
      receipts_.clear();
      const Message step_msg = emitters_.empty() ? Message{} : emitters_.front().msg;
      for (const Pending& p : emitters_) {
        const Position sender_pos = pos_of(p.node);
        forward_action::Emit emit;
        if (originating) {
          emit = originator_action(cfg_.policy, cfg_.comm_radius, sender_pos);
        } else {
          const ForwardAction action =
              decide_forward(cfg_.policy, cfg_.comm_radius, sender_pos, rng_.dissemination);
          const auto* e = std::get_if<forward_action::Emit>(&action);
          if (e == nullptr) continue;
          emit = *e;
        }
        ++rec.emissions;
        auto push = [&](NodeId v) { receipts_.push_back({p.node, v}); };
        if (scan_ == ReceiverScan::Candidates) {
          // The emitter's candidate list is streamed from the epoch-start
          // snapshot (each node emits at most once per epoch, so nothing
          // would be reused by materializing it). By step `step` both ends
          // have moved at most sqrt(2) * step, which bounds the part of the
          // list that can still be in range.
          const auto limit = static_cast<std::int64_t>(std::floor(emit.radius * emit.radius));
          const bool sectored = emit.sector && !emit.sector->full_circle();
          const double reach =
              std::min(cand_radius, emit.radius + 2.0 * std::sqrt(2.0) * step);
          for_each_candidate(snapshot_, p.node, snapshot_pos_[static_cast<std::size_t>(p.node)],
                             reach, [&](NodeId v) {
                               if (v == p.prev_forwarder) return;
                               const Position q = positions_[static_cast<std::size_t>(v)];
                               if (squared_distance(sender_pos, q) > limit) return;
                               if (sectored && !emit.sector->contains(sender_pos, q)) return;
                               push(v);
                             });
        } else {
          for_each_receiver(emit, p.node, sender_pos, p.prev_forwarder,
                            std::span<const NodeId>(all_ids_), pos_of, push);
        }
      }
      originating = false;

      // Phase 2: receipts, order-independent.
      rec.deliveries += static_cast<std::int64_t>(receipts_.size());
      next_.clear();
      for (const Receipt& r : receipts_) apply_receipt(r, step_msg, step, rec, trace);
      std::sort(next_.begin(), next_.end(),
                [](const Pending& a, const Pending& b) { return a.node < b.node; });

      mobility_tick();
      std::swap(emitters_, next_);
    }
    emitters_.clear();
    seen_.clear();
    return rec;
  }

 private:
  struct Pending {
    NodeId node;
    Message msg;
    NodeId prev_forwarder;
  };
  // Every emission of a step carries the same hop count, so receipts only
  // reference the step's message.
  struct Receipt {
    NodeId sender;
    NodeId receiver;
  };

  void init_buffers() {
    num_end_ = 0;
    while (num_end_ < nodes_.size() && nodes_[num_end_].kind == NodeKind::EndNode) ++num_end_;
    seen_ = SeenSet(nodes_.size());
    positions_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) positions_[i] = nodes_[i].pos;
    first_receipt_step_.assign(nodes_.size(), -1);
    pending_slot_.assign(nodes_.size(), -1);
    all_ids_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) all_ids_[i] = static_cast<NodeId>(i);
  }

  // A node that first hears the message from several senders in the same
  // step records the smallest sender id as its forwarder, whatever the order
  // receipts are applied in.
  void apply_receipt(const Receipt& r, const Message& msg, std::int32_t step, EpochRecord& rec,
                     EpochTrace* trace) {
    const auto v = static_cast<std::size_t>(r.receiver);
    if (trace != nullptr) trace->deliveries.push_back({step, r.sender, r.receiver});

    if (v >= num_end_) {  // edge node: terminates, never relays
      if (seen_.insert(r.receiver, msg.epoch_id) && trace != nullptr)
        trace->first_hop[v] = msg.hops + 1;
      if (!rec.success) {
        rec.success = true;
        rec.delay_hops = msg.hops + 1;
      }
      return;
    }

    const ReceiveOutcome out = on_receive(seen_, r.receiver, msg);
    if (out.is_new) {
      first_receipt_step_[v] = global_step_;
      if (trace != nullptr) trace->first_hop[v] = msg.hops + 1;
      if (out.scheduled) {
        pending_slot_[v] = static_cast<std::int64_t>(next_.size());
        next_.push_back({r.receiver, *out.scheduled, r.sender});
      } else {
        pending_slot_[v] = -1;
      }
    } else if (first_receipt_step_[v] == global_step_ && pending_slot_[v] >= 0) {
      Pending& p = next_[static_cast<std::size_t>(pending_slot_[v])];
      p.prev_forwarder = std::min(p.prev_forwarder, r.sender);
    }
  }

  // Finer buckets than in_range needs: the candidate scans cover several
  // comm_radius, and small buckets keep the scanned area close to the disc.
  static constexpr double kSnapshotBucketsPerRadius = 4.0;

  SimConfig cfg_;
  RngStreams rng_;
  std::vector<NodeState> nodes_;
  std::vector<Position> positions_;  // mirror of nodes_[i].pos
  std::size_t num_end_ = 0;
  std::int64_t global_step_ = 0;
  ReceiverScan scan_ = ReceiverScan::Candidates;

  SeenSet seen_;
  BucketGrid snapshot_;
  std::vector<Position> snapshot_pos_;
  std::vector<Pending> emitters_;
  std::vector<Pending> next_;
  std::vector<Receipt> receipts_;
  std::vector<std::int64_t> first_receipt_step_;
  std::vector<std::int64_t> pending_slot_;
  std::vector<NodeId> all_ids_;
  MobilityScratch mobility_scratch_;
};

struct SimulationResult {
  std::vector<EpochRecord> records;
  AggregateMetrics metrics;
};

/// Full run: uniform end-node layout, edge placement, mobility warm-up, then
/// num_epochs epochs. The border occupancy series is sampled at the start of
/// every epoch.
inline SimulationResult run_simulation(const SimConfig& cfg) {
  World world(cfg);
  world.warm_up(cfg.warmup_steps);
  SimulationResult out;
  out.records.reserve(static_cast<std::size_t>(cfg.num_epochs));
  std::vector<std::pair<std::int64_t, double>> border;
  for (std::int32_t e = 0; e < cfg.num_epochs; ++e) {
    border.emplace_back(world.step_count(), world.border_fraction());
    out.records.push_back(world.run_epoch(e));
  }
  out.metrics = aggregate(out.records);
  out.metrics.border_occupancy_series = std::move(border);
  return out;
}

}  // namespace edgesim
