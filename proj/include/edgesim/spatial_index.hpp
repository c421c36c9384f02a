#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "edgesim/types.hpp"

namespace edgesim {

/// Uniform bucket grid over a snapshot of node positions.
///
/// Bucket (bx, by) holds every node with floor(x / bucket_size) == bx and
/// floor(y / bucket_size) == by. Buckets are stored contiguously (CSR), so a
/// rebuild is two passes over the nodes.
class BucketGrid {
 public:
  struct Entry {
    NodeId id;
    Position pos;
  };

  BucketGrid() = default;

  /// Builds from (id, position) pairs. Positions must be non-negative.
  static BucketGrid rebuild(std::span<const std::pair<NodeId, Position>> nodes,
                            double bucket_size) {
    BucketGrid g(bucket_size);
    g.fill(nodes.size(), [&](std::size_t i) { return Entry{nodes[i].first, nodes[i].second}; });
    return g;
  }

  /// Builds from a dense position vector; node i has id i.
  static BucketGrid rebuild(std::span<const Position> positions, double bucket_size) {
    BucketGrid g(bucket_size);
    g.fill(positions.size(),
           [&](std::size_t i) { return Entry{static_cast<NodeId>(i), positions[i]}; });
    return g;
  }

  double bucket_size() const noexcept { return bucket_size_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::int32_t bucket_cols() const noexcept { return cols_; }
  std::int32_t bucket_rows() const noexcept { return rows_; }

  std::int32_t bucket_coord(std::int32_t v) const noexcept {
    return static_cast<std::int32_t>(std::floor(v / bucket_size_));
  }

  std::span<const Entry> bucket(std::int32_t bx, std::int32_t by) const noexcept {
    if (bx < 0 || by < 0 || bx >= cols_ || by >= rows_) return {};
    const auto b = static_cast<std::size_t>(by) * cols_ + bx;
    return {entries_.data() + offsets_[b], entries_.data() + offsets_[b + 1]};
  }

  std::size_t occupied_buckets() const noexcept {
    std::size_t n = 0;
    for (std::size_t b = 0; b + 1 < offsets_.size(); ++b) n += offsets_[b + 1] > offsets_[b];
    return n;
  }

  /// Calls fn(entry) for every node within `radius` (inclusive) of `center`.
  /// Any radius is accepted; the scanned neighborhood widens with it. Each
  /// bucket row is scanned as one contiguous run clipped to the circle.
  template <class Fn>
  void for_each_within(Position center, double radius, Fn&& fn) const {
    if (entries_.empty() || !(radius >= 0.0)) return;
    // Integer squared distances: d2 <= r^2 iff d2 <= floor(r^2).
    const auto limit = static_cast<std::int64_t>(std::floor(radius * radius));
    const std::int32_t y0 = std::max(bucket_coord_d(center.y - radius), 0);
    const std::int32_t y1 = std::min(bucket_coord_d(center.y + radius), rows_ - 1);
    for (std::int32_t by = y0; by <= y1; ++by) {
      // Vertical gap between the center and this bucket row.
      const double lo = by * bucket_size_, hi = (by + 1) * bucket_size_;
      const double gap = center.y < lo ? lo - center.y : (center.y > hi ? center.y - hi : 0.0);
      const double half = std::sqrt(std::max(radius * radius - gap * gap, 0.0));
      const std::int32_t x0 = std::max(bucket_coord_d(center.x - half), 0);
      const std::int32_t x1 = std::min(bucket_coord_d(center.x + half), cols_ - 1);
      if (x0 > x1) continue;
      const std::size_t row = static_cast<std::size_t>(by) * cols_;
      const Entry* it = entries_.data() + offsets_[row + x0];
      const Entry* end = entries_.data() + offsets_[row + x1 + 1];
      for (; it != end; ++it) {
        if (squared_distance(center, it->pos) <= limit) fn(*it);
      }
    }
  }

 private:
  explicit BucketGrid(double bucket_size) : bucket_size_(bucket_size) {
    if (!(bucket_size > 0.0)) throw std::invalid_argument("bucket_size must be > 0");
  }

  template <class Get>
  void fill(std::size_t n, Get get) {
    std::int32_t max_x = 0, max_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Entry e = get(i);
      if (e.pos.x < 0 || e.pos.y < 0)
        throw std::invalid_argument("BucketGrid: negative coordinate");
      max_x = std::max(max_x, e.pos.x);
      max_y = std::max(max_y, e.pos.y);
    }
    cols_ = n ? bucket_coord(max_x) + 1 : 0;
    rows_ = n ? bucket_coord(max_y) + 1 : 0;
    offsets_.assign(static_cast<std::size_t>(cols_) * rows_ + 1, 0);
    std::vector<std::size_t> index(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Entry e = get(i);
      index[i] = static_cast<std::size_t>(bucket_coord(e.pos.y)) * cols_ + bucket_coord(e.pos.x);
      ++offsets_[index[i] + 1];
    }
    for (std::size_t b = 1; b < offsets_.size(); ++b) offsets_[b] += offsets_[b - 1];
    entries_.resize(n);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) entries_[cursor[index[i]]++] = get(i);
  }

  std::int32_t bucket_coord_d(double v) const noexcept {
    return static_cast<std::int32_t>(std::floor(v / bucket_size_));
  }

  double bucket_size_ = 1.0;
  std::int32_t cols_ = 0;
  std::int32_t rows_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Entry> entries_;
};

/// Ids within `radius` (inclusive) of `center`, ascending, `exclude` omitted.
/// Only the 3x3 bucket neighborhood is sound, so radius may not exceed the
/// bucket size.
inline std::vector<NodeId> in_range(const BucketGrid& grid, Position center, double radius,
                                    NodeId exclude = kNoNode) {
  if (radius > grid.bucket_size())
    throw std::invalid_argument("in_range: radius exceeds bucket size");
  std::vector<NodeId> out;
  grid.for_each_within(center, radius, [&](const BucketGrid::Entry& e) {
    if (e.id != exclude) out.push_back(e.id);
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Radius that bounds every node pair able to come within comm_radius during
/// one epoch: each endpoint moves at most sqrt(2) per step.
inline double candidate_radius(double comm_radius, std::int32_t epoch_length) {
  return comm_radius + 2.0 * std::sqrt(2.0) * epoch_length;
}

/// Per-node lists of nodes possibly within reach during the current epoch.
class CandidateList {
 public:
  CandidateList() = default;
  CandidateList(std::vector<std::size_t> offsets, std::vector<NodeId> ids)
      : offsets_(std::move(offsets)), ids_(std::move(ids)) {}

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t total() const noexcept { return ids_.size(); }

  std::span<const NodeId> of(NodeId v) const noexcept {
    const auto i = static_cast<std::size_t>(v);
    if (v < 0 || i + 1 >= offsets_.size()) return {};
    return {ids_.data() + offsets_[i], ids_.data() + offsets_[i + 1]};
  }

  bool contains(NodeId v, NodeId u) const {
    const auto c = of(v);
    return std::binary_search(c.begin(), c.end(), u);
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> ids_;
};

/// Streams the candidates of one node (snapshot entries within `radius` of its
/// snapshot position, itself excluded) in bucket order.
template <class Fn>
void for_each_candidate(const BucketGrid& grid, NodeId id, Position pos, double radius,
                        Fn&& fn) {
  grid.for_each_within(pos, radius, [&](const BucketGrid::Entry& e) {
    if (e.id != id) fn(e.id);
  });
}

/// Candidates of one node in ascending id order, appended to `out`.
inline void node_candidates(const BucketGrid& grid, NodeId id, Position pos, double radius,
                            std::vector<NodeId>& out) {
  const auto first = out.size();
  for_each_candidate(grid, id, pos, radius, [&](NodeId v) { out.push_back(v); });
  std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
}

/// Builds every node's candidate list from the epoch-start snapshot. Node ids
/// in the grid index the result directly.
inline CandidateList epoch_candidates(const BucketGrid& grid, double comm_radius,
                                      std::int32_t epoch_length) {
  const double radius = candidate_radius(comm_radius, epoch_length);
  std::vector<std::pair<NodeId, Position>> nodes;
  nodes.reserve(grid.size());
  NodeId max_id = -1;
  for (std::int32_t by = 0; by < grid.bucket_rows(); ++by)
    for (std::int32_t bx = 0; bx < grid.bucket_cols(); ++bx)
      for (const auto& e : grid.bucket(bx, by)) {
        nodes.emplace_back(e.id, e.pos);
        max_id = std::max(max_id, e.id);
      }
  std::sort(nodes.begin(), nodes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::size_t> offsets(static_cast<std::size_t>(max_id + 1) + 1, 0);
  std::vector<NodeId> ids;
  std::size_t next = 0;
  for (NodeId v = 0; v <= max_id; ++v) {
    if (next < nodes.size() && nodes[next].first == v) {
      node_candidates(grid, v, nodes[next].second, radius, ids);
      ++next;
    }
    offsets[static_cast<std::size_t>(v) + 1] = ids.size();
  }
  return {std::move(offsets), std::move(ids)};
}

template <class Config>
CandidateList epoch_candidates(const BucketGrid& grid, const Config& cfg) {
  return epoch_candidates(grid, cfg.comm_radius, cfg.epoch_length);
}

}  // namespace edgesim
