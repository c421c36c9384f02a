#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace edgesim {

struct EpochRecord {
  std::int32_t epoch_id = 0;
  bool success = false;
  std::optional<std::int32_t> delay_hops;  // hops of the first copy to reach any edge node
  std::int64_t deliveries = 0;              // point-to-point receipts, duplicates included
  std::int64_t emissions = 0;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single value

  friend bool operator==(const MeanStd&, const MeanStd&) = default;
};

struct AggregateMetrics {
  std::size_t epochs = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  std::optional<MeanStd> delay_hops;  // over successful epochs only
  MeanStd deliveries;                 // over all epochs
  MeanStd emissions;
  std::vector<std::pair<std::int64_t, double>> border_occupancy_series;

  bool empty() const noexcept { return epochs == 0; }

  friend bool operator==(const AggregateMetrics&, const AggregateMetrics&) = default;
};

namespace detail {

// Accumulates integers exactly so that the result does not depend on the
// order of the records.
struct ExactMoments {
  long double sum = 0;
  long double sum_sq = 0;
  std::size_t n = 0;

  void add(std::int64_t v) {
    const auto x = static_cast<long double>(v);
    sum += x;
    sum_sq += x * x;
    ++n;
  }

  MeanStd result() const {
    if (n == 0) return {};
    const long double mean = sum / static_cast<long double>(n);
    long double var = 0;
    if (n > 1) {
      var = (sum_sq - sum * mean) / static_cast<long double>(n - 1);
      if (var < 0) var = 0;
    }
    return {static_cast<double>(mean), static_cast<double>(std::sqrt(var))};
  }
};

}  // namespace detail

/// Success rate, delay (successes only), deliveries and emissions (all epochs).
inline AggregateMetrics aggregate(std::span<const EpochRecord> records) {
  AggregateMetrics out;
  out.epochs = records.size();
  if (records.empty()) return out;
  detail::ExactMoments delay, deliveries, emissions;
  for (const auto& r : records) {
    if (r.success) {
      ++out.successes;
      if (r.delay_hops) delay.add(*r.delay_hops);
    }
    deliveries.add(r.deliveries);
    emissions.add(r.emissions);
  }
  out.success_rate = static_cast<double>(out.successes) / static_cast<double>(out.epochs);
  if (delay.n > 0) out.delay_hops = delay.result();
  out.deliveries = deliveries.result();
  out.emissions = emissions.result();
  return out;
}

/// Mean and sample standard deviation of arbitrary values (e.g. per-seed
/// summaries in a sweep).
inline MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) return {};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  if (values.size() > 1) {
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size() - 1);
  }
  return {mean, std::sqrt(var)};
}

}  // namespace edgesim
