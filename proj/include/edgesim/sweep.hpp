#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "edgesim/config.hpp"
#include "edgesim/engine.hpp"
#include "edgesim/metrics.hpp"
#include "edgesim/rng.hpp"

namespace edgesim {

inline const std::vector<std::string>& sweep_axes() {
  static const std::vector<std::string> axes = {"num_end_nodes", "forward_prob", "emit_radius",
                                                "half_angle",    "edge_count",   "mobility",
                                                "ttl"};
  return axes;
}

struct SweepSpec {
  ConfigParams base;
  std::string axis;
  std::vector<std::string> values;
  int seeds_per_point = 1;
};

/// Seed of replicate `replicate` at the `value_index`-th axis value:
/// splitmix64(master ^ splitmix64(value_index << 32 | replicate)).
inline std::uint64_t point_seed(std::uint64_t master, std::uint64_t value_index,
                                std::uint64_t replicate) {
  return splitmix64(master ^ splitmix64((value_index << 32) | (replicate & 0xffffffffULL)));
}

/// Config of one sweep point. Sweeping a policy parameter selects that policy.
inline SimConfig sweep_point_config(const SweepSpec& spec, std::size_t value_index,
                                    int replicate) {
  ConfigParams p = spec.base;
  set_param(p, spec.axis, spec.values.at(value_index));
  if (spec.axis == "forward_prob") p.policy = "probabilistic";
  else if (spec.axis == "emit_radius") p.policy = "reduced_range";
  else if (spec.axis == "half_angle") p.policy = "directed";
  p.seed = point_seed(spec.base.seed, value_index, static_cast<std::uint64_t>(replicate));
  return validate_config(to_sim_config(p));
}

/// Checks the axis, values and every point config up front.
inline void validate_sweep(const SweepSpec& spec) {
  if (std::find(sweep_axes().begin(), sweep_axes().end(), spec.axis) == sweep_axes().end())
    throw ConfigError("axis", "unknown sweep axis '" + spec.axis + "'");
  if (spec.values.empty()) throw ConfigError("values", "value list must not be empty");
  if (spec.seeds_per_point < 1) throw ConfigError("seeds", "must be >= 1");
  for (std::size_t i = 0; i < spec.values.size(); ++i) (void)sweep_point_config(spec, i, 0);
}

struct SweepRow {
  std::string axis_value;
  std::uint64_t seed = 0;
  AggregateMetrics metrics;
};

/// Runs every (value, replicate) point on `jobs` worker threads. Rows come
/// back in (value, replicate) order regardless of scheduling.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned jobs = 1) {
  validate_sweep(spec);
  const std::size_t per = static_cast<std::size_t>(spec.seeds_per_point);
  const std::size_t total = spec.values.size() * per;
  std::vector<SweepRow> rows(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        const SimConfig cfg = sweep_point_config(spec, i / per, static_cast<int>(i % per));
        SimulationResult r = run_simulation(cfg);
        rows[i] = {spec.values[i / per], cfg.seed, std::move(r.metrics)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  using detail::format_double;
  out << "axis_value,seed,success_rate,mean_delay_hops,mean_deliveries,mean_emissions\n";
  for (const auto& r : rows) {
    out << r.axis_value << ',' << r.seed << ',' << format_double(r.metrics.success_rate) << ',';
    if (r.metrics.delay_hops) out << format_double(r.metrics.delay_hops->mean);
    out << ',' << format_double(r.metrics.deliveries.mean) << ','
        << format_double(r.metrics.emissions.mean) << '\n';
  }
}

/// Figure-ready rows: per axis value, mean and sample stddev across seeds.
/// Delay statistics only use runs with at least one success.
inline void write_sweep_aggregate_csv(std::ostream& out, const SweepSpec& spec,
                                      const std::vector<SweepRow>& rows) {
  using detail::format_double;
  out << "axis_value,runs,success_rate_mean,success_rate_std,mean_delay_hops_mean,"
         "mean_delay_hops_std,mean_deliveries_mean,mean_deliveries_std,mean_emissions_mean,"
         "mean_emissions_std\n";
  for (const auto& value : spec.values) {
    std::vector<double> success, delay, deliveries, emissions;
    for (const auto& r : rows) {
      if (r.axis_value != value) continue;
      success.push_back(r.metrics.success_rate);
      if (r.metrics.delay_hops) delay.push_back(r.metrics.delay_hops->mean);
      deliveries.push_back(r.metrics.deliveries.mean);
      emissions.push_back(r.metrics.emissions.mean);
    }
    auto cell = [&](const std::vector<double>& v) {
      if (v.empty()) return std::string(",");
      const MeanStd ms = mean_std(v);
      return format_double(ms.mean) + "," + format_double(ms.stddev);
    };
    out << value << ',' << success.size() << ',' << cell(success) << ',' << cell(delay) << ','
        << cell(deliveries) << ',' << cell(emissions) << '\n';
  }
}

}  // namespace edgesim
