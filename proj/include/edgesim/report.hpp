#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgesim/config.hpp"
#include "edgesim/engine.hpp"
#include "edgesim/metrics.hpp"

namespace edgesim {

// All CSV output: header row, '.' decimal separator, '\n' line endings.

inline constexpr const char* kEpochCsvHeader = "epoch_id,success,delay_hops,deliveries,emissions";

inline void write_epoch_csv(std::ostream& out, const std::vector<EpochRecord>& records) {
  out << kEpochCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.epoch_id << ',' << (r.success ? 1 : 0) << ',';
    if (r.delay_hops) out << *r.delay_hops;
    out << ',' << r.deliveries << ',' << r.emissions << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

/// Inverse of write_epoch_csv.
inline std::vector<EpochRecord> read_epoch_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kEpochCsvHeader)
    throw std::runtime_error("epoch CSV: unexpected header");
  std::vector<EpochRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != 5) throw std::runtime_error("epoch CSV: bad row '" + line + "'");
    EpochRecord r;
    r.epoch_id = std::stoi(cells[0]);
    r.success = cells[1] == "1";
    if (!cells[2].empty()) r.delay_hops = std::stoi(cells[2]);
    r.deliveries = std::stoll(cells[3]);
    r.emissions = std::stoll(cells[4]);
    out.push_back(r);
  }
  return out;
}

inline nlohmann::ordered_json metrics_json(const AggregateMetrics& m) {
  nlohmann::ordered_json j;
  j["epochs"] = m.epochs;
  j["successes"] = m.successes;
  j["success_rate"] = m.success_rate;
  if (m.delay_hops) {
    j["mean_delay_hops"] = m.delay_hops->mean;
    j["stddev_delay_hops"] = m.delay_hops->stddev;
  } else {
    j["mean_delay_hops"] = nullptr;
    j["stddev_delay_hops"] = nullptr;
  }
  j["mean_deliveries"] = m.deliveries.mean;
  j["stddev_deliveries"] = m.deliveries.stddev;
  j["mean_emissions"] = m.emissions.mean;
  j["stddev_emissions"] = m.emissions.stddev;
  return j;
}

inline nlohmann::ordered_json summary_json(const SimConfig& cfg, const AggregateMetrics& m) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json c;
  for (const auto& [k, v] : to_key_values(cfg)) c[k] = v;
  j["config"] = c;
  j["empty"] = m.empty();
  j["metrics"] = metrics_json(m);
  auto series = nlohmann::ordered_json::array();
  for (const auto& [step, frac] : m.border_occupancy_series) series.push_back({step, frac});
  j["border_occupancy"] = series;
  return j;
}

inline void write_border_csv(std::ostream& out,
                             const std::vector<std::pair<std::int64_t, double>>& series) {
  out << "step,border_fraction\n";
  for (const auto& [step, frac] : series) out << step << ',' << detail::format_double(frac) << '\n';
}

inline void write_positions_csv(std::ostream& out, const std::vector<Position>& positions) {
  out << "x,y\n";
  for (const auto& p : positions) out << p.x << ',' << p.y << '\n';
}

/// Mobility-only run: border fraction after each of `steps` time-steps, band
/// = comm_radius.
inline std::vector<std::pair<std::int64_t, double>> border_series(const SimConfig& cfg,
                                                                  std::int64_t steps) {
  World world(cfg);
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(steps, 0)));
  for (std::int64_t s = 1; s <= steps; ++s) {
    world.mobility_tick();
    out.emplace_back(s, world.border_fraction());
  }
  return out;
}

}  // namespace edgesim
