#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edgesim/types.hpp"

namespace edgesim {

/// Raised for any invalid configuration. `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

namespace detail {

inline void check_probability(double p, const char* field) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(field, "probability out of range [0, 1]");
}

inline bool is_perfect_square(std::int64_t k) {
  if (k < 0) return false;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(k))));
  while (r * r > k) --r;
  while ((r + 1) * (r + 1) <= k) ++r;
  return r * r == k;
}

}  // namespace detail

/// Returns `cfg` unchanged when every invariant holds; otherwise throws a
/// ConfigError for the first violated one.
inline const SimConfig& validate_config(const SimConfig& cfg) {
  if (cfg.grid_size < 2) throw ConfigError("grid_size", "must be >= 2");
  if (cfg.num_end_nodes < 1) throw ConfigError("num_end_nodes", "must be >= 1");
  if (!(cfg.comm_radius > 0.0) || !std::isfinite(cfg.comm_radius))
    throw ConfigError("comm_radius", "must be > 0");
  if (cfg.ttl < 1) throw ConfigError("ttl", "must be >= 1");
  if (cfg.epoch_length < cfg.ttl + 2)
    throw ConfigError("epoch_length", "epoch_length must be >= ttl+2");
  if (cfg.num_epochs < 0) throw ConfigError("num_epochs", "must be >= 0");
  if (cfg.warmup_steps < 0) throw ConfigError("warmup_steps", "must be >= 0");

  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, mobility_model::RandomIndependent>) {
          detail::check_probability(m.move_prob, "move_prob");
        } else if constexpr (std::is_same_v<T, mobility_model::RandomWaypoint>) {
          detail::check_probability(m.activate_prob, "activate_prob");
        } else if constexpr (std::is_same_v<T, mobility_model::CommunityBased>) {
          detail::check_probability(m.activate_prob, "activate_prob");
          if (!(m.community_radius > 0.0) || !std::isfinite(m.community_radius))
            throw ConfigError("community_radius", "must be > 0");
        }
      },
      cfg.mobility);

  std::visit(
      [&cfg](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, policy::Probabilistic>) {
          detail::check_probability(p.forward_prob, "forward_prob");
        } else if constexpr (std::is_same_v<T, policy::ReducedRange>) {
          if (!(p.emit_radius > 0.0 && p.emit_radius <= cfg.comm_radius))
            throw ConfigError("emit_radius", "must satisfy 0 < emit_radius <= comm_radius");
        } else if constexpr (std::is_same_v<T, policy::Directed>) {
          if (!(p.half_angle > 0.0 && p.half_angle <= 180.0))
            throw ConfigError("half_angle", "must satisfy 0 < half_angle <= 180");
          if (!in_grid(p.target, cfg.grid_size))
            throw ConfigError("target", "must lie inside the grid");
        }
      },
      cfg.policy);

  const std::int64_t cells = std::int64_t{cfg.grid_size} * cfg.grid_size;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, placement_spec::Explicit>) {
          if (s.positions.empty()) throw ConfigError("edge_positions", "must not be empty");
          for (const auto& p : s.positions)
            if (!in_grid(p, cfg.grid_size))
              throw ConfigError("edge_positions", "position outside the grid");
        } else {
          if (s.k < 1) throw ConfigError("edge_count", "must be >= 1");
          if (s.k > cells) throw ConfigError("edge_count", "exceeds the number of cells");
          if constexpr (std::is_same_v<T, placement_spec::OptimizedLattice>) {
            if (!detail::is_perfect_square(s.k))
              throw ConfigError("edge_count", "optimized placement needs a perfect square");
          }
        }
      },
      cfg.placement);
  return cfg;
}

// ---------------------------------------------------------------------------
// Flat `key = value` configuration files.
//
// Every SimConfig field maps to one key. Parameters belonging to models or
// policies that are not selected are accepted and kept, so that a sweep can
// switch e.g. `policy` without re-specifying its parameters.

struct ConfigParams {
  std::int32_t grid_size = 1000;
  std::int32_t num_end_nodes = 10000;
  double comm_radius = 40.0;
  std::int32_t ttl = 20;
  std::int32_t epoch_length = 25;
  std::int32_t num_epochs = 1000;
  std::int32_t warmup_steps = 1000;
  std::uint64_t seed = 1;

  std::string mobility = "random_waypoint";
  double move_prob = 0.5;
  double activate_prob = 0.0125;
  std::optional<double> community_radius;  // defaults to comm_radius

  std::string policy = "pure_broadcast";
  double forward_prob = 1.0;
  std::optional<double> emit_radius;  // defaults to comm_radius
  double half_angle = 90.0;
  std::optional<Position> target;  // defaults to the grid center

  std::string placement = "optimized";
  std::int32_t edge_count = 9;
  std::vector<Position> edge_positions;
};

inline const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = {
      "grid_size",     "num_end_nodes", "comm_radius", "ttl",          "epoch_length",
      "num_epochs",    "warmup_steps",  "seed",        "mobility",     "move_prob",
      "activate_prob", "community_radius", "policy",   "forward_prob", "emit_radius",
      "half_angle",    "target",        "placement",   "edge_count",   "edge_positions"};
  return keys;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw ConfigError(std::string(key), "invalid value '" + std::string(text) + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value))
      throw ConfigError(std::string(key), "invalid value '" + std::string(text) + "'");
  }
  return value;
}

inline Position parse_position(std::string_view key, std::string_view text) {
  text = trim(text);
  const auto comma = text.find(',');
  if (comma == std::string_view::npos)
    throw ConfigError(std::string(key), "expected 'x,y', got '" + std::string(text) + "'");
  return {parse_number<std::int32_t>(key, text.substr(0, comma)),
          parse_number<std::int32_t>(key, text.substr(comma + 1))};
}

// Shortest representation that round-trips, '.' decimal separator.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string format_position(Position p) {
  return std::to_string(p.x) + "," + std::to_string(p.y);
}

}  // namespace detail

/// Parses a semicolon-separated list "x,y;x,y;...".
inline std::vector<Position> parse_position_list(std::string_view key, std::string_view text) {
  std::vector<Position> out;
  text = detail::trim(text);
  while (!text.empty()) {
    const auto semi = text.find(';');
    const auto item = detail::trim(text.substr(0, semi));
    if (!item.empty()) out.push_back(detail::parse_position(key, item));
    if (semi == std::string_view::npos) break;
    text = text.substr(semi + 1);
  }
  return out;
}

inline std::string format_position_list(const std::vector<Position>& positions) {
  std::string out;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i) out += ';';
    out += detail::format_position(positions[i]);
  }
  return out;
}

/// Sets one key. Throws ConfigError for unknown keys or unparsable values.
inline void set_param(ConfigParams& p, std::string_view key, std::string_view raw) {
  using detail::parse_number;
  const std::string_view value = detail::trim(raw);
  const std::string k(key);
  auto one_of = [&](std::initializer_list<std::string_view> allowed) {
    for (auto a : allowed)
      if (a == value) return std::string(value);
    std::string msg = "invalid value '" + std::string(value) + "', expected one of:";
    for (auto a : allowed) msg += " " + std::string(a);
    throw ConfigError(k, msg);
  };

  if (key == "grid_size") p.grid_size = parse_number<std::int32_t>(key, value);
  else if (key == "num_end_nodes") p.num_end_nodes = parse_number<std::int32_t>(key, value);
  else if (key == "comm_radius") p.comm_radius = parse_number<double>(key, value);
  else if (key == "ttl") p.ttl = parse_number<std::int32_t>(key, value);
  else if (key == "epoch_length") p.epoch_length = parse_number<std::int32_t>(key, value);
  else if (key == "num_epochs") p.num_epochs = parse_number<std::int32_t>(key, value);
  else if (key == "warmup_steps") p.warmup_steps = parse_number<std::int32_t>(key, value);
  else if (key == "seed") p.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "mobility")
    p.mobility = one_of({"static", "random_independent", "random_waypoint", "community"});
  else if (key == "move_prob") p.move_prob = parse_number<double>(key, value);
  else if (key == "activate_prob") p.activate_prob = parse_number<double>(key, value);
  else if (key == "community_radius") p.community_radius = parse_number<double>(key, value);
  else if (key == "policy")
    p.policy = one_of({"pure_broadcast", "probabilistic", "reduced_range", "directed"});
  else if (key == "forward_prob") p.forward_prob = parse_number<double>(key, value);
  else if (key == "emit_radius") p.emit_radius = parse_number<double>(key, value);
  else if (key == "half_angle") p.half_angle = parse_number<double>(key, value);
  else if (key == "target") p.target = detail::parse_position(key, value);
  else if (key == "placement") p.placement = one_of({"optimized", "random", "explicit"});
  else if (key == "edge_count") p.edge_count = parse_number<std::int32_t>(key, value);
  else if (key == "edge_positions") p.edge_positions = parse_position_list(key, value);
  else throw ConfigError(k, "unknown key");
}

/// Applies an override of the form "key=value".
inline void apply_override(ConfigParams& p, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError(std::string(detail::trim(assignment)), "override must be key=value");
  set_param(p, detail::trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

/// Reads `key = value` lines; '#' starts a comment.
inline ConfigParams parse_config(std::istream& in, ConfigParams base = {}) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = detail::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    set_param(base, detail::trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  return base;
}

inline ConfigParams parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline SimConfig to_sim_config(const ConfigParams& p) {
  SimConfig cfg;
  cfg.grid_size = p.grid_size;
  cfg.num_end_nodes = p.num_end_nodes;
  cfg.comm_radius = p.comm_radius;
  cfg.ttl = p.ttl;
  cfg.epoch_length = p.epoch_length;
  cfg.num_epochs = p.num_epochs;
  cfg.warmup_steps = p.warmup_steps;
  cfg.seed = p.seed;

  if (p.mobility == "static") cfg.mobility = mobility_model::Static{};
  else if (p.mobility == "random_independent")
    cfg.mobility = mobility_model::RandomIndependent{p.move_prob};
  else if (p.mobility == "random_waypoint")
    cfg.mobility = mobility_model::RandomWaypoint{p.activate_prob};
  else
    cfg.mobility = mobility_model::CommunityBased{p.activate_prob,
                                                  p.community_radius.value_or(p.comm_radius)};

  if (p.policy == "pure_broadcast") cfg.policy = policy::PureBroadcast{};
  else if (p.policy == "probabilistic") cfg.policy = policy::Probabilistic{p.forward_prob};
  else if (p.policy == "reduced_range")
    cfg.policy = policy::ReducedRange{p.emit_radius.value_or(p.comm_radius)};
  else
    cfg.policy = policy::Directed{
        p.half_angle, p.target.value_or(Position{p.grid_size / 2, p.grid_size / 2})};

  if (p.placement == "optimized") cfg.placement = placement_spec::OptimizedLattice{p.edge_count};
  else if (p.placement == "random") cfg.placement = placement_spec::UniformRandom{p.edge_count};
  else cfg.placement = placement_spec::Explicit{p.edge_positions};
  return cfg;
}

/// Loads, converts, and validates. Overrides take precedence over the file.
inline SimConfig load_config(std::istream& in, const std::vector<std::string>& overrides = {}) {
  ConfigParams params = parse_config(in);
  for (const auto& o : overrides) apply_override(params, o);
  return validate_config(to_sim_config(params));
}

/// Key/value rendering of a SimConfig, in config_keys() order, listing only the
/// parameters that the selected model, policy and placement use.
inline std::vector<std::pair<std::string, std::string>> to_key_values(const SimConfig& cfg) {
  using detail::format_double;
  std::vector<std::pair<std::string, std::string>> kv = {
      {"grid_size", std::to_string(cfg.grid_size)},
      {"num_end_nodes", std::to_string(cfg.num_end_nodes)},
      {"comm_radius", format_double(cfg.comm_radius)},
      {"ttl", std::to_string(cfg.ttl)},
      {"epoch_length", std::to_string(cfg.epoch_length)},
      {"num_epochs", std::to_string(cfg.num_epochs)},
      {"warmup_steps", std::to_string(cfg.warmup_steps)},
      {"seed", std::to_string(cfg.seed)},
  };
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, mobility_model::Static>) {
          kv.emplace_back("mobility", "static");
        } else if constexpr (std::is_same_v<T, mobility_model::RandomIndependent>) {
          kv.emplace_back("mobility", "random_independent");
          kv.emplace_back("move_prob", format_double(m.move_prob));
        } else if constexpr (std::is_same_v<T, mobility_model::RandomWaypoint>) {
          kv.emplace_back("mobility", "random_waypoint");
          kv.emplace_back("activate_prob", format_double(m.activate_prob));
        } else {
          kv.emplace_back("mobility", "community");
          kv.emplace_back("activate_prob", format_double(m.activate_prob));
          kv.emplace_back("community_radius", format_double(m.community_radius));
        }
      },
      cfg.mobility);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, policy::PureBroadcast>) {
          kv.emplace_back("policy", "pure_broadcast");
        } else if constexpr (std::is_same_v<T, policy::Probabilistic>) {
          kv.emplace_back("policy", "probabilistic");
          kv.emplace_back("forward_prob", format_double(p.forward_prob));
        } else if constexpr (std::is_same_v<T, policy::ReducedRange>) {
          kv.emplace_back("policy", "reduced_range");
          kv.emplace_back("emit_radius", format_double(p.emit_radius));
        } else {
          kv.emplace_back("policy", "directed");
          kv.emplace_back("half_angle", format_double(p.half_angle));
          kv.emplace_back("target", detail::format_position(p.target));
        }
      },
      cfg.policy);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, placement_spec::OptimizedLattice>) {
          kv.emplace_back("placement", "optimized");
          kv.emplace_back("edge_count", std::to_string(s.k));
        } else if constexpr (std::is_same_v<T, placement_spec::UniformRandom>) {
          kv.emplace_back("placement", "random");
          kv.emplace_back("edge_count", std::to_string(s.k));
        } else {
          kv.emplace_back("placement", "explicit");
          kv.emplace_back("edge_positions", format_position_list(s.positions));
        }
      },
      cfg.placement);
  return kv;
}

inline std::string to_config_text(const SimConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : to_key_values(cfg)) out += k + " = " + v + "\n";
  return out;
}

}  // namespace edgesim
