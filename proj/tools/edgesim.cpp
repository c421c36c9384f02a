// edgesim: run single experiments, parameter sweeps, mobility-only border
// series and edge placements from a key = value config file.
//
// Exit codes: 0 ok, 1 I/O error, 2 config error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgesim/edgesim.hpp"

namespace fs = std::filesystem;
using namespace edgesim;

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ConfigParams read_params(const std::string& path, const std::vector<std::string>& overrides) {
  ConfigParams params;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    params = parse_config(in);
  }
  for (const auto& o : overrides) apply_override(params, o);
  return params;
}

SimConfig read_config(const std::string& path, const std::vector<std::string>& overrides) {
  return validate_config(to_sim_config(read_params(path, overrides)));
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(text);
  while (std::getline(in, cell, ',')) {
    const auto v = std::string(detail::trim(cell));
    if (!v.empty()) out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-stepped simulator of hybrid edge / peer-to-peer message relaying"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value config file (defaults if omitted)");
    cmd->add_option("--set", overrides, "override key=value (repeatable)")->take_all();
  };

  auto* run = app.add_subcommand("run", "run epochs, write per-epoch CSV and summary JSON");
  add_common(run);
  run->add_option("--out", out_path, "per-epoch CSV path; summary goes next to it as .json")
      ->required();

  std::string axis, values;
  int seeds = 1;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter over several seeds");
  add_common(sweep);
  sweep->add_option("--axis", axis, "num_end_nodes|forward_prob|emit_radius|half_angle|"
                                    "edge_count|mobility|ttl")
      ->required();
  sweep->add_option("--values", values, "comma-separated axis values")->required();
  sweep->add_option("--seeds", seeds, "replicates per value");
  sweep->add_option("--jobs", jobs, "worker threads");
  sweep->add_option("--out", out_path, "output directory")->required();

  std::int64_t steps = 0;
  auto* border = app.add_subcommand("border", "mobility-only border occupancy series");
  add_common(border);
  border->add_option("--steps", steps, "time-steps to simulate")->required();
  border->add_option("--out", out_path, "CSV path")->required();

  auto* place = app.add_subcommand("place", "print edge node coordinates");
  add_common(place);
  place->add_option("--out", out_path, "CSV path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const SimConfig cfg = read_config(config_path, overrides);
      const fs::path csv_path(out_path);
      fs::path json_path = csv_path;
      json_path.replace_extension(".json");
      const SimulationResult result = run_simulation(cfg);
      auto csv = open_out(csv_path);
      write_epoch_csv(csv, result.records);
      finish(csv, csv_path);
      auto json = open_out(json_path);
      json << summary_json(cfg, result.metrics).dump(2) << '\n';
      finish(json, json_path);
    } else if (*sweep) {
      SweepSpec spec{read_params(config_path, overrides), axis, split_values(values), seeds};
      validate_sweep(spec);
      const fs::path dir(out_path);
      std::error_code ec;
      fs::create_directories(dir, ec);
      const auto rows = run_sweep(spec, jobs);
      const fs::path rows_path = dir / ("sweep_" + axis + ".csv");
      const fs::path agg_path = dir / ("sweep_" + axis + "_agg.csv");
      auto rows_out = open_out(rows_path);
      write_sweep_csv(rows_out, rows);
      finish(rows_out, rows_path);
      auto agg_out = open_out(agg_path);
      write_sweep_aggregate_csv(agg_out, spec, rows);
      finish(agg_out, agg_path);
    } else if (*border) {
      const SimConfig cfg = read_config(config_path, overrides);
      if (steps < 0) throw ConfigError("steps", "must be >= 0");
      const fs::path path(out_path);
      const auto series = border_series(cfg, steps);
      auto out = open_out(path);
      write_border_csv(out, series);
      finish(out, path);
    } else if (*place) {
      const SimConfig cfg = read_config(config_path, overrides);
      RngStreams streams(cfg.seed);
      const auto positions = place_edge_nodes(cfg.placement, cfg.grid_size, streams.placement);
      if (out_path.empty()) {
        write_positions_csv(std::cout, positions);
      } else {
        const fs::path path(out_path);
        auto out = open_out(path);
        write_positions_csv(out, positions);
        finish(out, path);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
