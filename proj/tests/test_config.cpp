#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "edgesim/config.hpp"

using namespace edgesim;

namespace {

std::string error_field(const SimConfig& cfg) {
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    return e.field() + " | " + e.what();
  }
  return {};
}

}  // namespace

TEST(Distance, Examples) {
  EXPECT_DOUBLE_EQ(euclidean_distance({0, 0}, {3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(euclidean_distance({500, 500}, {500, 500}), 0.0);
  EXPECT_NEAR(euclidean_distance({500, 500}, {529, 529}), 29.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(euclidean_distance({500, 500}, {529, 529}), 41.012, 1e-3);
}

TEST(Distance, InclusiveBoundary) {
  EXPECT_TRUE(within({500, 500}, {540, 500}, 40.0));
  EXPECT_FALSE(within({500, 500}, {529, 529}, 40.0));
  EXPECT_EQ(chebyshev_distance({1, 1}, {4, -2}), 3);
}

TEST(ValidateConfig, DefaultIsValid) {
  const SimConfig cfg;
  EXPECT_EQ(cfg.grid_size, 1000);
  EXPECT_EQ(cfg.num_end_nodes, 10000);
  EXPECT_EQ(cfg.comm_radius, 40.0);
  EXPECT_EQ(cfg.ttl, 20);
  EXPECT_EQ(cfg.epoch_length, 25);
  EXPECT_NO_THROW(validate_config(cfg));
  EXPECT_EQ(&validate_config(cfg), &cfg);
}

TEST(ValidateConfig, EpochTooShort) {
  SimConfig cfg;
  cfg.epoch_length = 20;
  const auto msg = error_field(cfg);
  EXPECT_EQ(msg.rfind("epoch_length", 0), 0u) << msg;
  EXPECT_NE(msg.find("epoch_length must be >= ttl+2"), std::string::npos) << msg;
  cfg.epoch_length = 22;
  EXPECT_NO_THROW(validate_config(cfg));
  cfg.epoch_length = 21;
  EXPECT_THROW(validate_config(cfg), ConfigError);
}

TEST(ValidateConfig, ProbabilityOutOfRange) {
  SimConfig cfg;
  cfg.policy = policy::Probabilistic{1.3};
  const auto msg = error_field(cfg);
  EXPECT_EQ(msg.rfind("forward_prob", 0), 0u) << msg;
  EXPECT_NE(msg.find("probability out of range"), std::string::npos);
  cfg.policy = policy::Probabilistic{1.0};
  EXPECT_NO_THROW(validate_config(cfg));
  cfg.mobility = mobility_model::RandomIndependent{-0.1};
  EXPECT_THROW(validate_config(cfg), ConfigError);
}

TEST(ValidateConfig, OtherInvariants) {
  auto field_of = [](auto mutate) {
    SimConfig cfg;
    mutate(cfg);
    try {
      validate_config(cfg);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("valid");
  };
  EXPECT_EQ(field_of([](SimConfig& c) { c.grid_size = 1; }), "grid_size");
  EXPECT_EQ(field_of([](SimConfig& c) { c.num_end_nodes = 0; }), "num_end_nodes");
  EXPECT_EQ(field_of([](SimConfig& c) { c.comm_radius = 0; }), "comm_radius");
  EXPECT_EQ(field_of([](SimConfig& c) { c.ttl = 0; }), "ttl");
  EXPECT_EQ(field_of([](SimConfig& c) { c.policy = policy::ReducedRange{41}; }), "emit_radius");
  EXPECT_EQ(field_of([](SimConfig& c) { c.policy = policy::ReducedRange{0}; }), "emit_radius");
  EXPECT_EQ(field_of([](SimConfig& c) { c.policy = policy::Directed{0, {1, 1}}; }), "half_angle");
  EXPECT_EQ(field_of([](SimConfig& c) { c.policy = policy::Directed{181, {1, 1}}; }),
            "half_angle");
  EXPECT_EQ(field_of([](SimConfig& c) { c.policy = policy::Directed{180, {1, 1}}; }), "valid");
  EXPECT_EQ(field_of([](SimConfig& c) { c.policy = policy::Directed{90, {1000, 0}}; }), "target");
  EXPECT_EQ(field_of([](SimConfig& c) { c.placement = placement_spec::OptimizedLattice{8}; }),
            "edge_count");
  EXPECT_EQ(field_of([](SimConfig& c) { c.placement = placement_spec::UniformRandom{0}; }),
            "edge_count");
  EXPECT_EQ(field_of([](SimConfig& c) { c.placement = placement_spec::Explicit{}; }),
            "edge_positions");
  EXPECT_EQ(field_of([](SimConfig& c) {
              c.mobility = mobility_model::CommunityBased{0.1, 0.0};
            }),
            "community_radius");
}

TEST(ConfigFile, ParsesEveryKey) {
  const std::string text = R"(# comment line
grid_size = 500
num_end_nodes = 2500   # trailing comment
comm_radius = 30.5
ttl = 10
epoch_length = 12
num_epochs = 7
warmup_steps = 3
seed = 18446744073709551615
mobility = community
activate_prob = 0.02
community_radius = 25
policy = directed
half_angle = 45
target = 10,20
placement = explicit
edge_positions = 1,2; 3,4
)";
  const SimConfig cfg = validate_config(to_sim_config(parse_config_string(text)));
  EXPECT_EQ(cfg.grid_size, 500);
  EXPECT_EQ(cfg.num_end_nodes, 2500);
  EXPECT_EQ(cfg.comm_radius, 30.5);
  EXPECT_EQ(cfg.ttl, 10);
  EXPECT_EQ(cfg.epoch_length, 12);
  EXPECT_EQ(cfg.num_epochs, 7);
  EXPECT_EQ(cfg.warmup_steps, 3);
  EXPECT_EQ(cfg.seed, 18446744073709551615ULL);
  EXPECT_EQ(cfg.mobility, MobilityModel(mobility_model::CommunityBased{0.02, 25}));
  EXPECT_EQ(cfg.policy, DisseminationPolicy(policy::Directed{45, {10, 20}}));
  EXPECT_EQ(cfg.placement, PlacementSpec(placement_spec::Explicit{{{1, 2}, {3, 4}}}));
}

TEST(ConfigFile, DefaultsForOptionalKeys) {
  const SimConfig cfg = to_sim_config(parse_config_string(
      "grid_size = 200\ncomm_radius = 30\nmobility = community\npolicy = directed\n"));
  EXPECT_EQ(std::get<mobility_model::CommunityBased>(cfg.mobility).community_radius, 30.0);
  EXPECT_EQ(std::get<policy::Directed>(cfg.policy).target, (Position{100, 100}));
  const SimConfig rr = to_sim_config(parse_config_string("policy = reduced_range"));
  EXPECT_EQ(std::get<policy::ReducedRange>(rr.policy).emit_radius, 40.0);
}

TEST(ConfigFile, Errors) {
  EXPECT_THROW(parse_config_string("bogus = 1"), ConfigError);
  EXPECT_THROW(parse_config_string("ttl 20"), ConfigError);
  EXPECT_THROW(parse_config_string("ttl = twenty"), ConfigError);
  EXPECT_THROW(parse_config_string("ttl = 20x"), ConfigError);
  EXPECT_THROW(parse_config_string("comm_radius = nan"), ConfigError);
  EXPECT_THROW(parse_config_string("mobility = teleport"), ConfigError);
  EXPECT_THROW(parse_config_string("target = 5"), ConfigError);
  try {
    parse_config_string("ttl = 20\nbogus_key = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "bogus_key");
  }
}

TEST(ConfigFile, OverridesTakePrecedence) {
  std::istringstream in("ttl = 10\nepoch_length = 12\n");
  const SimConfig cfg = load_config(in, {"ttl=5", " epoch_length = 30 "});
  EXPECT_EQ(cfg.ttl, 5);
  EXPECT_EQ(cfg.epoch_length, 30);
  std::istringstream bad("");
  try {
    load_config(bad, {"ttl=0"});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "ttl");
  }
  std::istringstream none("");
  EXPECT_THROW(load_config(none, {"ttl"}), ConfigError);
}

TEST(ConfigFile, TextRoundTrip) {
  SimConfig cfg;
  cfg.comm_radius = 33.25;
  cfg.policy = policy::Directed{60, {7, 9}};
  cfg.mobility = mobility_model::RandomIndependent{0.3};
  cfg.placement = placement_spec::UniformRandom{5};
  cfg.seed = 99;
  const SimConfig back = to_sim_config(parse_config_string(to_config_text(cfg)));
  EXPECT_EQ(back, cfg);

  SimConfig ex;
  ex.placement = placement_spec::Explicit{{{0, 0}, {999, 5}}};
  ex.mobility = mobility_model::CommunityBased{0.5, 12.5};
  ex.policy = policy::Probabilistic{0.1};
  EXPECT_EQ(to_sim_config(parse_config_string(to_config_text(ex))), ex);
}

TEST(ConfigFile, EveryKeyIsDocumentedAndAccepted) {
  ConfigParams p;
  for (auto key : config_keys()) {
    std::string value = "1";
    if (key == "mobility") value = "static";
    else if (key == "policy") value = "pure_broadcast";
    else if (key == "placement") value = "optimized";
    else if (key == "target" || key == "edge_positions") value = "1,1";
    EXPECT_NO_THROW(set_param(p, key, value)) << key;
  }
}
