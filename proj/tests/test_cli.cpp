#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EDGESIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("edgesim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(dir_ / "small.cfg") << "# small world\n"
                                         "grid_size = 300\n"
                                         "num_end_nodes = 900\n"
                                         "num_epochs = 12\n"
                                         "warmup_steps = 20\n"
                                         "edge_count = 4\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunWritesCsvAndJson) {
  ASSERT_EQ(run_cli("run --config " + path("small.cfg") + " --out " + path("out/epochs.csv")), 0);
  const auto csv = slurp(dir_ / "out/epochs.csv");
  EXPECT_EQ(count_lines(csv), 13u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "epoch_id,success,delay_hops,deliveries,emissions");
  EXPECT_NE(slurp(dir_ / "out/epochs.json").find("\"success_rate\""), std::string::npos);
}

TEST_F(Cli, RunIsByteIdentical) {
  const std::string base = "run --config " + path("small.cfg") + " --set seed=7 --out ";
  ASSERT_EQ(run_cli(base + path("a.csv")), 0);
  ASSERT_EQ(run_cli(base + path("b.csv")), 0);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
  EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json"));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("run --config " + path("missing.cfg") + " --out " + path("x.csv")), 1);
  EXPECT_EQ(run_cli("run --config " + path("small.cfg") + " --set ttl=0 --out " + path("x.csv")),
            2);
  EXPECT_EQ(run_cli("run --config " + path("small.cfg") + " --set nope=1 --out " + path("x.csv")),
            2);
  EXPECT_FALSE(fs::exists(dir_ / "x.csv"));
}

TEST_F(Cli, TtlErrorNamesTheKey) {
  const std::string cmd = std::string(EDGESIM_CLI_PATH) + " run --config " + path("small.cfg") +
                          " --set ttl=0 --out " + path("x.csv") + " 2>" + path("err.txt");
  EXPECT_NE(std::system(cmd.c_str()), 0);
  EXPECT_NE(slurp(dir_ / "err.txt").find("ttl"), std::string::npos);
}

TEST_F(Cli, SweepRowCounts) {
  ASSERT_EQ(run_cli("sweep --config " + path("small.cfg") +
                    " --set num_epochs=2 --axis forward_prob --values 0.3,0.5,0.7,1.0 --seeds 5"
                    " --jobs 2 --out " + path("sw")),
            0);
  EXPECT_EQ(count_lines(slurp(dir_ / "sw/sweep_forward_prob.csv")), 21u);
  EXPECT_EQ(count_lines(slurp(dir_ / "sw/sweep_forward_prob_agg.csv")), 5u);
  EXPECT_EQ(run_cli("sweep --config " + path("small.cfg") +
                    " --axis forward_prob --values 1.7 --out " + path("bad")),
            2);
}

TEST_F(Cli, BorderAndPlace) {
  ASSERT_EQ(run_cli("border --config " + path("small.cfg") + " --steps 0 --out " + path("b0.csv")),
            0);
  EXPECT_EQ(slurp(dir_ / "b0.csv"), "step,border_fraction\n");
  ASSERT_EQ(run_cli("border --config " + path("small.cfg") + " --steps 30 --out " + path("b.csv")),
            0);
  EXPECT_EQ(count_lines(slurp(dir_ / "b.csv")), 31u);
  ASSERT_EQ(run_cli("place --set edge_count=4 --out " + path("p.csv")), 0);
  EXPECT_EQ(slurp(dir_ / "p.csv"), "x,y\n250,250\n750,250\n250,750\n750,750\n");
}
