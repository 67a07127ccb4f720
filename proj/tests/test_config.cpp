#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "normcast/config.hpp"
#include "test_support.hpp"

namespace normcast {
namespace {

using testing::code_of;

Settings parse(const std::string& s) {
  std::istringstream in(s);
  return parse_settings(in);
}

TEST(Settings, Defaults) {
  const auto s = parse("");
  EXPECT_EQ(s.experiment.similarity.epsilon, 0.0);
  EXPECT_EQ(s.experiment.similarity.nu, 5u);
  EXPECT_EQ(s.experiment.similarity.min_common, 5u);
  EXPECT_EQ(s.experiment.confidence.rho, 0.5);
  EXPECT_EQ(s.experiment.confidence.mu, 0.5);
  EXPECT_EQ(s.experiment.separation, "cumulative");
  EXPECT_EQ(s.fallback, FallbackPolicy::Skip);
  EXPECT_EQ(make_policy(s)->name(), "confident");
}

TEST(Settings, ParsesKeys) {
  const auto s = parse(
      "# run settings\n"
      "separation = \"cumulative\"\n"
      "epsilon = 0.5  # inline comment\n"
      "nu = 3\n"
      "min_common = 2\n"
      "fallback = \"neutral\"\n"
      "rho = 0.25\nmu = 0.75\n"
      "policy = hard\neps_prh = -0.4\neps_per = 0.3\n"
      "scale = \"1:5\"\n");
  EXPECT_EQ(s.experiment.similarity.epsilon, 0.5);
  EXPECT_EQ(s.experiment.similarity.nu, 3u);
  EXPECT_EQ(s.experiment.similarity.min_common, 2u);
  EXPECT_EQ(s.fallback, FallbackPolicy::Neutral);
  EXPECT_EQ(s.experiment.confidence.mu, 0.75);
  EXPECT_EQ(s.experiment.scale.hi, 5.0);
  const auto policy = make_policy(s);
  EXPECT_EQ(policy->name(), "hard");
  EXPECT_EQ(policy->thresholds(std::nullopt, {}).prh, -0.4);
}

TEST(Settings, Rejects) {
  EXPECT_EQ(code_of([] { parse("colour = blue\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse("nu\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse("nu = many\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse("fallback = zero\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse("rho = 0.7\n"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { parse("separation = cosine\n"); }), ErrorCode::NotFound);
  EXPECT_EQ(code_of([] { parse("policy = contextual\n"); }), ErrorCode::InvalidArgument);
}

TEST(Settings, ThresholdTableIsRelativeToTheFile) {
  const auto dir = std::filesystem::temp_directory_path() / "normcast_settings_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "run.conf") << "policy = contextual\nthreshold_table = table.csv\n";
    std::ofstream(dir / "table.csv") << "variable,value,eps_prh,eps_per\nsensitivity,high,-0.1,0.9\n";
  }
  const auto s = load_settings(dir / "run.conf");
  EXPECT_EQ(*s.threshold_table, dir / "table.csv");
  EXPECT_EQ(make_policy(s)->thresholds(std::nullopt, {{"sensitivity", "high"}}).prh, -0.1);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace normcast
