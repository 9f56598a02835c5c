#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"

using namespace lep;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("lep_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Config, ParsesRepeatedKeysAndComments) {
  std::istringstream in(
      "# comment\nshape = disc\nshape = square  # trailing\nL = 40\nsamples=12\nseed = 7\n"
      "firsthit_interval = 0.5, 0.7\npassright_interval=0.3,0.5\npassright_interval=0.5,0.7\n"
      "dimension_L = 10, 20\ndimension_L = 30\nraw = true\nz = 0, -1\n");
  const RunConfig c = parse_config(in);
  EXPECT_EQ(c.shapes, (std::vector<Shape>{Shape::disc, Shape::square}));
  EXPECT_EQ(c.L, 40);
  EXPECT_EQ(c.samples, 12u);
  EXPECT_EQ(c.seed, 7u);
  ASSERT_EQ(c.firsthit_intervals.size(), 1u);
  EXPECT_EQ(c.firsthit_intervals[0], (Interval{0.5, 0.7}));
  EXPECT_EQ(c.passright_intervals.size(), 2u);
  EXPECT_EQ(c.dimension_L, (std::vector<double>{10, 20, 30}));
  EXPECT_TRUE(c.raw);
  ASSERT_TRUE(c.z.has_value());
  EXPECT_EQ(c.z->y, -1.0);
}

TEST(Config, Errors) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_config(in);
  };
  EXPECT_THROW(parse("colour = red\n"), std::invalid_argument);
  EXPECT_THROW(parse("samples = -3\n"), std::invalid_argument);
  EXPECT_THROW(parse("L = abc\n"), std::invalid_argument);
  EXPECT_THROW(parse("firsthit_interval = 2, 1\n"), std::invalid_argument);
  EXPECT_THROW(parse("shape = blob\n"), std::invalid_argument);
  EXPECT_THROW(parse("just words\n"), std::invalid_argument);
  RunConfig c;
  c.samples = 0;
  EXPECT_THROW(validate_config(c), std::invalid_argument);
  c = RunConfig{};
  c.passright_intervals = {{0.5, 1.5}};
  EXPECT_THROW(validate_config(c), std::invalid_argument);
}

TEST(Config, HashIgnoresWorkersAndOutput) {
  RunConfig a, b;
  b.workers = 8;
  b.out = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  EXPECT_EQ(file_header(a).rfind("# lep 0.1.0 config_hash=", 0), 0u);
}

TEST(Campaign, ProbeLayoutSharesLines) {
  const auto p = probe_layout({{0.2, 0.4}, {0.4, 0.6}, {0.6, 0.8}}, 21);
  EXPECT_EQ(p.ts.size(), 61u);
  EXPECT_EQ(p.interval_lines[0].back(), p.interval_lines[1].front());
  for (const auto& l : p.interval_lines) EXPECT_EQ(l.size(), 21u);
}

TEST(Campaign, FirstHitSmokeTenSamples) {
  RunConfig c;
  c.shapes = {Shape::disc};
  c.L = 30;
  c.samples = 10;
  c.out = scratch_dir("smoke").string();
  auto res = run_campaign(c, true, false, false);
  ASSERT_EQ(res.firsthit.size(), 3u);
  std::set<double> levels;
  for (std::size_t i = 0; i < kCdfGridSize; ++i) levels.insert(res.firsthit[0].cdf.at_grid(i));
  // A 10-sample empirical cdf takes values k/10 only.
  for (double v : levels) EXPECT_NEAR(v * 10, std::round(v * 10), 1e-12);
  std::ostringstream summary;
  write_campaign(c, res, summary);
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(c.out) / "firsthit_disc_0.4-0.6.csv"));
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(c.out) / "distances.csv"));
  EXPECT_NE(summary.str().find("\"kind\":\"firsthit\""), std::string::npos);
}

TEST(Campaign, OutputIndependentOfWorkerCount) {
  RunConfig c;
  c.shapes = {Shape::square, Shape::half_disc};
  c.L = 25;
  c.samples = 3000;
  c.theta_grid = 19;
  c.t_grid = 5;
  c.dump_paths = 3;
  std::vector<std::string> contents[2];
  std::vector<std::string> names;
  for (int run = 0; run < 2; ++run) {
    c.workers = run == 0 ? 1 : 4;
    c.out = scratch_dir("det" + std::to_string(run)).string();
    auto fh = run_campaign(c, true, true, false);
    std::ostringstream summary;
    write_campaign(c, fh, summary);
    names = fh.files;
    for (const auto& f : fh.files) contents[run].push_back(slurp(std::filesystem::path(c.out) / f));
  }
  ASSERT_EQ(contents[0].size(), contents[1].size());
  for (std::size_t i = 0; i < contents[0].size(); ++i) EXPECT_EQ(contents[0][i], contents[1][i]) << names[i];
}

TEST(Campaign, DimensionNeedsFourLengths) {
  RunConfig c;
  c.dimension_L = {36, 50, 71};
  try {
    run_dimension(c, false);
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("at least 4 distinct L"), std::string::npos);
  }
}

TEST(Campaign, SyntheticDimensionRecoversAnsatz) {
  RunConfig c;
  c.synthetic = true;
  c.synthetic_noise = 0.0;
  c.dimension_L = {36, 50, 71, 100, 141, 200, 282, 400, 565, 800};
  c.out = scratch_dir("synthetic").string();
  auto r = run_dimension(c, false);
  EXPECT_NEAR(r.fit.inv_nu, 4.0 / 3.0, 1e-10);
  std::ostringstream summary;
  write_dimension(c, r, summary);
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(c.out) / "fit.json"));
  const auto obs = slurp(std::filesystem::path(c.out) / "dimension_obs.csv");
  EXPECT_NE(obs.find("L,size,mean,stderr\n"), std::string::npos);
}

TEST(Campaign, SmallRealDimensionRun) {
  RunConfig c;
  c.shapes = {Shape::triangle};
  c.dimension_L = {20, 26, 32, 40, 50};
  c.samples = 2000;
  auto r = run_dimension(c, false);
  ASSERT_EQ(r.observations.size(), 5u);
  for (std::size_t i = 1; i < r.observations.size(); ++i)
    EXPECT_GT(r.observations[i].mean_steps, r.observations[i - 1].mean_steps);
  ASSERT_EQ(r.nominal_L, c.dimension_L);
  // boundary trimming loses a few lattice units of side, never more than ~two hexes per side
  for (std::size_t i = 0; i < r.observations.size(); ++i) {
    EXPECT_LT(r.observations[i].L, c.dimension_L[i]);
    EXPECT_GT(r.observations[i].L, c.dimension_L[i] - 6.0);
  }
  c.effective_size = false;
  c.registration_grid = 1;
  auto nominal = run_dimension(c, false);
  for (std::size_t i = 0; i < nominal.observations.size(); ++i)
    EXPECT_EQ(nominal.observations[i].L, c.dimension_L[i]);
}

TEST(Campaign, UnitAreasMatchLargeDiscretizations) {
  for (Shape s : {Shape::triangle, Shape::square, Shape::disc, Shape::half_disc}) {
    const auto d = build_domain(standard_spec(s, 400));
    const double area = static_cast<double>(d.size()) * 1.5 * kSqrt3;
    EXPECT_NEAR(std::sqrt(area / shape::unit_area(s)) / 400.0, 1.0, 0.02) << shape_name(s);
  }
}

TEST(Campaign, OracleConfig) {
  RunConfig c;
  c.shapes = {Shape::half_disc};
  const DomainSpec toy = testutil::oracle_toy_spec();
  c.L = toy.L;
  c.offset = toy.offset;
  c.z = toy.z;
  c.w = toy.w;
  c.samples = 20000;
  c.oracle_threshold = 0.05;
  c.out = scratch_dir("oracle").string();
  std::ostringstream summary;
  EXPECT_TRUE(run_oracle_config(c, summary).pass());
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(c.out) / "oracle_raw.csv"));
  c.mutate_eraser = true;
  EXPECT_FALSE(run_oracle_config(c, summary, false).pass());
}

TEST(Campaign, SleCurveFile) {
  RunConfig c;
  c.theta_grid = 9;
  c.out = scratch_dir("sle").string();
  std::ostringstream summary;
  write_sle_curve(c, {8.0 / 3.0, 6.0}, summary);
  const auto s = slurp(std::filesystem::path(c.out) / "sle_curve.csv");
  EXPECT_NE(s.find("theta,kappa_2.66666666667,kappa_6\n"), std::string::npos);
}
