#include "cglab/instance.h"

#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "support/fixtures.h"

namespace cglab {
namespace {

GenConfig CspConfig(Category category, std::uint64_t seed) {
  GenConfig config;
  config.kind = ProblemKind::kCsp;
  config.category = category;
  config.seed = seed;
  return config;
}

TEST(GenerateCsp, EasyLengthsStayInsideTheWidthBand) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const CspInstance inst = GenerateCsp(CspConfig(Category::kEasy, seed));
    const CspParams params = SampleCspParams(CspConfig(Category::kEasy, seed));
    EXPECT_EQ(inst.roll_length, 50);
    int pieces = 0;
    for (const Order& o : inst.orders) {
      EXPECT_GE(o.length, 5);
      EXPECT_LE(o.length, 40);
      EXPECT_GE(o.length, std::lround(params.w_min * 50));
      EXPECT_LE(o.length, std::lround(params.w_max * 50));
      pieces += o.demand;
    }
    EXPECT_EQ(pieces, params.piece_count);
    EXPECT_NO_THROW(Validate(inst));
  }
}

TEST(GenerateCsp, CategoryParameterSets) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const CspParams easy = SampleCspParams(CspConfig(Category::kEasy, seed));
    EXPECT_EQ(easy.roll_length, 50);
    EXPECT_TRUE(easy.piece_count == 50 || easy.piece_count == 75 || easy.piece_count == 100 ||
                easy.piece_count == 120);
    EXPECT_TRUE(easy.w_min == 0.1 || easy.w_min == 0.2);
    EXPECT_TRUE(easy.w_max == 0.7 || easy.w_max == 0.8);
    const CspParams hard = SampleCspParams(CspConfig(Category::kHard, seed));
    EXPECT_EQ(hard.roll_length, 200);
    EXPECT_TRUE(hard.piece_count == 125 || hard.piece_count == 150);
    EXPECT_EQ(SampleCspParams(CspConfig(Category::kNormal, seed)).roll_length, 100);
  }
}

TEST(GenerateCsp, SameSeedIsByteIdentical) {
  const auto a = InstanceToJson(Generate(CspConfig(Category::kNormal, 42)));
  const auto b = InstanceToJson(Generate(CspConfig(Category::kNormal, 42)));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, InstanceToJson(Generate(CspConfig(Category::kNormal, 43))));
}

TEST(MergeLengths, EqualLengthsBecomeOneOrder) {
  const std::vector<int> draws = {3, 3, 5};
  const std::vector<Order> expected = {{3, 2}, {5, 1}};
  EXPECT_EQ(MergeLengths(draws), expected);
  const std::vector<int> unsorted = {7, 2, 7, 7};
  const std::vector<Order> merged = {{2, 1}, {7, 3}};
  EXPECT_EQ(MergeLengths(unsorted), merged);
}

TEST(GenerateCsp, ExplicitParamsAndErrors) {
  GenConfig config;
  config.csp = CspParams{10, 3, 0.3, 0.5};
  const CspInstance inst = GenerateCsp(config);
  for (const Order& o : inst.orders) {
    EXPECT_GE(o.length, 3);
    EXPECT_LE(o.length, 5);
  }
  config.csp = CspParams{10, 3, 0.6, 0.5};
  EXPECT_THROW(GenerateCsp(config), InstanceError);
  GenConfig empty;
  EXPECT_THROW(GenerateCsp(empty), InstanceError);
}

GenConfig GcpConfig(int nodes, double p, std::uint64_t seed) {
  GenConfig config;
  config.kind = ProblemKind::kGcp;
  config.gcp = GcpParams{nodes, p};
  config.seed = seed;
  return config;
}

TEST(GenerateGcp, Deterministic) {
  GenConfig config;
  config.kind = ProblemKind::kGcp;
  config.category = Category::kEasy;
  config.seed = 9;
  const GcpInstance a = GenerateGcp(config);
  EXPECT_EQ(a.node_count, 30);
  EXPECT_EQ(a, GenerateGcp(config));
}

TEST(GenerateGcp, CertainEdgesGiveTheCompleteGraph) {
  const GcpInstance g = GenerateGcp(GcpConfig(4, 1.0, 0));
  EXPECT_EQ(g.edges.size(), 6u);
  EXPECT_TRUE(GenerateGcp(GcpConfig(4, 0.0, 0)).edges.empty());
}

TEST(GenerateGcp, EdgeCountMatchesTheBinomialMean) {
  // C(50, 2) = 1225 Bernoulli(0.5) trials per graph.
  const int seeds = 1000;
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s) sum += GenerateGcp(GcpConfig(50, 0.5, s)).edges.size();
  const double mean = sum / seeds;
  const double sigma_of_mean = std::sqrt(1225 * 0.25 / seeds);
  EXPECT_NEAR(mean, 612.5, 3 * sigma_of_mean);
}

TEST(GenerateGcp, CategoryDensityRange) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenConfig config;
    config.kind = ProblemKind::kGcp;
    config.category = Category::kHard;
    config.seed = seed;
    const GcpParams params = SampleGcpParams(config);
    EXPECT_EQ(params.node_count, 50);
    EXPECT_GE(params.edge_probability, 0.4);
    EXPECT_LE(params.edge_probability, 0.6);
  }
}

TEST(MaterialLowerBound, HandValues) {
  EXPECT_EQ(MaterialLowerBound(fixtures::TenRoll()), (Rational{11, 10}));
  EXPECT_EQ(MaterialLowerBound(CspInstance{10, {{10, 7}}, 0}), (Rational{7, 1}));
}

TEST(MaterialLowerBound, NeverExceedsTheFullMaster) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    const oracle::Csp csp = oracle::RandomTinyCsp(rng);
    const Rational bound = MaterialLowerBound(fixtures::ToInstance(csp));
    const oracle::Rational full = oracle::FullMasterOptimum(csp);
    EXPECT_LE(oracle::Rational(bound.num, bound.den), full);
  }
}

TEST(InstanceJson, RoundTrip) {
  const Instance csp = fixtures::TenRoll();
  EXPECT_EQ(InstanceFromJson(InstanceToJson(csp)), csp);
  const Instance gcp = fixtures::Path3();
  EXPECT_EQ(InstanceFromJson(InstanceToJson(gcp)), gcp);
  EXPECT_EQ(InstanceToJson(csp),
            R"({"kind":"csp","roll_length":10,"orders":[[3,2],[5,1]],"seed":0})");
  EXPECT_EQ(InstanceToJson(gcp), R"({"kind":"gcp","nodes":3,"edges":[[0,1],[1,2]],"seed":0})");
}

TEST(InstanceJson, FileRoundTrip) {
  fixtures::TempDir dir;
  GenConfig config = CspConfig(Category::kEasy, 3);
  const Instance inst = Generate(config);
  WriteInstance(inst, dir.path() / "a.json");
  EXPECT_EQ(ReadInstance(dir.path() / "a.json"), inst);
  EXPECT_THROW(ReadInstance(dir.path() / "missing.json"), InstanceError);
}

std::string ErrorOf(const std::string& text) {
  try {
    InstanceFromJson(text);
  } catch (const InstanceError& e) {
    return e.what();
  }
  return "";
}

TEST(InstanceJson, MissingFieldIsNamed) {
  const std::string message = ErrorOf(R"({"kind":"csp","orders":[[3,2]],"seed":1})");
  EXPECT_NE(message.find("roll_length"), std::string::npos) << message;
  EXPECT_NE(message.find("missing"), std::string::npos) << message;
}

TEST(InstanceJson, SchemaViolations) {
  EXPECT_NE(ErrorOf(R"({"kind":"gcp","nodes":3,"edges":[[1,1]]})").find("self-loop"),
            std::string::npos);
  EXPECT_NE(ErrorOf(R"({"kind":"gcp","nodes":3,"edges":[[0,1],[1,0]]})").find("duplicate"),
            std::string::npos);
  EXPECT_NE(ErrorOf(R"({"kind":"gcp","nodes":3,"edges":[[0,5]]})").find("edges[0]"),
            std::string::npos);
  EXPECT_NE(ErrorOf(R"({"kind":"csp","roll_length":10,"orders":[[11,1]]})").find("orders[0]"),
            std::string::npos);
  EXPECT_NE(ErrorOf(R"({"kind":"csp","roll_length":10,"orders":[[3,0]]})").find("demand"),
            std::string::npos);
  EXPECT_NE(ErrorOf(R"({"kind":"lp"})").find("kind"), std::string::npos);
  EXPECT_NE(ErrorOf(R"({"kind":"csp",)").find("malformed"), std::string::npos);
  EXPECT_NE(ErrorOf(R"([1,2])").find("object"), std::string::npos);
}

TEST(InstanceJson, EdgesAreNormalized) {
  const Instance inst = InstanceFromJson(R"({"kind":"gcp","nodes":3,"edges":[[2,1],[1,0]]})");
  const auto& g = std::get<GcpInstance>(inst);
  const std::vector<std::pair<int, int>> expected = {{0, 1}, {1, 2}};
  EXPECT_EQ(g.edges, expected);
  EXPECT_EQ(g.seed, 0u);
}

TEST(Names, ParseAndPrint) {
  EXPECT_EQ(ParseCategory(CategoryName(Category::kHard)), Category::kHard);
  EXPECT_EQ(ParseProblemKind(ProblemKindName(ProblemKind::kGcp)), ProblemKind::kGcp);
  EXPECT_THROW(ParseCategory("medium"), InstanceError);
  EXPECT_THROW(ParseProblemKind("vrp"), InstanceError);
}

}  // namespace
}  // namespace cglab
