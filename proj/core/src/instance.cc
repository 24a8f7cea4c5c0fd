#include "cglab/instance.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cglab {

namespace {

using ordered_json = nlohmann::ordered_json;

struct CspCategoryTable {
  int roll_length;
  std::vector<int> piece_counts;
};

// n for "normal" printed as {575, 100, 120, 150} in the source table; 75 is
// used.
const CspCategoryTable& CspCategory(Category category) {
  static const CspCategoryTable kEasy{50, {50, 75, 100, 120}};
  static const CspCategoryTable kNormal{100, {75, 100, 120, 150}};
  static const CspCategoryTable kHard{200, {125, 150}};
  switch (category) {
    case Category::kEasy:
      return kEasy;
    case Category::kNormal:
      return kNormal;
    case Category::kHard:
      return kHard;
  }
  return kEasy;
}

constexpr double kWMinChoices[] = {0.1, 0.2};
constexpr double kWMaxChoices[] = {0.7, 0.8};
constexpr double kEdgeProbabilityMin = 0.4;
constexpr double kEdgeProbabilityMax = 0.6;

int GcpCategoryNodes(Category category) {
  switch (category) {
    case Category::kEasy:
      return 30;
    case Category::kNormal:
      return 40;
    case Category::kHard:
      return 50;
  }
  return 30;
}

template <typename T>
const T& Pick(std::span<const T> choices, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, choices.size() - 1);
  return choices[dist(rng)];
}

// The generator stream for the instance draws; parameter sampling consumes the
// same stream first so a seed fixes the whole instance.
std::mt19937_64 MakeRng(std::uint64_t seed) { return std::mt19937_64(seed); }

CspParams SampleCspParams(const GenConfig& config, std::mt19937_64& rng) {
  if (config.csp) return *config.csp;
  if (!config.category) {
    throw InstanceError("csp generation needs a category or explicit params");
  }
  const CspCategoryTable& table = CspCategory(*config.category);
  CspParams params;
  params.roll_length = table.roll_length;
  params.piece_count = Pick<int>(table.piece_counts, rng);
  params.w_min = Pick<double>(kWMinChoices, rng);
  params.w_max = Pick<double>(kWMaxChoices, rng);
  return params;
}

GcpParams SampleGcpParams(const GenConfig& config, std::mt19937_64& rng) {
  if (config.gcp) return *config.gcp;
  if (!config.category) {
    throw InstanceError("gcp generation needs a category or explicit params");
  }
  GcpParams params;
  params.node_count = GcpCategoryNodes(*config.category);
  std::uniform_real_distribution<double> p(kEdgeProbabilityMin,
                                           kEdgeProbabilityMax);
  params.edge_probability = p(rng);
  return params;
}

[[noreturn]] void FieldError(const std::string& field, const std::string& what) {
  throw InstanceError("instance field '" + field + "': " + what);
}

const nlohmann::json& Require(const nlohmann::json& obj,
                              const std::string& field) {
  auto it = obj.find(field);
  if (it == obj.end()) FieldError(field, "missing");
  return *it;
}

std::int64_t RequireInt(const nlohmann::json& value, const std::string& field) {
  if (!value.is_number_integer()) FieldError(field, "expected an integer");
  return value.get<std::int64_t>();
}

std::uint64_t OptionalSeed(const nlohmann::json& obj) {
  auto it = obj.find("seed");
  if (it == obj.end()) return 0;
  if (!it->is_number_integer()) FieldError("seed", "expected an integer");
  return it->get<std::uint64_t>();
}

std::pair<std::int64_t, std::int64_t> RequirePair(const nlohmann::json& value,
                                                  const std::string& field) {
  if (!value.is_array() || value.size() != 2) {
    FieldError(field, "expected a two-element array");
  }
  return {RequireInt(value[0], field + "[0]"), RequireInt(value[1], field + "[1]")};
}

}  // namespace

std::string_view ProblemKindName(ProblemKind kind) {
  return kind == ProblemKind::kCsp ? "csp" : "gcp";
}

ProblemKind ParseProblemKind(std::string_view name) {
  if (name == "csp") return ProblemKind::kCsp;
  if (name == "gcp") return ProblemKind::kGcp;
  throw InstanceError("unknown problem kind '" + std::string(name) + "'");
}

std::string_view CategoryName(Category category) {
  switch (category) {
    case Category::kEasy:
      return "easy";
    case Category::kNormal:
      return "normal";
    case Category::kHard:
      return "hard";
  }
  return "easy";
}

Category ParseCategory(std::string_view name) {
  if (name == "easy") return Category::kEasy;
  if (name == "normal") return Category::kNormal;
  if (name == "hard") return Category::kHard;
  throw InstanceError("unknown category '" + std::string(name) + "'");
}

ProblemKind KindOf(const Instance& instance) {
  return std::holds_alternative<CspInstance>(instance) ? ProblemKind::kCsp
                                                       : ProblemKind::kGcp;
}

int NumRows(const Instance& instance) {
  return std::visit([](const auto& inst) { return inst.num_rows(); }, instance);
}

std::uint64_t SeedOf(const Instance& instance) {
  return std::visit([](const auto& inst) { return inst.seed; }, instance);
}

void Validate(const CspInstance& instance) {
  if (instance.roll_length < 1) FieldError("roll_length", "must be >= 1");
  if (instance.orders.empty()) FieldError("orders", "must not be empty");
  std::set<int> seen;
  for (std::size_t i = 0; i < instance.orders.size(); ++i) {
    const Order& order = instance.orders[i];
    const std::string field = "orders[" + std::to_string(i) + "]";
    if (order.length <= 0 || order.length > instance.roll_length) {
      FieldError(field, "piece length must lie in (0, roll_length]");
    }
    if (order.demand < 1) FieldError(field, "demand must be >= 1");
    if (!seen.insert(order.length).second) {
      FieldError(field, "duplicate piece length " + std::to_string(order.length));
    }
  }
}

void Validate(const GcpInstance& instance) {
  if (instance.node_count < 1) FieldError("nodes", "must be >= 1");
  std::set<std::pair<int, int>> seen;
  for (std::size_t e = 0; e < instance.edges.size(); ++e) {
    auto [u, v] = instance.edges[e];
    const std::string field = "edges[" + std::to_string(e) + "]";
    if (u == v) FieldError(field, "self-loop on node " + std::to_string(u));
    if (u < 0 || v < 0 || u >= instance.node_count || v >= instance.node_count) {
      FieldError(field, "node index out of range");
    }
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) FieldError(field, "duplicate edge");
  }
}

void Validate(const Instance& instance) {
  std::visit([](const auto& inst) { Validate(inst); }, instance);
}

CspParams SampleCspParams(const GenConfig& config) {
  auto rng = MakeRng(config.seed);
  return SampleCspParams(config, rng);
}

GcpParams SampleGcpParams(const GenConfig& config) {
  auto rng = MakeRng(config.seed);
  return SampleGcpParams(config, rng);
}

std::vector<Order> MergeLengths(std::span<const int> lengths) {
  std::map<int, int> demand_by_length;
  for (int l : lengths) ++demand_by_length[l];
  std::vector<Order> orders;
  for (auto [len, demand] : demand_by_length) orders.push_back({len, demand});
  return orders;
}

CspInstance GenerateCsp(const GenConfig& config) {
  if (config.kind != ProblemKind::kCsp) throw InstanceError("not a csp config");
  auto rng = MakeRng(config.seed);
  const CspParams params = SampleCspParams(config, rng);
  if (params.roll_length < 1) throw InstanceError("roll length must be >= 1");
  if (params.piece_count < 1) throw InstanceError("piece count must be >= 1");
  if (!(params.w_min > 0.0 && params.w_min < params.w_max && params.w_max <= 1.0)) {
    throw InstanceError("need 0 < w_min < w_max <= 1");
  }
  const int lo = std::max<int>(1, std::lround(params.w_min * params.roll_length));
  const int hi = std::min<int>(params.roll_length,
                               std::lround(params.w_max * params.roll_length));
  std::uniform_int_distribution<int> length(lo, std::max(lo, hi));
  std::vector<int> lengths(params.piece_count);
  for (int& l : lengths) l = length(rng);

  CspInstance instance;
  instance.roll_length = params.roll_length;
  instance.seed = config.seed;
  instance.orders = MergeLengths(lengths);
  return instance;
}

GcpInstance GenerateGcp(const GenConfig& config) {
  if (config.kind != ProblemKind::kGcp) throw InstanceError("not a gcp config");
  auto rng = MakeRng(config.seed);
  const GcpParams params = SampleGcpParams(config, rng);
  if (params.node_count < 2) throw InstanceError("node count must be >= 2");
  if (!(params.edge_probability >= 0.0 && params.edge_probability <= 1.0)) {
    throw InstanceError("edge probability must lie in [0, 1]");
  }
  std::bernoulli_distribution coin(params.edge_probability);
  GcpInstance instance;
  instance.node_count = params.node_count;
  instance.seed = config.seed;
  for (int u = 0; u < params.node_count; ++u) {
    for (int v = u + 1; v < params.node_count; ++v) {
      if (coin(rng)) instance.edges.emplace_back(u, v);
    }
  }
  return instance;
}

Instance Generate(const GenConfig& config) {
  if (config.kind == ProblemKind::kCsp) return GenerateCsp(config);
  return GenerateGcp(config);
}

Rational MaterialLowerBound(const CspInstance& instance) {
  std::int64_t total = 0;
  for (const Order& order : instance.orders) {
    total += static_cast<std::int64_t>(order.length) * order.demand;
  }
  const std::int64_t g = std::gcd(total, static_cast<std::int64_t>(instance.roll_length));
  if (g == 0) return {0, 1};
  return {total / g, instance.roll_length / g};
}

std::string InstanceToJson(const Instance& instance) {
  ordered_json out;
  if (const auto* csp = std::get_if<CspInstance>(&instance)) {
    out["kind"] = "csp";
    out["roll_length"] = csp->roll_length;
    ordered_json orders = ordered_json::array();
    for (const Order& o : csp->orders) orders.push_back({o.length, o.demand});
    out["orders"] = std::move(orders);
    out["seed"] = csp->seed;
  } else {
    const auto& gcp = std::get<GcpInstance>(instance);
    out["kind"] = "gcp";
    out["nodes"] = gcp.node_count;
    ordered_json edges = ordered_json::array();
    for (auto [u, v] : gcp.edges) edges.push_back({u, v});
    out["edges"] = std::move(edges);
    out["seed"] = gcp.seed;
  }
  return out.dump();
}

Instance InstanceFromJson(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceError(std::string("malformed instance json: ") + e.what());
  }
  if (!doc.is_object()) throw InstanceError("instance json must be an object");
  const auto& kind = Require(doc, "kind");
  if (!kind.is_string()) FieldError("kind", "expected a string");
  Instance result;
  if (kind == "csp") {
    CspInstance csp;
    csp.roll_length = static_cast<int>(RequireInt(Require(doc, "roll_length"), "roll_length"));
    const auto& orders = Require(doc, "orders");
    if (!orders.is_array()) FieldError("orders", "expected an array");
    for (std::size_t i = 0; i < orders.size(); ++i) {
      auto [len, demand] = RequirePair(orders[i], "orders[" + std::to_string(i) + "]");
      csp.orders.push_back({static_cast<int>(len), static_cast<int>(demand)});
    }
    csp.seed = OptionalSeed(doc);
    Validate(csp);
    result = std::move(csp);
  } else if (kind == "gcp") {
    GcpInstance gcp;
    gcp.node_count = static_cast<int>(RequireInt(Require(doc, "nodes"), "nodes"));
    const auto& edges = Require(doc, "edges");
    if (!edges.is_array()) FieldError("edges", "expected an array");
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto [u, v] = RequirePair(edges[e], "edges[" + std::to_string(e) + "]");
      gcp.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    gcp.seed = OptionalSeed(doc);
    Validate(gcp);
    for (auto& edge : gcp.edges) {
      if (edge.first > edge.second) std::swap(edge.first, edge.second);
    }
    std::sort(gcp.edges.begin(), gcp.edges.end());
    result = std::move(gcp);
  } else {
    FieldError("kind", "expected \"csp\" or \"gcp\"");
  }
  return result;
}

void WriteInstance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InstanceError("cannot open " + path.string() + " for writing");
  out << InstanceToJson(instance) << '\n';
}

Instance ReadInstance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return InstanceFromJson(buffer.str());
  } catch (const InstanceError& e) {
    throw InstanceError(path.string() + ": " + e.what());
  }
}

}  // namespace cglab
