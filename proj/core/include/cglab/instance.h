// Problem instances for the two column-generation workloads: cutting stock
// (CSP) and graph coloring (GCP). Instances are plain values; generation is a
// pure function of a GenConfig and its seed.

#ifndef CGLAB_INSTANCE_H_
#define CGLAB_INSTANCE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cglab {

enum class ProblemKind { kCsp, kGcp };
enum class Category { kEasy, kNormal, kHard };

std::string_view ProblemKindName(ProblemKind kind);
ProblemKind ParseProblemKind(std::string_view name);
std::string_view CategoryName(Category category);
Category ParseCategory(std::string_view name);

// Raised for invalid instances and malformed instance files. The message names
// the offending field (and line/column for syntax errors).
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Order {
  int length = 0;
  int demand = 0;
  friend bool operator==(const Order&, const Order&) = default;
};

struct CspInstance {
  int roll_length = 0;
  std::vector<Order> orders;
  std::uint64_t seed = 0;

  int num_rows() const { return static_cast<int>(orders.size()); }
  friend bool operator==(const CspInstance&, const CspInstance&) = default;
};

struct GcpInstance {
  int node_count = 0;
  // Each edge stored once as (u, v) with u < v, sorted.
  std::vector<std::pair<int, int>> edges;
  std::uint64_t seed = 0;

  int num_rows() const { return node_count; }
  friend bool operator==(const GcpInstance&, const GcpInstance&) = default;
};

using Instance = std::variant<CspInstance, GcpInstance>;

ProblemKind KindOf(const Instance& instance);
int NumRows(const Instance& instance);
std::uint64_t SeedOf(const Instance& instance);

// Throws InstanceError when an invariant does not hold.
void Validate(const CspInstance& instance);
void Validate(const GcpInstance& instance);
void Validate(const Instance& instance);

struct CspParams {
  int roll_length = 0;
  int piece_count = 0;
  double w_min = 0.0;
  double w_max = 0.0;
};

struct GcpParams {
  int node_count = 0;
  double edge_probability = 0.0;
};

// Either a category (parameters sampled per instance from the category's
// sets) or explicit parameters.
struct GenConfig {
  ProblemKind kind = ProblemKind::kCsp;
  std::optional<Category> category;
  std::optional<CspParams> csp;
  std::optional<GcpParams> gcp;
  std::uint64_t seed = 0;
};

// Pieces of equal length become one order whose demand is their count;
// orders come out sorted by length.
std::vector<Order> MergeLengths(std::span<const int> lengths);

CspInstance GenerateCsp(const GenConfig& config);
GcpInstance GenerateGcp(const GenConfig& config);
Instance Generate(const GenConfig& config);

// Resolves the per-instance parameters that GenerateCsp / GenerateGcp use.
CspParams SampleCspParams(const GenConfig& config);
GcpParams SampleGcpParams(const GenConfig& config);

// Exact rational p/q with q > 0, in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double ToDouble() const { return static_cast<double>(num) / den; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Total piece length over roll length; never exceeds the LP relaxation value.
Rational MaterialLowerBound(const CspInstance& instance);

std::string InstanceToJson(const Instance& instance);
Instance InstanceFromJson(std::string_view text);
void WriteInstance(const Instance& instance, const std::filesystem::path& path);
Instance ReadInstance(const std::filesystem::path& path);

}  // namespace cglab

#endif  // CGLAB_INSTANCE_H_
