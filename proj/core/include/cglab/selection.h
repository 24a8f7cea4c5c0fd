// Column-selection strategies: given the candidate pool of one iteration,
// choose which pool indices enter the master.

#ifndef CGLAB_SELECTION_H_
#define CGLAB_SELECTION_H_

#include <algorithm>
#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cglab/master.h"
#include "cglab/mdp_state.h"
#include "cglab/pricing.h"

namespace cglab {

// Pool indices, distinct and in range.
using Selection = std::vector<int>;

struct SelectionContext {
  const CandidatePool& pool;
  int k = 0;
  bool force_optimum = true;
  const RmpModel& master;
  std::mt19937_64& rng;
  // Builds the current state on demand (only the external policy needs it).
  std::function<StateSnapshot()> snapshot;

  int effective_k() const { return std::min(k, pool.size()); }
};

class SelectionStrategy {
 public:
  virtual ~SelectionStrategy() = default;
  virtual std::string_view name() const = 0;
  // Single-column strategies always pick one column and are exempt from
  // forcing the pricing optimum.
  virtual bool single_column() const { return false; }
  virtual Selection Select(const SelectionContext& ctx) = 0;
};

inline constexpr std::string_view kBuiltinStrategies[] = {
    "greedy-s", "random-s", "greedy-m", "random-m", "diverse-m", "lookahead-m"};

// Any builtin name; throws std::invalid_argument otherwise. The external
// policy needs a channel and is constructed directly (ExternalPolicy).
std::unique_ptr<SelectionStrategy> MakeStrategy(std::string_view name);

class GreedySingle final : public SelectionStrategy {
 public:
  std::string_view name() const override { return "greedy-s"; }
  bool single_column() const override { return true; }
  Selection Select(const SelectionContext& ctx) override;
};

class RandomSingle final : public SelectionStrategy {
 public:
  std::string_view name() const override { return "random-s"; }
  bool single_column() const override { return true; }
  Selection Select(const SelectionContext& ctx) override;
};

class GreedyMulti final : public SelectionStrategy {
 public:
  std::string_view name() const override { return "greedy-m"; }
  Selection Select(const SelectionContext& ctx) override;
};

class RandomMulti final : public SelectionStrategy {
 public:
  std::string_view name() const override { return "random-m"; }
  Selection Select(const SelectionContext& ctx) override;
};

// Candidates (in pool order) go to the first block whose members they are all
// disjoint from; blocks are then taken in order until k columns are chosen.
class DiverseMulti final : public SelectionStrategy {
 public:
  std::string_view name() const override { return "diverse-m"; }
  Selection Select(const SelectionContext& ctx) override;
};

// Tries every k-combination (only those holding index 0 when forcing) on a
// copy of the master and keeps the one with the lowest next objective; ties
// go to the lexicographically smallest combination.
class LookaheadMulti final : public SelectionStrategy {
 public:
  std::string_view name() const override { return "lookahead-m"; }
  Selection Select(const SelectionContext& ctx) override;
};

// k distinct indices drawn uniformly without replacement from [0, n).
Selection SampleWithoutReplacement(int n, int k, std::mt19937_64& rng);

// Block assignment used by DiverseMulti; blocks hold pool indices.
std::vector<std::vector<int>> DiverseBlocks(const CandidatePool& pool);
// Within a block columns are pairwise disjoint, and every column in block b
// intersects some column of each earlier block.
bool DiverseBlocksValid(const CandidatePool& pool, const std::vector<std::vector<int>>& blocks);

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ProtocolError when the action does not name exactly
// min(k, pool_size) distinct in-range indices, or omits index 0 while
// `require_optimum` is set.
void ValidateAction(std::span<const int> action, int pool_size, int k, bool require_optimum);

// One request line out, one reply line back.
class PolicyChannel {
 public:
  virtual ~PolicyChannel() = default;
  virtual std::string Exchange(const std::string& request) = 0;
};

class StreamPolicyChannel final : public PolicyChannel {
 public:
  StreamPolicyChannel(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  std::string Exchange(const std::string& request) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

// Runs `command` through /bin/sh with its stdin/stdout connected to us.
class ProcessPolicyChannel final : public PolicyChannel {
 public:
  explicit ProcessPolicyChannel(const std::string& command);
  ~ProcessPolicyChannel() override;
  ProcessPolicyChannel(const ProcessPolicyChannel&) = delete;
  ProcessPolicyChannel& operator=(const ProcessPolicyChannel&) = delete;
  std::string Exchange(const std::string& request) override;

 private:
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

// Sends {"cmd":"select","k":K,"state":{...}} and expects {"action":[...]}.
class ExternalPolicy final : public SelectionStrategy {
 public:
  explicit ExternalPolicy(PolicyChannel& channel) : channel_(channel) {}
  std::string_view name() const override { return "external"; }
  Selection Select(const SelectionContext& ctx) override;

 private:
  PolicyChannel& channel_;
};

}  // namespace cglab

#endif  // CGLAB_SELECTION_H_
