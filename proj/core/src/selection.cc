#include "cglab/selection.h"

#include <csignal>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include <fcntl.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace cglab {

namespace {

Selection Prefix(int count) {
  Selection selection(count);
  std::iota(selection.begin(), selection.end(), 0);
  return selection;
}

// Advances a sorted combination over [0, n) to its lexicographic successor.
bool NextCombination(std::vector<int>& combo, int n) {
  const int k = static_cast<int>(combo.size());
  int i = k - 1;
  while (i >= 0 && combo[i] == n - k + i) --i;
  if (i < 0) return false;
  ++combo[i];
  for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
  return true;
}

}  // namespace

Selection SampleWithoutReplacement(int n, int k, std::mt19937_64& rng) {
  std::vector<int> items(n);
  std::iota(items.begin(), items.end(), 0);
  k = std::min(k, n);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(items[i], items[pick(rng)]);
  }
  items.resize(k);
  return items;
}

Selection GreedySingle::Select(const SelectionContext&) { return {0}; }

Selection RandomSingle::Select(const SelectionContext& ctx) {
  return SampleWithoutReplacement(ctx.pool.size(), 1, ctx.rng);
}

Selection GreedyMulti::Select(const SelectionContext& ctx) {
  return Prefix(ctx.effective_k());
}

Selection RandomMulti::Select(const SelectionContext& ctx) {
  return SampleWithoutReplacement(ctx.pool.size(), ctx.effective_k(), ctx.rng);
}

std::vector<std::vector<int>> DiverseBlocks(const CandidatePool& pool) {
  std::vector<std::vector<int>> blocks;
  for (int c = 0; c < pool.size(); ++c) {
    const Column& column = pool.columns[c];
    bool placed = false;
    for (auto& block : blocks) {
      const bool disjoint = std::none_of(block.begin(), block.end(), [&](int other) {
        return column.Intersects(pool.columns[other]);
      });
      if (disjoint) {
        block.push_back(c);
        placed = true;
        break;
      }
    }
    if (!placed) blocks.push_back({c});
  }
  return blocks;
}

bool DiverseBlocksValid(const CandidatePool& pool,
                        const std::vector<std::vector<int>>& blocks) {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i = 0; i < blocks[b].size(); ++i) {
      const Column& column = pool.columns[blocks[b][i]];
      for (std::size_t j = i + 1; j < blocks[b].size(); ++j) {
        if (column.Intersects(pool.columns[blocks[b][j]])) return false;
      }
      for (std::size_t earlier = 0; earlier < b; ++earlier) {
        const bool touches = std::any_of(
            blocks[earlier].begin(), blocks[earlier].end(),
            [&](int other) { return column.Intersects(pool.columns[other]); });
        if (!touches) return false;
      }
    }
  }
  return true;
}

Selection DiverseMulti::Select(const SelectionContext& ctx) {
  const int k = ctx.effective_k();
  Selection selection;
  for (const auto& block : DiverseBlocks(ctx.pool)) {
    for (int c : block) {
      if (static_cast<int>(selection.size()) == k) return selection;
      selection.push_back(c);
    }
  }
  return selection;
}

Selection LookaheadMulti::Select(const SelectionContext& ctx) {
  const int n = ctx.pool.size();
  const int k = ctx.effective_k();
  std::vector<int> combo = Prefix(k);
  Selection best;
  double best_objective = std::numeric_limits<double>::infinity();
  std::vector<Column> trial;
  do {
    if (ctx.force_optimum && combo[0] != 0) break;  // later combinations lack 0 too
    trial.clear();
    for (int c : combo) trial.push_back(ctx.pool.columns[c]);
    const double objective = ctx.master.TrialObjective(trial);
    if (objective < best_objective - kFeasibilityTolerance) {
      best_objective = objective;
      best = combo;
    }
  } while (NextCombination(combo, n));
  return best;
}

std::unique_ptr<SelectionStrategy> MakeStrategy(std::string_view name) {
  if (name == "greedy-s") return std::make_unique<GreedySingle>();
  if (name == "random-s") return std::make_unique<RandomSingle>();
  if (name == "greedy-m") return std::make_unique<GreedyMulti>();
  if (name == "random-m") return std::make_unique<RandomMulti>();
  if (name == "diverse-m") return std::make_unique<DiverseMulti>();
  if (name == "lookahead-m") return std::make_unique<LookaheadMulti>();
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

void ValidateAction(std::span<const int> action, int pool_size, int k, bool require_optimum) {
  const int expected = std::min(k, pool_size);
  if (static_cast<int>(action.size()) != expected) {
    throw ProtocolError("action must name " + std::to_string(expected) + " columns, got " +
                        std::to_string(action.size()));
  }
  std::set<int> seen;
  for (int index : action) {
    if (index < 0 || index >= pool_size) {
      throw ProtocolError("action index " + std::to_string(index) + " out of range [0, " +
                          std::to_string(pool_size) + ")");
    }
    if (!seen.insert(index).second) {
      throw ProtocolError("duplicate action index " + std::to_string(index));
    }
  }
  if (require_optimum && !seen.contains(0)) {
    throw ProtocolError("action must include index 0 (pricing optimum)");
  }
}

std::string StreamPolicyChannel::Exchange(const std::string& request) {
  out_ << request << '\n';
  out_.flush();
  std::string reply;
  if (!std::getline(in_, reply)) throw ProtocolError("policy peer closed the stream");
  return reply;
}

ProcessPolicyChannel::ProcessPolicyChannel(const std::string& command) {
  std::signal(SIGPIPE, SIG_IGN);
  int down[2];
  int up[2];
  if (pipe(down) != 0 || pipe(up) != 0) throw ProtocolError("pipe() failed");
  pid_ = fork();
  if (pid_ < 0) throw ProtocolError("fork() failed");
  if (pid_ == 0) {
    dup2(down[0], STDIN_FILENO);
    dup2(up[1], STDOUT_FILENO);
    close(down[0]);
    close(down[1]);
    close(up[0]);
    close(up[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(down[0]);
  close(up[1]);
  to_child_ = down[1];
  from_child_ = up[0];
}

ProcessPolicyChannel::~ProcessPolicyChannel() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    kill(pid_, SIGTERM);
    waitpid(pid_, nullptr, 0);
  }
}

std::string ProcessPolicyChannel::Exchange(const std::string& request) {
  const std::string line = request + '\n';
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = write(to_child_, line.data() + written, line.size() - written);
    if (n <= 0) throw ProtocolError("policy process is not accepting input");
    written += static_cast<std::size_t>(n);
  }
  while (true) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string reply = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return reply;
    }
    char chunk[4096];
    const ssize_t n = read(from_child_, chunk, sizeof(chunk));
    if (n <= 0) throw ProtocolError("policy process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

Selection ExternalPolicy::Select(const SelectionContext& ctx) {
  if (!ctx.snapshot) throw ProtocolError("external policy needs a state snapshot");
  const std::string request = R"({"cmd":"select","k":)" + std::to_string(ctx.effective_k()) +
                              R"(,"state":)" + SerializeState(ctx.snapshot()) + "}";
  const std::string reply = channel_.Exchange(request);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(reply);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("malformed policy reply: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("action") || !doc["action"].is_array()) {
    throw ProtocolError("policy reply lacks an 'action' array");
  }
  Selection selection;
  for (const auto& item : doc["action"]) {
    if (!item.is_number_integer()) throw ProtocolError("action entries must be integers");
    selection.push_back(item.get<int>());
  }
  ValidateAction(selection, ctx.pool.size(), ctx.k, /*require_optimum=*/false);
  return selection;
}

}  // namespace cglab
