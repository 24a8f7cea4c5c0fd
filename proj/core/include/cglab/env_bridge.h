// Column generation as a reinforcement-learning environment, served over
// newline-delimited JSON. Requests carry "cmd" in {reset, step, close};
// replies carry "ok" and either a payload or "error".
//
//   reset {problem?, category?, seed?, instance?, reward?: {alpha, beta, gamma}}
//     -> {ok, state | null, done, info: {obj, obj0, iteration}}
//   step {action: [pool indices]}
//     -> {ok, state | null, reward, done, info: {obj, iteration, cap}}
//   close -> {ok}
//
// "iteration" counts transitions taken in the episode. A reset whose first
// master already admits no improving column replies done=true.

#ifndef CGLAB_ENV_BRIDGE_H_
#define CGLAB_ENV_BRIDGE_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "cglab/engine.h"
#include "cglab/instance.h"
#include "cglab/mdp_state.h"

namespace cglab {

struct EnvDefaults {
  ProblemKind problem = ProblemKind::kCsp;
  Category category = Category::kEasy;
  RewardParams reward;
  CgConfig cg;
  bool zero_global = false;
};

class EnvSession {
 public:
  explicit EnvSession(EnvDefaults defaults);

  // One request line in, one reply line out. Never throws for bad input.
  std::string Handle(std::string_view line);
  bool closed() const { return closed_; }

 private:
  std::string Reset(std::string_view request);
  std::string Step(std::string_view request);
  std::string StateJson() const;

  EnvDefaults defaults_;
  RewardParams reward_;
  std::optional<ColumnGeneration> cg_;
  int steps_ = 0;
  bool closed_ = false;
};

// Serves one session until "close" or end of input.
void ServeStream(std::istream& in, std::ostream& out, const EnvDefaults& defaults);

// Listens on 127.0.0.1:port and serves one session per connection,
// sequentially. Port 0 picks a free port; `on_listening` receives the bound
// port. Stops after `max_sessions` sessions when it is positive.
void ServeTcp(int port, const EnvDefaults& defaults, int max_sessions = 0,
              const std::function<void(int)>& on_listening = {});

}  // namespace cglab

#endif  // CGLAB_ENV_BRIDGE_H_
