#include "cglab/env_bridge.h"

#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace cglab {

namespace {

using json = nlohmann::json;

std::string ErrorReply(const std::string& message) {
  return json{{"ok", false}, {"error", message}}.dump();
}

json ParseObject(std::string_view line) {
  json doc = json::parse(line);
  if (!doc.is_object()) throw std::invalid_argument("request must be a JSON object");
  return doc;
}

class FdLineReader {
 public:
  explicit FdLineReader(int fd) : fd_(fd) {}

  std::optional<std::string> Next() {
    while (true) {
      const auto newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        std::string line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        return line;
      }
      char chunk[4096];
      const ssize_t n = read(fd_, chunk, sizeof(chunk));
      if (n <= 0) {
        if (buffer_.empty()) return std::nullopt;
        std::string line = std::move(buffer_);
        buffer_.clear();
        return line;
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  int fd_;
  std::string buffer_;
};

bool WriteAll(int fd, const std::string& data) {
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = send(fd, data.data() + written, data.size() - written, MSG_NOSIGNAL);
    if (n <= 0) return false;
    written += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

EnvSession::EnvSession(EnvDefaults defaults)
    : defaults_(std::move(defaults)), reward_(defaults_.reward) {
  defaults_.cg.Validate();
  defaults_.reward.Validate();
}

std::string EnvSession::Handle(std::string_view line) {
  if (closed_) return ErrorReply("session closed");
  try {
    const json request = ParseObject(line);
    auto cmd = request.find("cmd");
    if (cmd == request.end() || !cmd->is_string()) {
      return ErrorReply("request needs a string 'cmd'");
    }
    const std::string name = cmd->get<std::string>();
    if (name == "reset") return Reset(line);
    if (name == "step") return Step(line);
    if (name == "close") {
      closed_ = true;
      cg_.reset();
      return json{{"ok", true}}.dump();
    }
    return ErrorReply("unknown cmd '" + name + "'");
  } catch (const json::exception& e) {
    return ErrorReply(std::string("malformed request: ") + e.what());
  } catch (const std::exception& e) {
    return ErrorReply(e.what());
  }
}

std::string EnvSession::StateJson() const {
  if (cg_->done()) return "null";
  return SerializeState(cg_->Snapshot(defaults_.zero_global));
}

std::string EnvSession::Reset(std::string_view line) {
  const json request = ParseObject(line);
  Instance instance;
  if (auto it = request.find("instance"); it != request.end()) {
    instance = InstanceFromJson(it->dump());
  } else {
    GenConfig config;
    config.kind = defaults_.problem;
    config.category = defaults_.category;
    if (auto p = request.find("problem"); p != request.end()) {
      config.kind = ParseProblemKind(p->get<std::string>());
    }
    if (auto c = request.find("category"); c != request.end()) {
      config.category = ParseCategory(c->get<std::string>());
    }
    config.seed = request.value("seed", std::uint64_t{0});
    instance = Generate(config);
  }
  RewardParams reward = defaults_.reward;
  if (auto r = request.find("reward"); r != request.end()) {
    reward.alpha = r->value("alpha", reward.alpha);
    reward.beta = r->value("beta", reward.beta);
    reward.gamma = r->value("gamma", reward.gamma);
  }
  reward.Validate();

  cg_.emplace(std::move(instance), defaults_.cg);
  reward_ = reward;
  steps_ = 0;
  json info{{"obj", cg_->objective()}, {"obj0", cg_->initial_objective()}, {"iteration", 0}};
  return R"({"ok":true,"state":)" + StateJson() + R"(,"done":)" +
         (cg_->done() ? "true" : "false") + R"(,"info":)" + info.dump() + "}";
}

std::string EnvSession::Step(std::string_view line) {
  if (!cg_) return ErrorReply("step before reset");
  if (cg_->done()) return ErrorReply("episode finished; send reset");
  const json request = ParseObject(line);
  auto action_it = request.find("action");
  if (action_it == request.end() || !action_it->is_array()) {
    return ErrorReply("step needs an 'action' array");
  }
  Selection action;
  for (const auto& item : *action_it) {
    if (!item.is_number_integer()) return ErrorReply("action entries must be integers");
    action.push_back(item.get<int>());
  }
  try {
    ValidateAction(action, cg_->pool().size(), cg_->config().select_count,
                   cg_->config().force_optimum);
  } catch (const ProtocolError& e) {
    return ErrorReply(std::string("invalid action: ") + e.what());
  }
  const Transition transition = cg_->Apply(std::move(action));
  ++steps_;
  const double reward =
      ComputeReward(transition.previous_objective, transition.objective,
                    cg_->initial_objective(), transition.selected_columns, reward_);
  json info{{"obj", transition.objective},
            {"iteration", steps_},
            {"cap", cg_->status() == CgStatus::kCapReached}};
  return R"({"ok":true,"state":)" + StateJson() + R"(,"reward":)" + json(reward).dump() +
         R"(,"done":)" + (cg_->done() ? "true" : "false") + R"(,"info":)" + info.dump() + "}";
}

void ServeStream(std::istream& in, std::ostream& out, const EnvDefaults& defaults) {
  EnvSession session(defaults);
  std::string line;
  while (!session.closed() && std::getline(in, line)) {
    if (line.empty()) continue;
    out << session.Handle(line) << '\n';
    out.flush();
  }
}

void ServeTcp(int port, const EnvDefaults& defaults, int max_sessions,
              const std::function<void(int)>& on_listening) {
  const int listener = socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw std::runtime_error("socket() failed");
  const int enable = 1;
  setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &enable, sizeof(enable));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      listen(listener, 4) != 0) {
    close(listener);
    throw std::runtime_error(std::string("cannot listen on port ") + std::to_string(port) +
                             ": " + std::strerror(errno));
  }
  socklen_t len = sizeof(addr);
  getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_listening) on_listening(ntohs(addr.sin_port));

  for (int served = 0; max_sessions <= 0 || served < max_sessions; ++served) {
    const int conn = accept(listener, nullptr, nullptr);
    if (conn < 0) continue;
    EnvSession session(defaults);
    FdLineReader reader(conn);
    while (!session.closed()) {
      auto line = reader.Next();
      if (!line) break;
      if (line->empty()) continue;
      if (!WriteAll(conn, session.Handle(*line) + "\n")) break;
    }
    close(conn);
  }
  close(listener);
}

}  // namespace cglab
