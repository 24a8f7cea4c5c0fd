#ifndef CGLAB_TESTS_FIXTURES_H_
#define CGLAB_TESTS_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cglab/instance.h"
#include "oracles.h"

namespace fixtures {

inline cglab::CspInstance ToInstance(const oracle::Csp& csp, std::uint64_t seed = 0) {
  cglab::CspInstance inst;
  inst.roll_length = csp.roll_length;
  for (std::size_t i = 0; i < csp.lengths.size(); ++i) {
    inst.orders.push_back({csp.lengths[i], csp.demands[i]});
  }
  inst.seed = seed;
  return inst;
}

inline cglab::GcpInstance ToInstance(const oracle::Graph& g, std::uint64_t seed = 0) {
  cglab::GcpInstance inst;
  inst.node_count = g.n;
  inst.edges = g.edges;
  inst.seed = seed;
  return inst;
}

inline oracle::Csp ToOracle(const cglab::CspInstance& inst) {
  oracle::Csp csp;
  csp.roll_length = inst.roll_length;
  for (const auto& o : inst.orders) {
    csp.lengths.push_back(o.length);
    csp.demands.push_back(o.demand);
  }
  return csp;
}

inline oracle::Graph ToOracle(const cglab::GcpInstance& inst) {
  return {inst.node_count, inst.edges};
}

// L = 10, orders (3, 2) and (5, 1).
inline cglab::CspInstance TenRoll() { return {10, {{3, 2}, {5, 1}}, 0}; }

inline cglab::GcpInstance Path3() { return {3, {{0, 1}, {1, 2}}, 0}; }
inline cglab::GcpInstance Triangle() { return {3, {{0, 1}, {0, 2}, {1, 2}}, 0}; }
inline cglab::GcpInstance Edgeless(int n) { return {n, {}, 0}; }

inline std::vector<cglab::Instance> TinyOracleSuite(int count_each, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<cglab::Instance> out;
  for (int i = 0; i < count_each; ++i) {
    out.push_back(ToInstance(oracle::RandomTinyCsp(rng), 1000 + i));
  }
  for (int i = 0; i < count_each; ++i) {
    out.push_back(ToInstance(oracle::RandomTinyGraph(rng), 2000 + i));
  }
  return out;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("cglab_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures

#endif  // CGLAB_TESTS_FIXTURES_H_
