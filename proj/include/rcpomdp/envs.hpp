#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rcpomdp/model.hpp"

namespace rcpomdp {

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint64_t kDefaultSeed = 11878;

/// Counterexample cave: s1/s2 before the tunnels, s3/s4 inside (s3 rocky),
/// s5 terminal. a_A enters then traverses, a_B exits immediately.
Model make_ce(double accuracy = 0.8, double c_hat = 5.0);

/// Two-door tiger with a unit cost on listening.
Model make_ctiger(double c_hat = 3.0, double accuracy = 0.85);

struct CrsLayout {
  int grid_n = 0;
  std::vector<std::pair<int, int>> rocks;  // (x, y)
  std::pair<int, int> start;
};

/// Rock positions drawn without replacement from the grid.
CrsLayout crs_layout(int grid_n, int num_rocks, std::uint64_t seed = kDefaultSeed);

/// RockSample with cost 1 for sampling a bad rock. State index is
/// (y * n + x) * 2^k + rock bits; the last state is the exit terminal.
Model make_crs(int grid_n, int num_rocks, std::uint64_t seed = kDefaultSeed, double c_hat = 1.0);

struct TunnelsParams {
  double p_obs_correct = 0.8;
  std::array<double, 3> rock_probs{0.6, 0.4, 0.0};
  double backtrack_cost = 0.5;
  double c_hat = 1.0;
};

/// Hall plus three four-cell tunnels. State index is
/// position * 4 + rock bits (bit 0 tunnel 1, bit 1 tunnel 2), position 0 the
/// hall and 1 + 4 * (tunnel) + (cell - 1) inside; the last state is terminal.
Model make_tunnels(const TunnelsParams& params = {});

using ParamMap = std::map<std::string, std::string>;

struct EnvSpec {
  std::string name;
  ParamMap params;
};

/// Builds a named environment. Keys per name:
///   ce: accuracy, c_hat
///   ctiger: c_hat, accuracy
///   crs: n, k, seed, c_hat
///   tunnels: p, rock1, rock2, rock3, backtrack_cost, c_hat
/// Throws InvalidParams on unknown names, keys or values.
Model make_env(const EnvSpec& spec);

const std::vector<std::string>& env_names();

}  // namespace rcpomdp
