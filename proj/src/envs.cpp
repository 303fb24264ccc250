#include "rcpomdp/envs.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace rcpomdp {

Model make_ce(double accuracy, double c_hat) {
  if (!(accuracy >= 0.5 && accuracy <= 1.0)) throw InvalidParams("ce: accuracy must lie in [0.5, 1]");
  if (!(c_hat >= 0.0)) throw InvalidParams("ce: c_hat must be nonnegative");
  enum { s1, s2, s3, s4, s5 };
  enum { aA, aB };
  enum { r, nr };
  ModelBuilder b(5, 2, 2);
  b.state_names({"s1", "s2", "s3", "s4", "s5"}).action_names({"a_A", "a_B"}).observation_names({"r", "nr"});

  b.add_transition(s1, aA, s3, 1.0).add_transition(s2, aA, s4, 1.0);
  b.add_transition(s3, aA, s5, 1.0).set_reward(s3, aA, 12.0).set_cost(s3, aA, 10.0);
  b.add_transition(s4, aA, s5, 1.0).set_reward(s4, aA, 12.0);
  for (int s : {s1, s2, s3, s4}) b.add_transition(s, aB, s5, 1.0).set_cost(s, aB, 5.0);
  b.set_reward(s1, aB, 10.0).set_reward(s2, aB, 10.0);
  b.add_transition(s5, aA, s5, 1.0).add_transition(s5, aB, s5, 1.0);

  for (int a : {aA, aB}) {
    b.set_observation(s1, a, r, 0.5).set_observation(s1, a, nr, 0.5);
    b.set_observation(s2, a, r, 0.5).set_observation(s2, a, nr, 0.5);
    b.set_observation(s3, a, r, accuracy).set_observation(s3, a, nr, 1.0 - accuracy);
    b.set_observation(s4, a, r, 1.0 - accuracy).set_observation(s4, a, nr, accuracy);
    b.set_observation(s5, a, nr, 1.0);
  }
  b.gamma(1.0 - std::exp(-14.0)).cost_budget(c_hat).initial_belief({0.5, 0.5, 0.0, 0.0, 0.0});
  return std::move(b).build();
}

Model make_ctiger(double c_hat, double accuracy) {
  if (!(c_hat >= 0.0)) throw InvalidParams("ctiger: c_hat must be nonnegative");
  if (!(accuracy >= 0.5 && accuracy <= 1.0)) throw InvalidParams("ctiger: accuracy must lie in [0.5, 1]");
  enum { left, right };
  enum { listen, open_left, open_right };
  ModelBuilder b(2, 3, 2);
  b.state_names({"tiger-left", "tiger-right"})
      .action_names({"listen", "open-left", "open-right"})
      .observation_names({"hear-left", "hear-right"});
  for (int s : {left, right}) {
    b.add_transition(s, listen, s, 1.0).set_reward(s, listen, -1.0).set_cost(s, listen, 1.0);
    for (int a : {open_left, open_right}) b.add_transition(s, a, left, 0.5).add_transition(s, a, right, 0.5);
    b.set_observation(s, listen, s, accuracy).set_observation(s, listen, 1 - s, 1.0 - accuracy);
    for (int a : {open_left, open_right}) b.set_observation(s, a, 0, 0.5).set_observation(s, a, 1, 0.5);
  }
  b.set_reward(left, open_left, -100.0).set_reward(right, open_left, 10.0);
  b.set_reward(left, open_right, 10.0).set_reward(right, open_right, -100.0);
  b.gamma(0.95).cost_budget(c_hat).initial_belief({0.5, 0.5});
  return std::move(b).build();
}

CrsLayout crs_layout(int grid_n, int num_rocks, std::uint64_t seed) {
  if (grid_n < 2) throw InvalidParams("crs: grid size must be at least 2");
  if (num_rocks < 1 || num_rocks > 16) throw InvalidParams("crs: number of rocks must lie in [1, 16]");
  if (num_rocks > grid_n * grid_n) throw InvalidParams("crs: more rocks than cells");
  CrsLayout layout;
  layout.grid_n = grid_n;
  layout.start = {0, grid_n / 2};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cell(0, grid_n * grid_n - 1);
  std::set<int> used;
  while (static_cast<int>(layout.rocks.size()) < num_rocks) {
    int c = cell(rng);
    if (!used.insert(c).second) continue;
    layout.rocks.push_back({c % grid_n, c / grid_n});
  }
  return layout;
}

Model make_crs(int grid_n, int num_rocks, std::uint64_t seed, double c_hat) {
  if (!(c_hat >= 0.0)) throw InvalidParams("crs: c_hat must be nonnegative");
  const CrsLayout layout = crs_layout(grid_n, num_rocks, seed);
  const int n = grid_n, k = num_rocks, configs = 1 << k;
  const int num_states = n * n * configs + 1;
  const int terminal = num_states - 1;
  enum { north, south, east, west, sample };
  enum { none, good, bad };
  const int num_actions = 5 + k;

  auto index = [&](int x, int y, int bits) { return (y * n + x) * configs + bits; };
  auto rock_at = [&](int x, int y) {
    for (int i = 0; i < k; ++i)
      if (layout.rocks[i].first == x && layout.rocks[i].second == y) return i;
    return -1;
  };

  ModelBuilder b(static_cast<std::size_t>(num_states), static_cast<std::size_t>(num_actions), 3);
  std::vector<std::string> snames, anames{"north", "south", "east", "west", "sample"};
  for (int i = 0; i < k; ++i) anames.push_back("check_" + std::to_string(i));
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      for (int bits = 0; bits < configs; ++bits) {
        std::string s = "x" + std::to_string(x) + "y" + std::to_string(y) + "_";
        for (int i = 0; i < k; ++i) s += (bits >> i & 1) ? 'G' : 'B';
        snames.push_back(s);
      }
  snames.push_back("exit");
  b.state_names(snames).action_names(anames).observation_names({"none", "good", "bad"});

  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      for (int bits = 0; bits < configs; ++bits) {
        const int s = index(x, y, bits);
        b.add_transition(s, north, index(x, std::min(y + 1, n - 1), bits), 1.0);
        b.add_transition(s, south, index(x, std::max(y - 1, 0), bits), 1.0);
        b.add_transition(s, west, index(std::max(x - 1, 0), y, bits), 1.0);
        if (x + 1 == n) {
          b.add_transition(s, east, terminal, 1.0).set_reward(s, east, 10.0);
        } else {
          b.add_transition(s, east, index(x + 1, y, bits), 1.0);
        }
        const int rock = rock_at(x, y);
        if (rock < 0) {
          b.add_transition(s, sample, s, 1.0);
        } else if (bits >> rock & 1) {
          b.add_transition(s, sample, index(x, y, bits & ~(1 << rock)), 1.0).set_reward(s, sample, 10.0);
        } else {
          b.add_transition(s, sample, s, 1.0).set_reward(s, sample, -10.0).set_cost(s, sample, 1.0);
        }
        for (int i = 0; i < k; ++i) {
          b.add_transition(s, 5 + i, s, 1.0);
          const double dx = x - layout.rocks[i].first, dy = y - layout.rocks[i].second;
          const double eff = 0.5 * (1.0 + std::pow(2.0, -std::sqrt(dx * dx + dy * dy) / 20.0));
          const bool is_good = bits >> i & 1;
          b.set_observation(s, 5 + i, good, is_good ? eff : 1.0 - eff);
          b.set_observation(s, 5 + i, bad, is_good ? 1.0 - eff : eff);
        }
        for (int a = 0; a < 5; ++a) b.set_observation(s, a, none, 1.0);
      }
    }
  }
  for (int a = 0; a < num_actions; ++a) {
    b.add_transition(terminal, a, terminal, 1.0);
    b.set_observation(terminal, a, none, 1.0);
  }

  std::vector<double> b0(static_cast<std::size_t>(num_states), 0.0);
  for (int bits = 0; bits < configs; ++bits)
    b0[index(layout.start.first, layout.start.second, bits)] = 1.0 / configs;
  b.gamma(0.95).cost_budget(c_hat).initial_belief(std::move(b0));
  return std::move(b).build();
}

Model make_tunnels(const TunnelsParams& p) {
  if (!(p.p_obs_correct >= 0.5 && p.p_obs_correct <= 1.0))
    throw InvalidParams("tunnels: observation accuracy must lie in [0.5, 1]");
  for (double r : p.rock_probs)
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidParams("tunnels: rock probabilities must lie in [0, 1]");
  if (p.rock_probs[2] != 0.0) throw InvalidParams("tunnels: tunnel 3 is always clear (rock3 must be 0)");
  if (!(p.backtrack_cost >= 0.0)) throw InvalidParams("tunnels: backtrack cost must be nonnegative");
  if (!(p.c_hat >= 0.0)) throw InvalidParams("tunnels: c_hat must be nonnegative");

  constexpr int kCells = 4, kTunnels = 3, kConfigs = 4;
  constexpr int kPositions = 1 + kTunnels * kCells;
  constexpr int kStates = kPositions * kConfigs + 1;
  constexpr int terminal = kStates - 1;
  enum { forward, backward, tunnel_1, tunnel_2, tunnel_3 };
  enum { none, rocky, clear };
  const double end_reward[kTunnels] = {2.0, 1.5, 0.5};

  auto pos = [](int tunnel, int cell) { return 1 + tunnel * kCells + (cell - 1); };
  auto index = [](int position, int bits) { return position * kConfigs + bits; };
  auto has_rocks = [](int tunnel, int bits) { return tunnel < 2 && ((bits >> tunnel) & 1); };

  ModelBuilder b(kStates, 5, 3);
  std::vector<std::string> snames;
  for (int position = 0; position < kPositions; ++position)
    for (int bits = 0; bits < kConfigs; ++bits) {
      std::string where = position == 0 ? "hall"
                                        : "t" + std::to_string((position - 1) / kCells + 1) + "c" +
                                              std::to_string((position - 1) % kCells + 1);
      snames.push_back(where + "_r" + std::to_string(bits & 1) + std::to_string(bits >> 1 & 1));
    }
  snames.push_back("done");
  b.state_names(snames)
      .action_names({"forward", "backward", "tunnel_1", "tunnel_2", "tunnel_3"})
      .observation_names({"none", "rocky", "clear"});

  for (int bits = 0; bits < kConfigs; ++bits) {
    const int hall = index(0, bits);
    b.add_transition(hall, forward, hall, 1.0).add_transition(hall, backward, hall, 1.0);
    for (int t = 0; t < kTunnels; ++t) b.add_transition(hall, tunnel_1 + t, index(pos(t, 1), bits), 1.0);
    for (int a = 0; a < 5; ++a) b.set_observation(hall, a, none, 1.0);

    for (int t = 0; t < kTunnels; ++t) {
      for (int c = 1; c <= kCells; ++c) {
        const int s = index(pos(t, c), bits);
        if (c < kCells) {
          b.add_transition(s, forward, index(pos(t, c + 1), bits), 1.0);
          if (c + 1 >= kCells - 1 && has_rocks(t, bits)) b.set_cost(s, forward, 1.0);
        } else {
          b.add_transition(s, forward, terminal, 1.0).set_reward(s, forward, end_reward[t]);
        }
        b.add_transition(s, backward, c > 1 ? index(pos(t, c - 1), bits) : hall, 1.0);
        b.set_cost(s, backward, p.backtrack_cost);
        for (int a = tunnel_1; a <= tunnel_3; ++a) b.add_transition(s, a, s, 1.0);
        for (int a = 0; a < 5; ++a) {
          if (t < 2) {
            const bool r = has_rocks(t, bits);
            b.set_observation(s, a, rocky, r ? p.p_obs_correct : 1.0 - p.p_obs_correct);
            b.set_observation(s, a, clear, r ? 1.0 - p.p_obs_correct : p.p_obs_correct);
          } else {
            b.set_observation(s, a, none, 1.0);
          }
        }
      }
    }
  }
  for (int a = 0; a < 5; ++a) {
    b.add_transition(terminal, a, terminal, 1.0);
    b.set_observation(terminal, a, none, 1.0);
  }

  std::vector<double> b0(kStates, 0.0);
  for (int bits = 0; bits < kConfigs; ++bits) {
    const double p1 = (bits & 1) ? p.rock_probs[0] : 1.0 - p.rock_probs[0];
    const double p2 = (bits & 2) ? p.rock_probs[1] : 1.0 - p.rock_probs[1];
    b0[index(0, bits)] = p1 * p2;
  }
  b.gamma(0.95).cost_budget(p.c_hat).initial_belief(std::move(b0));
  return std::move(b).build();
}

namespace {

double parse_double(const std::string& env, const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw InvalidParams(env + ": parameter " + key + " expects a number, got '" + v + "'");
}

long long parse_int(const std::string& env, const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw InvalidParams(env + ": parameter " + key + " expects an integer, got '" + v + "'");
}

void check_keys(const EnvSpec& spec, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : spec.params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InvalidParams(spec.name + ": unknown parameter '" + key + "'");
  }
}

}  // namespace

Model make_env(const EnvSpec& spec) {
  const auto& p = spec.params;
  auto num = [&](const char* key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : parse_double(spec.name, key, it->second);
  };
  auto integer = [&](const char* key, long long fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : parse_int(spec.name, key, it->second);
  };

  if (spec.name == "ce") {
    check_keys(spec, {"accuracy", "c_hat"});
    return make_ce(num("accuracy", 0.8), num("c_hat", 5.0));
  }
  if (spec.name == "ctiger") {
    check_keys(spec, {"c_hat", "accuracy"});
    return make_ctiger(num("c_hat", 3.0), num("accuracy", 0.85));
  }
  if (spec.name == "crs") {
    check_keys(spec, {"n", "k", "seed", "c_hat"});
    long long seed = integer("seed", static_cast<long long>(kDefaultSeed));
    if (seed < 0) throw InvalidParams("crs: seed must be nonnegative");
    return make_crs(static_cast<int>(integer("n", 4)), static_cast<int>(integer("k", 4)),
                    static_cast<std::uint64_t>(seed), num("c_hat", 1.0));
  }
  if (spec.name == "tunnels") {
    check_keys(spec, {"p", "rock1", "rock2", "rock3", "backtrack_cost", "c_hat"});
    TunnelsParams tp;
    tp.p_obs_correct = num("p", tp.p_obs_correct);
    tp.rock_probs = {num("rock1", tp.rock_probs[0]), num("rock2", tp.rock_probs[1]), num("rock3", tp.rock_probs[2])};
    tp.backtrack_cost = num("backtrack_cost", tp.backtrack_cost);
    tp.c_hat = num("c_hat", tp.c_hat);
    return make_tunnels(tp);
  }
  throw InvalidParams("unknown environment '" + spec.name + "'");
}

const std::vector<std::string>& env_names() {
  static const std::vector<std::string> names{"ce", "ctiger", "crs", "tunnels"};
  return names;
}

}  // namespace rcpomdp
