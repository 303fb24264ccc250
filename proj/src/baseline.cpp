#include "rcpomdp/baseline.hpp"

#include <chrono>
#include <cmath>

#include "rcpomdp/io.hpp"
#include "rcpomdp/lp.hpp"
#include "rcpomdp/sim.hpp"

namespace rcpomdp {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<long long> belief_key(const Belief& b) {
  std::vector<long long> key(b.size());
  for (std::size_t s = 0; s < b.size(); ++s) key[s] = std::llround(b[s] * 1e9);
  return key;
}

bool all_terminal(const Model& m, const Belief& b) {
  for (std::size_t s = 0; s < b.size(); ++s)
    if (b[s] > 0.0 && !m.is_terminal(static_cast<int>(s))) return false;
  return true;
}

ColumnValue monte_carlo_value(const Model& m, const AlphaPairSet& alphas, Scalarization w,
                              const ColumnEvalOptions& opts) {
  GreedyPolicy policy(std::make_shared<const AlphaPairSet>(alphas), w);
  EvalOptions eo;
  eo.trials = opts.rollouts;
  eo.horizon = opts.depth;
  eo.seed = opts.seed;
  eo.exec = Exec::serial;
  auto ev = evaluate(m, policy, eo);
  ColumnValue v;
  v.exact = false;
  v.value_r = ev.aggregate.mean_reward;
  v.value_c = ev.aggregate.mean_cost;
  const double tail = std::pow(m.gamma(), opts.depth) / (1.0 - m.gamma());
  v.tail_r = tail * std::max(std::abs(m.max_reward()), std::abs(m.min_reward()));
  v.tail_c = tail * m.max_cost();
  return v;
}

struct Master {
  std::vector<double> weights;
  double objective = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
};

Master solve_master(const std::vector<PolicyColumn>& cols, double c_hat) {
  LinearProgram lp;
  LinearConstraint budget, convex;
  budget.sense = Sense::le;
  budget.rhs = c_hat;
  convex.sense = Sense::eq;
  convex.rhs = 1.0;
  for (const auto& c : cols) {
    lp.objective.push_back(c.value_r);
    budget.coeffs.push_back(c.value_c);
    convex.coeffs.push_back(1.0);
  }
  lp.constraints = {budget, convex};
  auto sol = lp_solve(lp);
  Master out;
  out.weights = sol.x;
  double total = 0.0;
  for (double& w : out.weights) total += (w = std::max(0.0, w));
  for (double& w : out.weights) w /= total;
  out.objective = sol.optimum;
  out.lambda = std::max(0.0, sol.duals[0]);
  out.mu = sol.duals[1];
  return out;
}

}  // namespace

ColumnValue evaluate_policy_columns(const Model& m, const AlphaPairSet& alphas, Scalarization w,
                                    const ColumnEvalOptions& opts) {
  const double g = m.gamma();
  std::map<std::vector<long long>, std::pair<Belief, double>> layer, next;
  layer.emplace(belief_key(m.initial_belief()), std::make_pair(m.initial_belief(), 1.0));
  ColumnValue v;
  double discount = 1.0;
  for (int t = 0; t < opts.depth && !layer.empty(); ++t) {
    if (layer.size() > opts.max_layer) return monte_carlo_value(m, alphas, w, opts);
    next.clear();
    for (const auto& [key, entry] : layer) {
      const auto& [b, p] = entry;
      if (all_terminal(m, b)) continue;
      const int a = alphas[best_pair(alphas, b, w)].action;
      v.value_r += discount * p * expected_reward(m, b, a);
      v.value_c += discount * p * expected_cost(m, b, a);
      for (auto& succ : successors(m, b, a)) {
        if (succ.prob <= kObservationEpsilon) continue;
        auto [it, fresh] = next.try_emplace(belief_key(succ.belief), succ.belief, 0.0);
        it->second.second += p * succ.prob;
      }
    }
    layer.swap(next);
    discount *= g;
  }
  bool open = false;
  for (const auto& [key, entry] : layer) open = open || !all_terminal(m, entry.first);
  if (open) {
    const double tail = discount / (1.0 - g);
    v.tail_r = tail * std::max(std::abs(m.max_reward()), std::abs(m.min_reward()));
    v.tail_c = tail * m.max_cost();
  }
  return v;
}

// ---------------------------------------------------------------------------

double MixedPolicy::value_r() const {
  double v = 0.0;
  for (std::size_t i = 0; i < columns.size(); ++i) v += weights[i] * columns[i].value_r;
  return v;
}

double MixedPolicy::value_c() const {
  double v = 0.0;
  for (std::size_t i = 0; i < columns.size(); ++i) v += weights[i] * columns[i].value_c;
  return v;
}

json MixedPolicy::to_json() const {
  json cols = json::array();
  for (const auto& c : columns)
    cols.push_back({{"weights", {c.weights.wr, c.weights.wc}},
                    {"value_r", c.value_r},
                    {"value_c", c.value_c},
                    {"alphas", alpha_pairs_to_json(*c.alphas)}});
  return json{{"type", "mixed"}, {"weights", weights}, {"columns", std::move(cols)}};
}

MixedPolicy MixedPolicy::from_json(const json& j, std::size_t num_states) {
  if (!j.is_object() || !j.contains("columns") || !j["columns"].is_array() || j["columns"].empty())
    throw SchemaError("$.columns", "expected a nonempty array");
  if (!j.contains("weights") || !j["weights"].is_array() || j["weights"].size() != j["columns"].size())
    throw SchemaError("$.weights", "expected one weight per column");
  MixedPolicy mix;
  double total = 0.0;
  for (std::size_t i = 0; i < j["weights"].size(); ++i) {
    const auto& w = j["weights"][i];
    if (!w.is_number() || w.get<double>() < 0.0)
      throw SchemaError("$.weights[" + std::to_string(i) + "]", "expected a nonnegative number");
    mix.weights.push_back(w.get<double>());
    total += mix.weights.back();
  }
  if (std::abs(total - 1.0) > 1e-6) throw SchemaError("$.weights", "weights must sum to 1");
  for (std::size_t i = 0; i < j["columns"].size(); ++i) {
    const std::string p = "$.columns[" + std::to_string(i) + "]";
    const auto& c = j["columns"][i];
    if (!c.is_object()) throw SchemaError(p, "expected an object");
    for (const char* key : {"value_r", "value_c"})
      if (!c.contains(key) || !c[key].is_number()) throw SchemaError(p + "." + key, "expected a number");
    if (!c.contains("weights") || !c["weights"].is_array() || c["weights"].size() != 2 || !c["weights"][0].is_number() ||
        !c["weights"][1].is_number())
      throw SchemaError(p + ".weights", "expected [wr, wc]");
    if (!c.contains("alphas")) throw SchemaError(p + ".alphas", "missing field");
    PolicyColumn col;
    col.weights = {c["weights"][0].get<double>(), c["weights"][1].get<double>()};
    col.value_r = c["value_r"].get<double>();
    col.value_c = c["value_c"].get<double>();
    try {
      col.alphas = std::make_shared<const AlphaPairSet>(alpha_pairs_from_json(c["alphas"], num_states));
    } catch (const SchemaError& e) {
      throw SchemaError(p + ".alphas", e.what());
    }
    mix.columns.push_back(std::move(col));
  }
  return mix;
}

// ---------------------------------------------------------------------------

CgcpResult solve_cgcp(const Model& m, const CgcpOptions& opts) {
  const auto t0 = Clock::now();
  auto remaining = [&] { return std::max(0.0, opts.time_budget - seconds_since(t0)); };
  double tau = opts.subproblem_budget;

  auto make_column = [&](Scalarization w) {
    PointBasedOptions po;
    po.weights = w;
    po.time_budget = std::min(tau, remaining());
    po.exec = opts.exec;
    PolicyColumn col;
    col.alphas = std::make_shared<const AlphaPairSet>(solve_point_based(m, po).alphas);
    col.weights = w;
    auto v = evaluate_policy_columns(m, *col.alphas, w, opts.eval);
    col.value_r = v.value_r;
    col.value_c = v.value_c;
    return col;
  };

  CgcpResult res;
  std::vector<PolicyColumn> cols{make_column(kMinCost)};
  Master master;
  try {
    master = solve_master(cols, m.cost_budget());
  } catch (const LpInfeasible&) {
    res.feasible = false;
  }

  double lambda = 0.0;
  for (int it = 0; res.feasible && it < opts.max_iterations && remaining() > 0.0; ++it) {
    ++res.iterations;
    PolicyColumn col = make_column({1.0, lambda});
    // The first subproblem runs at λ = 0 regardless of the seed master's
    // duals, so its column is always offered to the master.
    const double reduced = col.value_r - master.lambda * col.value_c - master.mu;
    if (it > 0 && reduced <= opts.tolerance) break;
    cols.push_back(std::move(col));
    try {
      master = solve_master(cols, m.cost_budget());
    } catch (const LpInfeasible&) {
      res.feasible = false;
      break;
    }
    res.objectives.push_back(master.objective);
    res.lambdas.push_back(master.lambda);
    if (it > 0 && std::abs(master.lambda - lambda) < opts.stall_threshold) tau += opts.budget_increment;
    lambda = master.lambda;
  }

  if (!res.feasible) {
    res.policy.columns = {cols.front()};
    res.policy.weights = {1.0};
  } else {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (master.weights[i] <= 0.0) continue;
      res.policy.columns.push_back(cols[i]);
      res.policy.weights.push_back(master.weights[i]);
    }
  }
  res.seconds = seconds_since(t0);
  return res;
}

// ---------------------------------------------------------------------------

MixedExecutor::MixedExecutor(std::shared_ptr<const MixedPolicy> mix) : mix_(std::move(mix)) {
  if (!mix_ || mix_->columns.empty()) throw EmptySet("mixed policy has no columns");
}

void MixedExecutor::reset(std::mt19937_64& rng) {
  std::discrete_distribution<int> pick(mix_->weights.begin(), mix_->weights.end());
  column_ = pick(rng);
}

int MixedExecutor::act(const Belief& b, double, std::mt19937_64&) {
  const auto& col = mix_->columns[column_];
  return (*col.alphas)[best_pair(*col.alphas, b, col.weights)].action;
}

json MixedExecutor::to_json() const { return mix_->to_json(); }

ClosedLoopPolicy::ClosedLoopPolicy(std::shared_ptr<const Model> m, CgcpOptions per_step,
                                   std::shared_ptr<const AlphaPairSet> gamma_cmin)
    : m_(std::move(m)), per_step_(per_step), gamma_cmin_(std::move(gamma_cmin)), cache_(std::make_shared<Cache>()) {}

std::shared_ptr<const MixedPolicy> ClosedLoopPolicy::solve_at(const Belief& b, double d) const {
  auto key = belief_key(b);
  key.push_back(std::llround(d * 1e9));
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->entries.find(key);
    if (it != cache_->entries.end()) return it->second;
  }
  auto mix = std::make_shared<const MixedPolicy>(solve_cgcp(m_->with_start(b, d), per_step_).policy);
  std::lock_guard lock(cache_->mu);
  return cache_->entries.emplace(std::move(key), std::move(mix)).first->second;
}

std::vector<double> ClosedLoopPolicy::action_distribution(const Belief& b, double d) const {
  std::vector<double> dist(m_->num_actions(), 0.0);
  if (d < 0.0) {
    dist[min_cost_action(*gamma_cmin_, b)] = 1.0;
    return dist;
  }
  auto mix = solve_at(b, d);
  for (std::size_t i = 0; i < mix->columns.size(); ++i) {
    const auto& col = mix->columns[i];
    dist[(*col.alphas)[best_pair(*col.alphas, b, col.weights)].action] += mix->weights[i];
  }
  return dist;
}

int ClosedLoopPolicy::act(const Belief& b, double d, std::mt19937_64& rng) {
  auto dist = action_distribution(b, d);
  std::discrete_distribution<int> pick(dist.begin(), dist.end());
  return pick(rng);
}

json ClosedLoopPolicy::to_json() const {
  return json{{"type", "cgcp-cl"},
              {"per_step_budget", per_step_.time_budget},
              {"max_iterations", per_step_.max_iterations},
              {"gamma_cmin", alpha_pairs_to_json(*gamma_cmin_)}};
}

}  // namespace rcpomdp
