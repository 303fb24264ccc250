#include "rcpomdp/sim.hpp"

#include <cmath>
#include <iomanip>

namespace rcpomdp {

using nlohmann::json;

std::uint64_t belief_digest(const Belief& b) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (double p : b.probs()) {
    std::uint64_t x = static_cast<std::uint64_t>(std::llround(p * 1e9));
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::mt19937_64 trial_rng(std::uint64_t seed, long long trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(static_cast<std::uint64_t>(trial) >> 32)};
  return std::mt19937_64(seq);
}

namespace {

int draw(std::mt19937_64& rng, const std::vector<double>& weights) {
  std::discrete_distribution<int> dist(weights.begin(), weights.end());
  return dist(rng);
}

}  // namespace

RunMetrics rollout(const Model& m, Policy& policy, int horizon, std::mt19937_64& rng, bool record) {
  RunMetrics out;
  const double g = m.gamma();
  Belief b = m.initial_belief();
  double d = m.cost_budget();
  out.min_d = d;
  int s = draw(rng, std::vector<double>(b.probs().begin(), b.probs().end()));
  policy.reset(rng);

  double discount = 1.0;
  std::vector<double> weights;
  for (int t = 0; t < horizon && !m.is_terminal(s); ++t) {
    const int a = policy.act(b, d, rng);
    const double step_cost = expected_cost(m, b, a);
    out.discounted_reward += discount * m.reward(s, a);
    out.discounted_cost += discount * m.cost(s, a);
    out.belief_cost += discount * step_cost;
    d = d_update(d, step_cost, g);
    out.min_d = std::min(out.min_d, d);

    const auto trans = m.transitions(s, a);
    weights.clear();
    for (const auto& tr : trans) weights.push_back(tr.prob);
    const int next = trans[draw(rng, weights)].next;
    weights.assign(m.num_observations(), 0.0);
    for (std::size_t o = 0; o < m.num_observations(); ++o) weights[o] = m.observation(next, a, static_cast<int>(o));
    const int o = draw(rng, weights);

    if (record) out.trajectory.push_back({t, s, belief_digest(b), a, o, d});
    out.history.push_back({a, o});
    b = belief_update(m, b, a, o);
    policy.observe(a, o);
    s = next;
    discount *= g;
    ++out.steps;
  }
  out.violated = out.min_d < kViolationTolerance;
  return out;
}

AggregateMetrics aggregate(const std::vector<RunMetrics>& runs) {
  AggregateMetrics a;
  a.trials = static_cast<long long>(runs.size());
  if (runs.empty()) return a;
  // Welford: identical samples give exactly zero spread.
  double mr = 0.0, mc = 0.0, m2r = 0.0, m2c = 0.0, v = 0.0, k = 0.0;
  for (const auto& r : runs) {
    k += 1.0;
    const double dr = r.discounted_reward - mr, dc = r.discounted_cost - mc;
    mr += dr / k;
    mc += dc / k;
    m2r += dr * (r.discounted_reward - mr);
    m2c += dc * (r.discounted_cost - mc);
    v += r.violated ? 1.0 : 0.0;
  }
  a.mean_reward = mr;
  a.mean_cost = mc;
  a.violation_rate = v / k;
  if (runs.size() > 1) {
    a.sem_reward = std::sqrt(m2r / (k - 1.0)) / std::sqrt(k);
    a.sem_cost = std::sqrt(m2c / (k - 1.0)) / std::sqrt(k);
  }
  return a;
}

Evaluation evaluate(const Model& m, const Policy& policy, const EvalOptions& opts) {
  if (opts.trials < 1) throw std::invalid_argument("evaluate: trials must be at least 1");
  if (opts.horizon < 1) throw std::invalid_argument("evaluate: horizon must be at least 1");
  Evaluation ev;
  ev.runs.resize(static_cast<std::size_t>(opts.trials));
  const bool par = opts.exec == Exec::parallel;
#pragma omp parallel if (par)
  {
    auto local = policy.clone();
#pragma omp for schedule(dynamic, 16)
    for (long long i = 0; i < opts.trials; ++i) {
      auto rng = trial_rng(opts.seed, i);
      ev.runs[i] = rollout(m, *local, opts.horizon, rng, opts.record_trajectories);
    }
  }
  ev.aggregate = aggregate(ev.runs);
  return ev;
}

void write_runs_csv(std::ostream& os, const std::vector<RunMetrics>& runs) {
  os << "trial,reward,cost,violated,steps\n" << std::setprecision(17);
  for (std::size_t i = 0; i < runs.size(); ++i)
    os << i << ',' << runs[i].discounted_reward << ',' << runs[i].discounted_cost << ',' << (runs[i].violated ? 1 : 0)
       << ',' << runs[i].steps << '\n';
}

void write_trajectory_csv(std::ostream& os, const std::vector<RunMetrics>& runs) {
  os << "trial,step,state,action,observation,d\n" << std::setprecision(17);
  for (std::size_t i = 0; i < runs.size(); ++i)
    for (const auto& st : runs[i].trajectory)
      os << i << ',' << st.step << ',' << st.state << ',' << st.action << ',' << st.observation << ',' << st.d << '\n';
}

json aggregate_to_json(const AggregateMetrics& a) {
  return json{{"trials", a.trials},       {"mean_reward", a.mean_reward}, {"sem_reward", a.sem_reward},
              {"mean_cost", a.mean_cost}, {"sem_cost", a.sem_cost},       {"violation_rate", a.violation_rate}};
}

}  // namespace rcpomdp
