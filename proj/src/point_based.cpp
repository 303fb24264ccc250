#include "rcpomdp/point_based.hpp"

#include <chrono>
#include <cmath>
#include <map>

namespace rcpomdp {

namespace {

constexpr double kTie = 1e-9;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// True when (v1, r1, c1) beats (v0, r0, c0) under the tie-break rule.
bool better(double v1, double r1, double c1, double v0, double r0, double c0, Scalarization w) {
  if (v1 > v0 + kTie) return true;
  if (v1 < v0 - kTie) return false;
  return w.wr == 0.0 ? r1 > r0 + kTie : c1 < c0 - kTie;
}

std::vector<long long> belief_key(const Belief& b) {
  std::vector<long long> key(b.size());
  for (std::size_t s = 0; s < b.size(); ++s) key[s] = std::llround(b[s] * 1e9);
  return key;
}

class BeliefSet {
 public:
  bool add(const Belief& b) {
    if (!index_.emplace(belief_key(b), beliefs_.size()).second) return false;
    beliefs_.push_back(b);
    return true;
  }
  const std::vector<Belief>& beliefs() const { return beliefs_; }
  std::size_t size() const { return beliefs_.size(); }

 private:
  std::map<std::vector<long long>, std::size_t> index_;
  std::vector<Belief> beliefs_;
};

AlphaPair backup_one(const Model& m, const AlphaPairSet& set, const Belief& b, Scalarization w) {
  const std::size_t ns = m.num_states(), no = m.num_observations();
  const double g = m.gamma();
  AlphaPair best;
  double bv = 0.0, br = 0.0, bc = 0.0;
  bool have = false;
  const std::size_t fallback = best_pair(set, b, w);

  for (std::size_t a = 0; a < m.num_actions(); ++a) {
    const int ai = static_cast<int>(a);
    auto pred = predict(m, b, ai);
    std::vector<std::size_t> choice(no, fallback);
    std::vector<double> next(ns);
    for (std::size_t o = 0; o < no; ++o) {
      std::fill(next.begin(), next.end(), 0.0);
      double mass = 0.0;
      for (const auto& t : pred) {
        double v = m.observation(t.next, ai, static_cast<int>(o)) * t.prob;
        next[t.next] = v;
        mass += v;
      }
      if (mass <= kObservationEpsilon) continue;
      choice[o] = best_pair(set, Belief::normalized(next), w);
    }

    AlphaPair cand;
    cand.action = ai;
    cand.alpha_r.assign(ns, 0.0);
    cand.alpha_c.assign(ns, 0.0);
    for (std::size_t s = 0; s < ns; ++s) {
      const int si = static_cast<int>(s);
      double fr = 0.0, fc = 0.0;
      for (const auto& t : m.transitions(si, ai)) {
        for (std::size_t o = 0; o < no; ++o) {
          double z = m.observation(t.next, ai, static_cast<int>(o));
          if (z == 0.0) continue;
          const auto& nxt = set[choice[o]];
          fr += t.prob * z * nxt.alpha_r[t.next];
          fc += t.prob * z * nxt.alpha_c[t.next];
        }
      }
      cand.alpha_r[s] = m.reward(si, ai) + g * fr;
      cand.alpha_c[s] = m.cost(si, ai) + g * fc;
    }
    double r = dot(cand.alpha_r, b), c = dot(cand.alpha_c, b);
    double v = w.wr * r - w.wc * c;
    if (!have || better(v, r, c, bv, br, bc, w)) {
      best = std::move(cand);
      bv = v;
      br = r;
      bc = c;
      have = true;
    }
  }
  return best;
}

}  // namespace

double scalar_value(const AlphaPair& p, const Belief& b, Scalarization w) {
  return w.wr * dot(p.alpha_r, b) - w.wc * dot(p.alpha_c, b);
}

std::size_t best_pair(const AlphaPairSet& set, const Belief& b, Scalarization w) {
  if (set.empty()) throw EmptySet("alpha pair set is empty");
  const SparseBelief sb(b);
  std::size_t best = 0;
  double br = sb.dot(set[0].alpha_r), bc = sb.dot(set[0].alpha_c);
  double bv = w.wr * br - w.wc * bc;
  for (std::size_t i = 1; i < set.size(); ++i) {
    double r = sb.dot(set[i].alpha_r), c = sb.dot(set[i].alpha_c);
    double v = w.wr * r - w.wc * c;
    if (better(v, r, c, bv, br, bc, w)) {
      best = i;
      bv = v;
      br = r;
      bc = c;
    }
  }
  return best;
}

AlphaPairSet backup_beliefs(const Model& m, const AlphaPairSet& set, const std::vector<Belief>& beliefs,
                            Scalarization w, Exec exec) {
  AlphaPairSet out(beliefs.size());
  const long n = static_cast<long>(beliefs.size());
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic, 4) if (par)
  for (long i = 0; i < n; ++i) out[i] = backup_one(m, set, beliefs[i], w);
  return out;
}

PointBasedResult solve_point_based(const Model& m, const PointBasedOptions& opts) {
  const auto t0 = Clock::now();
  const Scalarization w = opts.weights;
  PointBasedResult res;
  res.alphas = blind_pairs(m, opts.bound_options);

  BeliefSet beliefs;
  beliefs.add(m.initial_belief());
  std::vector<Belief> frontier{m.initial_belief()};
  for (int depth = 0; depth < opts.breadth_depth && beliefs.size() < opts.max_beliefs; ++depth) {
    std::vector<Belief> next;
    for (const auto& b : frontier)
      for (std::size_t a = 0; a < m.num_actions(); ++a)
        for (auto& succ : successors(m, b, static_cast<int>(a)))
          if (succ.prob > kObservationEpsilon && beliefs.size() < opts.max_beliefs && beliefs.add(succ.belief))
            next.push_back(std::move(succ.belief));
    frontier = std::move(next);
  }

  while (res.rounds < opts.max_rounds && seconds_since(t0) < opts.time_budget) {
    ++res.rounds;
    const auto& bs = beliefs.beliefs();
    // Back up deepest beliefs first so values flow toward b0 within a round.
    std::vector<Belief> order(bs.rbegin(), bs.rend());
    auto candidates = backup_beliefs(m, res.alphas, order, w, opts.exec);
    bool improved = false;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Belief& b = order[i];
      const auto& cur = res.alphas[best_pair(res.alphas, b, w)];
      const auto& cand = candidates[i];
      double cr = dot(cand.alpha_r, b), cc = dot(cand.alpha_c, b);
      double ur = dot(cur.alpha_r, b), uc = dot(cur.alpha_c, b);
      const double cv = w.wr * cr - w.wc * cc, uv = w.wr * ur - w.wc * uc;
      const double tol = opts.improvement_tolerance;
      const bool tie_win = std::abs(cv - uv) <= kTie && (w.wr == 0.0 ? cr > ur + tol : cc < uc - tol);
      if (cv > uv + tol || tie_win) {
        res.alphas.push_back(std::move(candidates[i]));
        improved = true;
      }
    }

    bool grew = false;
    const std::size_t count = beliefs.size();
    for (std::size_t i = 0; i < count && beliefs.size() < opts.max_beliefs; ++i) {
      Belief b = beliefs.beliefs()[i];
      int a = res.alphas[best_pair(res.alphas, b, w)].action;
      for (auto& succ : successors(m, b, a))
        if (succ.prob > kObservationEpsilon && beliefs.size() < opts.max_beliefs && beliefs.add(succ.belief))
          grew = true;
    }
    if (!improved && !grew) {
      res.converged = true;
      break;
    }
  }
  res.beliefs = beliefs.beliefs();
  res.seconds = seconds_since(t0);
  return res;
}

AlphaPairSet solve_min_cost_policy(const Model& m, double time_budget, Exec exec) {
  PointBasedOptions opts;
  opts.weights = kMinCost;
  opts.time_budget = time_budget;
  opts.exec = exec;
  return solve_point_based(m, opts).alphas;
}

}  // namespace rcpomdp
