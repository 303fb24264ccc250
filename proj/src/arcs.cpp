#include "rcpomdp/arcs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "rcpomdp/io.hpp"
#include "rcpomdp/point_based.hpp"

namespace rcpomdp {

using nlohmann::json;

namespace {

constexpr double kCostTol = 1e-9;

Horizon add_one(Horizon k) { return k == kInfinity ? k : k + 1; }

/// Horizon still required at the given depth for a target.
Horizon required(Horizon target, int depth) {
  if (target == kInfinity) return kInfinity;
  return std::max<Horizon>(0, target - depth);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

Horizon admissible_horizon(double d, double c_max, double gamma) {
  if (!(d >= 0.0)) return 0;
  if (c_max <= 0.0) return kInfinity;
  if (c_max / (1.0 - gamma) <= d + 1e-9 * std::max(1.0, std::abs(d))) return kInfinity;
  const double x = 1.0 - (d / c_max) * (1.0 - gamma);
  double estimate = std::floor(std::log(x) / std::log(gamma));
  if (!(estimate >= 0.0)) estimate = 0.0;
  if (estimate > 1e6) return static_cast<Horizon>(estimate);
  // Count exactly with the same arithmetic the budget recursion uses.
  double v = d;
  Horizon n = 0;
  while (n < 10'000'000) {
    double next = d_update(v, c_max, gamma);
    if (next < 0.0) return n;
    v = next;
    ++n;
  }
  return n;
}

std::string horizon_to_string(Horizon k) { return k == kInfinity ? "inf" : std::to_string(k); }

json horizon_to_json(Horizon k) { return k == kInfinity ? json("inf") : json(k); }

Horizon horizon_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfinity;
  if (j.is_number_integer() && j.get<long long>() >= 0) return j.get<Horizon>();
  throw SchemaError("k", "expected a nonnegative integer or \"inf\"");
}

// ---------------------------------------------------------------------------

int PolicyTree::find(const Belief& b, double d) const {
  for (const auto& n : nodes_)
    if (std::abs(n.d - d) <= 1e-6 && n.b.l1_distance(b) <= 1e-6) return n.id;
  return -1;
}

json PolicyTree::to_json() const {
  json nodes = json::array();
  for (const auto& n : nodes_) {
    json children = json::array();
    for (std::size_t a = 0; a < num_actions_; ++a)
      for (std::size_t o = 0; o < num_observations_; ++o) {
        int c = n.child(static_cast<int>(a), static_cast<int>(o), num_observations_);
        if (c >= 0) children.push_back({{"action", a}, {"observation", o}, {"node", c}});
      }
    std::vector<double> belief(n.b.probs().begin(), n.b.probs().end());
    nodes.push_back({{"id", n.id},
                     {"parent", n.parent},
                     {"parent_action", n.parent_action},
                     {"parent_observation", n.parent_observation},
                     {"depth", n.depth},
                     {"belief", belief},
                     {"d", n.d},
                     {"k", horizon_to_json(n.k)},
                     {"action", n.action},
                     {"pruned", n.pruned},
                     {"dead_end", n.dead_end},
                     {"v_r_lo", n.v_r_lo},
                     {"v_r_hi", n.v_r_hi},
                     {"v_c_lo", n.v_c_lo},
                     {"v_c_hi", n.v_c_hi},
                     {"children", std::move(children)}});
  }
  return json{{"type", "arcs"},
              {"num_actions", num_actions_},
              {"num_observations", num_observations_},
              {"c_max", c_max_},
              {"nodes", std::move(nodes)},
              {"gamma_cmin", alpha_pairs_to_json(gamma_cmin_)}};
}

PolicyTree PolicyTree::from_json(const json& j) {
  auto need = [](const json& obj, const char* key, const std::string& path) -> const json& {
    if (!obj.is_object() || !obj.contains(key)) throw SchemaError(path + "." + key, "missing field");
    return obj[key];
  };
  auto integer = [&](const json& obj, const char* key, const std::string& path) {
    const auto& v = need(obj, key, path);
    if (!v.is_number_integer()) throw SchemaError(path + "." + key, "expected an integer");
    return v.get<long long>();
  };
  auto number = [&](const json& obj, const char* key, const std::string& path) {
    const auto& v = need(obj, key, path);
    if (!v.is_number()) throw SchemaError(path + "." + key, "expected a number");
    return v.get<double>();
  };

  PolicyTree t;
  const long long na = integer(j, "num_actions", "$"), no = integer(j, "num_observations", "$");
  if (na <= 0 || no <= 0) throw SchemaError("$.num_actions", "dimensions must be positive");
  t.num_actions_ = static_cast<std::size_t>(na);
  t.num_observations_ = static_cast<std::size_t>(no);
  t.c_max_ = number(j, "c_max", "$");
  const auto& nodes = need(j, "nodes", "$");
  if (!nodes.is_array() || nodes.empty()) throw SchemaError("$.nodes", "expected a nonempty array");

  std::size_t num_states = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string p = "$.nodes[" + std::to_string(i) + "]";
    const auto& e = nodes[i];
    TreeNode n;
    n.id = static_cast<int>(integer(e, "id", p));
    if (n.id != static_cast<int>(i)) throw SchemaError(p + ".id", "node ids must be consecutive");
    n.parent = static_cast<int>(integer(e, "parent", p));
    n.parent_action = static_cast<int>(integer(e, "parent_action", p));
    n.parent_observation = static_cast<int>(integer(e, "parent_observation", p));
    n.depth = static_cast<int>(integer(e, "depth", p));
    const auto& bj = need(e, "belief", p);
    if (!bj.is_array() || bj.empty()) throw SchemaError(p + ".belief", "expected a nonempty array");
    std::vector<double> b;
    for (const auto& x : bj) {
      if (!x.is_number()) throw SchemaError(p + ".belief", "expected numbers");
      b.push_back(x.get<double>());
    }
    if (i == 0) num_states = b.size();
    if (b.size() != num_states) throw SchemaError(p + ".belief", "inconsistent belief size");
    try {
      n.b = Belief(std::move(b));
    } catch (const InvalidModel& err) {
      throw SchemaError(p + ".belief", err.what());
    }
    n.d = number(e, "d", p);
    try {
      n.k = horizon_from_json(need(e, "k", p));
    } catch (const SchemaError&) {
      throw SchemaError(p + ".k", "expected a nonnegative integer or \"inf\"");
    }
    n.action = static_cast<int>(integer(e, "action", p));
    if (n.action < 0 || n.action >= na) throw SchemaError(p + ".action", "action out of range");
    n.pruned = need(e, "pruned", p).get<bool>();
    n.dead_end = need(e, "dead_end", p).get<bool>();
    n.v_r_lo = number(e, "v_r_lo", p);
    n.v_r_hi = number(e, "v_r_hi", p);
    n.v_c_lo = number(e, "v_c_lo", p);
    n.v_c_hi = number(e, "v_c_hi", p);
    n.children.assign(t.num_actions_ * t.num_observations_, -1);
    const auto& cj = need(e, "children", p);
    if (!cj.is_array()) throw SchemaError(p + ".children", "expected an array");
    for (std::size_t c = 0; c < cj.size(); ++c) {
      const std::string cp = p + ".children[" + std::to_string(c) + "]";
      long long a = integer(cj[c], "action", cp), o = integer(cj[c], "observation", cp);
      long long id = integer(cj[c], "node", cp);
      if (a < 0 || a >= na || o < 0 || o >= no) throw SchemaError(cp, "action or observation out of range");
      if (id <= 0 || id >= static_cast<long long>(nodes.size())) throw SchemaError(cp + ".node", "unknown node");
      n.children[a * no + o] = static_cast<int>(id);
    }
    t.nodes_.push_back(std::move(n));
  }
  t.gamma_cmin_ = alpha_pairs_from_json(need(j, "gamma_cmin", "$"), num_states);
  return t;
}

int min_cost_action(const AlphaPairSet& gamma_cmin, const Belief& b) {
  return gamma_cmin[best_pair(gamma_cmin, b, kMinCost)].action;
}

int execute_action(const PolicyTree& tree, const Belief& b, double d) {
  int id = tree.find(b, d);
  if (id < 0 || tree.node(id).dead_end) return min_cost_action(tree.gamma_cmin(), b);
  return tree.node(id).action;
}

// ---------------------------------------------------------------------------

ArcsSolver::ArcsSolver(const Model& m, const ArcsOptions& opts, AlphaPairSet gamma_cmin)
    : ArcsSolver(m, opts, gamma_cmin, make_bound_set(m, gamma_cmin)) {}

ArcsSolver::ArcsSolver(const Model& m, const ArcsOptions& opts, AlphaPairSet gamma_cmin, BoundSet bounds)
    : m_(m), opts_(opts), bounds_(std::move(bounds)), rng_(opts.seed) {
  tree_.num_actions_ = m.num_actions();
  tree_.num_observations_ = m.num_observations();
  tree_.c_max_ = cmax_upper_bound(gamma_cmin);
  tree_.gamma_cmin_ = std::move(gamma_cmin);
  add_node(-1, -1, -1, m.initial_belief(), m.cost_budget());
  backup(0);
}

bool ArcsSolver::cost_ok(double value, double d) const {
  return value <= d + kCostTol * std::max(1.0, std::abs(d));
}

void ArcsSolver::init_actions(TreeNode& node) {
  const double g = m_.gamma();
  node.actions.resize(m_.num_actions());
  for (std::size_t a = 0; a < m_.num_actions(); ++a) {
    const int ai = static_cast<int>(a);
    auto& rec = node.actions[a];
    rec.reward = expected_reward(m_, node.b, ai);
    rec.cost = expected_cost(m_, node.b, ai);
    const double child_d = d_update(node.d, rec.cost, g);
    auto succ = successors(m_, node.b, ai);
    rec.obs_prob.assign(m_.num_observations(), 0.0);
    rec.leaf.assign(m_.num_observations(), ChildValue{0.0, 0.0, 0.0, 0.0, kInfinity});
    for (std::size_t o = 0; o < succ.size(); ++o) {
      if (succ[o].prob <= kObservationEpsilon) continue;
      rec.obs_prob[o] = succ[o].prob;
      const Belief& nb = succ[o].belief;
      ChildValue v;
      const auto& pair = tree_.gamma_cmin_[best_pair(tree_.gamma_cmin_, nb, kMinCost)];
      v.r_lo = dot(pair.alpha_r, nb);
      v.c_hi = dot(pair.alpha_c, nb);
      v.r_hi = std::max(alpha_eval(bounds_.upper_r, nb, EvalMode::max), v.r_lo);
      v.c_lo = std::min(alpha_eval(bounds_.lower_c, nb, EvalMode::min), v.c_hi);
      v.k = (v.c_hi <= opts_.beta && child_d >= 0.0) ? kInfinity
                                                      : admissible_horizon(child_d, tree_.c_max_, g);
      rec.leaf[o] = v;
    }
  }
}

int ArcsSolver::add_node(int parent, int a, int o, Belief b, double d) {
  TreeNode node;
  node.id = static_cast<int>(tree_.nodes_.size());
  node.parent = parent;
  node.parent_action = a;
  node.parent_observation = o;
  node.depth = parent < 0 ? 0 : tree_.nodes_[parent].depth + 1;
  node.b = std::move(b);
  node.d = d;
  node.children.assign(m_.num_actions() * m_.num_observations(), -1);
  init_actions(node);
  const int id = node.id;
  tree_.nodes_.push_back(std::move(node));
  if (parent >= 0) tree_.nodes_[parent].children[static_cast<std::size_t>(a) * m_.num_observations() + o] = id;
  return id;
}

ChildValue ArcsSolver::value_of(const TreeNode& node, int a, int o) const {
  int c = node.child(a, o, m_.num_observations());
  if (c < 0) return node.actions[a].leaf[o];
  const auto& ch = tree_.nodes_[c];
  return {ch.v_r_hi, ch.v_r_lo, ch.v_c_hi, ch.v_c_lo, ch.k};
}

void ArcsSolver::backup(int id) {
  auto& node = tree_.nodes_[id];
  const double g = m_.gamma();
  const std::size_t na = m_.num_actions(), no = m_.num_observations();

  for (std::size_t a = 0; a < na; ++a) {
    auto& rec = node.actions[a];
    double rh = 0.0, rl = 0.0, ch = 0.0, cl = 0.0;
    Horizon k = kInfinity;
    for (std::size_t o = 0; o < no; ++o) {
      const double p = rec.obs_prob[o];
      if (p == 0.0) continue;
      ChildValue v = value_of(node, static_cast<int>(a), static_cast<int>(o));
      rh += p * v.r_hi;
      rl += p * v.r_lo;
      ch += p * v.c_hi;
      cl += p * v.c_lo;
      k = std::min(k, v.k);
    }
    rec.q_r_hi = rec.reward + g * rh;
    rec.q_r_lo = rec.reward + g * rl;
    rec.q_c_hi = rec.cost + g * ch;
    rec.q_c_lo = rec.cost + g * cl;
    rec.k = cost_ok(rec.q_c_hi, node.d) ? add_one(k) : 0;
  }

  // Executed action: best lower reward bound among actions whose cost upper
  // bound fits the budget; otherwise the cheapest action.
  int chosen = -1;
  for (std::size_t a = 0; a < na; ++a) {
    const auto& r = node.actions[a];
    if (node.pruned || r.pruned || !cost_ok(r.q_c_hi, node.d)) continue;
    if (chosen < 0) {
      chosen = static_cast<int>(a);
      continue;
    }
    const auto& best = node.actions[chosen];
    if (r.q_r_lo > best.q_r_lo || (r.q_r_lo == best.q_r_lo && r.q_c_hi < best.q_c_hi)) chosen = static_cast<int>(a);
  }
  const bool fallback = chosen < 0;
  if (fallback) {
    chosen = 0;
    for (std::size_t a = 1; a < na; ++a) {
      const auto& r = node.actions[a];
      const auto& best = node.actions[chosen];
      if (r.q_c_hi < best.q_c_hi || (r.q_c_hi == best.q_c_hi && r.q_r_lo > best.q_r_lo)) chosen = static_cast<int>(a);
    }
  }
  const auto& sel = node.actions[chosen];
  node.action = chosen;
  node.v_r_lo = sel.q_r_lo;
  node.v_c_hi = sel.q_c_hi;
  node.k = fallback ? 0 : sel.k;

  // Upper reward and lower cost bounds over actions that could still be
  // admissible.
  node.v_r_hi = fallback ? sel.q_r_hi : -std::numeric_limits<double>::infinity();
  node.v_c_lo = fallback ? sel.q_c_lo : std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < na; ++a) {
    const auto& r = node.actions[a];
    if (r.pruned || !cost_ok(r.q_c_lo, node.d)) continue;
    node.v_r_hi = std::max(node.v_r_hi, r.q_r_hi);
    node.v_c_lo = std::min(node.v_c_lo, r.q_c_lo);
  }
}

void ArcsSolver::backup_to_root(int id) {
  for (int cur = id; cur >= 0; cur = tree_.nodes_[cur].parent) backup(cur);
}

bool ArcsSolver::prune_node(int id) {
  auto& node = tree_.nodes_[id];
  bool changed = false;
  const std::size_t na = m_.num_actions(), no = m_.num_observations();
  for (std::size_t a = 0; a < na; ++a) {
    auto& r = node.actions[a];
    if (r.pruned) continue;
    bool prune = !cost_ok(r.q_c_lo, node.d);
    for (std::size_t o = 0; o < no && !prune; ++o) {
      int c = node.child(static_cast<int>(a), static_cast<int>(o), no);
      prune = c >= 0 && tree_.nodes_[c].pruned;
    }
    if (prune) {
      r.pruned = true;
      changed = true;
    }
  }
  const Horizon need = required(opts_.k_target, node.depth);
  for (std::size_t a = 0; a < na; ++a) {
    auto& r = node.actions[a];
    if (r.pruned) continue;
    for (std::size_t b = 0; b < na; ++b) {
      const auto& rival = node.actions[b];
      if (b == a || rival.pruned) continue;
      if (rival.k >= need && r.k < rival.k && r.q_r_hi < rival.q_r_lo && cost_ok(rival.q_c_hi, node.d)) {
        r.pruned = true;
        changed = true;
        break;
      }
    }
  }
  if (changed) backup(id);
  if (!node.pruned) {
    bool any = false;
    for (const auto& r : node.actions) any = any || (!r.pruned && cost_ok(r.q_c_lo, node.d));
    if (!any || !cost_ok(node.v_c_lo, node.d)) {
      node.pruned = true;
      changed = true;
      backup(id);
    }
  }
  return changed;
}

void ArcsSolver::prune(const std::vector<int>& touched) {
  std::set<std::pair<int, int>, std::greater<>> order;  // (depth, id), deepest first
  for (int id : touched)
    for (int cur = id; cur >= 0; cur = tree_.nodes_[cur].parent)
      if (!order.emplace(tree_.nodes_[cur].depth, cur).second) break;
  for (const auto& [depth, id] : order) {
    prune_node(id);
    backup(id);
  }
}

int ArcsSolver::step_into(SampleResult& out, int id, int a, int o) {
  const auto& node = tree_.nodes_[id];
  int c = node.child(a, o, m_.num_observations());
  if (c >= 0) return c;
  Belief nb = belief_update(m_, node.b, a, o);
  double nd = d_update(node.d, node.actions[a].cost, m_.gamma());
  c = add_node(id, a, o, std::move(nb), nd);
  backup(c);
  out.path.push_back(c);
  out.created = true;
  return c;
}

void ArcsSolver::sample_heuristic(SampleResult& out, double eps) {
  const double g = m_.gamma();
  const std::size_t na = m_.num_actions(), no = m_.num_observations();
  double lower = tree_.nodes_[0].v_r_lo;
  double upper = lower + eps;
  int id = 0;
  for (int t = 0;; ++t) {
    out.path.push_back(id);
    const TreeNode& node = tree_.nodes_[id];
    if (node.pruned || t >= opts_.max_depth) return;
    const double scale = std::pow(g, -t);
    const double predicted = node.v_r_lo;
    if (predicted <= lower && node.v_r_hi <= std::max(upper, node.v_r_lo + eps * scale)) return;

    double best_lo = -std::numeric_limits<double>::infinity();
    int pick = -1;
    for (std::size_t a = 0; a < na; ++a) {
      const auto& r = node.actions[a];
      if (r.pruned) continue;
      if (cost_ok(r.q_c_hi, node.d)) best_lo = std::max(best_lo, r.q_r_lo);
      if (cost_ok(r.q_c_lo, node.d) && (pick < 0 || r.q_r_hi > node.actions[pick].q_r_hi)) pick = static_cast<int>(a);
    }
    if (pick < 0) {
      tree_.nodes_[id].dead_end = true;
      out.dead_end = true;
      return;
    }
    if (best_lo == -std::numeric_limits<double>::infinity()) best_lo = node.v_r_lo;
    const double l2 = std::max(lower, best_lo);
    const double u2 = std::max(upper, best_lo + scale * eps);

    const auto& rec = node.actions[pick];
    int obs = -1;
    double best_gap = -std::numeric_limits<double>::infinity();
    const double child_eps = eps * std::pow(g, -(t + 1));
    for (std::size_t o = 0; o < no; ++o) {
      if (rec.obs_prob[o] == 0.0) continue;
      ChildValue v = value_of(node, pick, static_cast<int>(o));
      double gap = rec.obs_prob[o] * (v.r_hi - v.r_lo - child_eps);
      if (gap > best_gap) {
        best_gap = gap;
        obs = static_cast<int>(o);
      }
    }
    double rest_lo = 0.0, rest_hi = 0.0;
    for (std::size_t o = 0; o < no; ++o) {
      if (static_cast<int>(o) == obs || rec.obs_prob[o] == 0.0) continue;
      ChildValue v = value_of(node, pick, static_cast<int>(o));
      rest_lo += rec.obs_prob[o] * v.r_lo;
      rest_hi += rec.obs_prob[o] * v.r_hi;
    }
    const double po = rec.obs_prob[obs];
    lower = (l2 - rec.reward - g * rest_lo) / (g * po);
    upper = (u2 - rec.reward - g * rest_hi) / (g * po);

    const std::size_t before = out.path.size();
    int next = step_into(out, id, pick, obs);
    if (out.path.size() != before) return;
    id = next;
  }
}

void ArcsSolver::sample_random(SampleResult& out) {
  const std::size_t na = m_.num_actions(), no = m_.num_observations();
  int id = 0;
  for (int t = 0;; ++t) {
    out.path.push_back(id);
    const TreeNode& node = tree_.nodes_[id];
    if (node.pruned || t >= opts_.max_depth) return;
    const Horizon need = required(opts_.k_target, t);
    std::vector<int> acts;
    bool admissible = false;
    for (std::size_t a = 0; a < na; ++a) {
      const auto& r = node.actions[a];
      if (r.pruned || !cost_ok(r.q_c_lo, node.d)) continue;
      admissible = true;
      if (r.k < need) acts.push_back(static_cast<int>(a));
    }
    if (!admissible) {
      tree_.nodes_[id].dead_end = true;
      out.dead_end = true;
      return;
    }
    if (acts.empty()) return;
    const int a = acts[std::uniform_int_distribution<std::size_t>(0, acts.size() - 1)(rng_)];
    const Horizon child_need = required(opts_.k_target, t + 1);
    std::vector<int> obs;
    for (std::size_t o = 0; o < no; ++o) {
      if (node.actions[a].obs_prob[o] == 0.0) continue;
      if (value_of(node, a, static_cast<int>(o)).k < child_need) obs.push_back(static_cast<int>(o));
    }
    if (obs.empty()) return;
    const int o = obs[std::uniform_int_distribution<std::size_t>(0, obs.size() - 1)(rng_)];
    const std::size_t before = out.path.size();
    int next = step_into(out, id, a, o);
    if (out.path.size() != before) return;
    id = next;
  }
}

SampleResult ArcsSolver::sample() {
  SampleResult out;
  const auto& root = tree_.nodes_[0];
  const double eps = opts_.kappa * std::max(0.0, root.v_r_hi - root.v_r_lo);
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < opts_.heuristic_probability)
    sample_heuristic(out, eps);
  else
    sample_random(out);
  return out;
}

void ArcsSolver::iterate() {
  auto s = sample();
  for (auto it = s.path.rbegin(); it != s.path.rend(); ++it) backup(*it);
  prune(s.path);
}

bool ArcsSolver::done() const {
  const auto& root = tree_.nodes_[0];
  if (root.pruned) return true;
  if (opts_.k_target != kInfinity) return root.k >= opts_.k_target;
  return root.k == kInfinity && root.v_r_hi - root.v_r_lo <= opts_.epsilon;
}

// ---------------------------------------------------------------------------

ArcsResult solve_arcs(const Model& m, const ArcsOptions& opts, AlphaPairSet gamma_cmin) {
  const auto t0 = Clock::now();
  ArcsSolver solver(m, opts, std::move(gamma_cmin));
  ArcsResult res;
  // Only iterations that move the root are recorded.
  auto record = [&](bool force) {
    const auto& root = solver.tree().root();
    if (!force && !res.history.empty()) {
      const auto& last = res.history.back();
      if (last.v_r_lo == root.v_r_lo && last.v_r_hi == root.v_r_hi && last.k == root.k) return;
    }
    res.history.push_back({res.iterations, root.v_r_lo, root.v_r_hi, root.k, solver.tree().size()});
  };
  record(true);
  long long idle = 0;
  while (!solver.done() && res.iterations < opts.max_iterations && solver.tree().size() < opts.max_nodes &&
         seconds_since(t0) < opts.time_budget) {
    const std::size_t before = solver.tree().size();
    solver.iterate();
    ++res.iterations;
    record(false);
    idle = solver.tree().size() == before ? idle + 1 : 0;
    if (idle >= 10000) break;
  }
  record(true);
  res.converged = solver.done() && !solver.tree().root().pruned;
  res.certified_k = solver.tree().root().k;
  res.tree = solver.release();
  res.seconds = seconds_since(t0);
  return res;
}

ArcsResult solve_arcs(const Model& m, const ArcsOptions& opts) {
  const auto t0 = Clock::now();
  auto gamma_cmin = solve_min_cost_policy(m, opts.time_budget * opts.min_cost_fraction, opts.exec);
  ArcsOptions rest = opts;
  rest.time_budget = std::max(0.0, opts.time_budget - seconds_since(t0));
  auto res = solve_arcs(m, rest, std::move(gamma_cmin));
  res.seconds = seconds_since(t0);
  return res;
}

}  // namespace rcpomdp
