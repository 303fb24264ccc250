#include "rcpomdp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rcpomdp/io.hpp"
#include "rcpomdp/lp.hpp"

namespace rcpomdp {

using nlohmann::json;

double dot(std::span<const double> alpha, const Belief& b) {
  double v = 0.0;
  for (std::size_t s = 0; s < alpha.size(); ++s)
    if (b[s] != 0.0) v += alpha[s] * b[s];
  return v;
}

SparseBelief::SparseBelief(const Belief& b) {
  for (std::size_t s = 0; s < b.size(); ++s)
    if (b[s] != 0.0) {
      states.push_back(s);
      probs.push_back(b[s]);
    }
}

std::size_t alpha_argbest(const AlphaSet& set, const Belief& b, EvalMode mode) {
  if (set.empty()) throw EmptySet("alpha set is empty");
  const SparseBelief sb(b);
  std::size_t best = 0;
  double bv = sb.dot(set[0].values);
  for (std::size_t i = 1; i < set.size(); ++i) {
    double v = sb.dot(set[i].values);
    if (mode == EvalMode::max ? v > bv : v < bv) {
      bv = v;
      best = i;
    }
  }
  return best;
}

double alpha_eval(const AlphaSet& set, const Belief& b, EvalMode mode) {
  return dot(set[alpha_argbest(set, b, mode)].values, b);
}

namespace {

double table(const Model& m, Objective obj, int s, int a) {
  return obj == Objective::reward ? m.reward(s, a) : m.cost(s, a);
}

/// Runs sweep(old, next) until the sup-norm change drops below tolerance.
/// Returns the last residual.
template <class Sweep>
double iterate(std::vector<double>& v, const IterationOptions& opts, const char* what, Sweep sweep) {
  std::vector<double> next(v.size());
  for (int it = 0; it < opts.max_iterations; ++it) {
    sweep(v, next);
    double res = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) res = std::max(res, std::abs(next[i] - v[i]));
    v.swap(next);
    if (opts.residuals) opts.residuals->push_back(res);
    if (res <= opts.tolerance) return res;
  }
  throw NonConvergence(std::string(what) + " did not converge in " + std::to_string(opts.max_iterations) +
                       " iterations");
}

AlphaSet to_alpha_set(const Model& m, const std::vector<double>& v) {
  const std::size_t ns = m.num_states();
  AlphaSet out(m.num_actions());
  for (std::size_t a = 0; a < m.num_actions(); ++a) {
    out[a].action = static_cast<int>(a);
    out[a].values.assign(v.begin() + a * ns, v.begin() + (a + 1) * ns);
  }
  return out;
}

double margin(const Model& m, double residual) { return residual * m.gamma() / (1.0 - m.gamma()); }

/// Blind policy values, one block of |S| per action, with a per-action
/// error margin. The actions do not interact, so each block gets its own.
std::vector<double> blind_values(const Model& m, Objective obj, const IterationOptions& opts,
                                 std::vector<double>& margins) {
  const std::size_t ns = m.num_states(), na = m.num_actions();
  const double g = m.gamma();
  std::vector<double> v(na * ns, 0.0);
  if (obj == Objective::reward) {
    double baws = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < na; ++a) {
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < ns; ++s) worst = std::min(worst, m.reward(static_cast<int>(s), static_cast<int>(a)));
      baws = std::max(baws, worst);
    }
    std::fill(v.begin(), v.end(), baws / (1.0 - g));
  }
  const bool par = opts.exec == Exec::parallel;
  auto sweep = [&](const std::vector<double>& old, std::vector<double>& next) {
    const long n = static_cast<long>(na * ns);
#pragma omp parallel for schedule(static) if (par)
    for (long i = 0; i < n; ++i) {
      const int a = static_cast<int>(i / static_cast<long>(ns));
      const int s = static_cast<int>(i % static_cast<long>(ns));
      const double* row = old.data() + static_cast<std::size_t>(a) * ns;
      double acc = 0.0;
      for (const auto& t : m.transitions(s, a)) acc += t.prob * row[t.next];
      next[i] = table(m, obj, s, a) + g * acc;
    }
  };
  iterate(v, opts, "blind bound", sweep);
  // The last sweep's per-action change bounds each block's distance to its
  // fixed point.
  std::vector<double> next(v.size());
  sweep(v, next);
  margins.assign(na, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    margins[i / ns] = std::max(margins[i / ns], std::abs(next[i] - v[i]));
  for (double& x : margins) x = x / (1.0 - g);
  v.swap(next);
  return v;
}

}  // namespace

AlphaSet fib_bound(const Model& m, Objective objective, const IterationOptions& opts) {
  const std::size_t ns = m.num_states(), na = m.num_actions(), no = m.num_observations();
  const double g = m.gamma();
  const bool par = opts.exec == Exec::parallel;
  const bool maximize = objective == Objective::reward;
  std::vector<double> v(na * ns, 0.0);

  double res = iterate(v, opts, "fast informed bound", [&](const std::vector<double>& old, std::vector<double>& next) {
    const long n = static_cast<long>(na * ns);
#pragma omp parallel for schedule(static) if (par)
    for (long i = 0; i < n; ++i) {
      const int a = static_cast<int>(i / static_cast<long>(ns));
      const int s = static_cast<int>(i % static_cast<long>(ns));
      const auto trans = m.transitions(s, a);
      double total = 0.0;
      for (std::size_t o = 0; o < no; ++o) {
        double best = 0.0;
        for (std::size_t ap = 0; ap < na; ++ap) {
          const double* alpha = old.data() + ap * ns;
          double acc = 0.0;
          for (const auto& t : trans) acc += t.prob * m.observation(t.next, a, static_cast<int>(o)) * alpha[t.next];
          if (ap == 0 || (maximize ? acc > best : acc < best)) best = acc;
        }
        total += best;
      }
      next[i] = table(m, objective, s, a) + g * total;
    }
  });

  double slack = margin(m, res);
  for (double& x : v) x = maximize ? x + slack : std::max(0.0, x - slack);
  return to_alpha_set(m, v);
}

AlphaSet blind_lower_bound(const Model& m, Objective objective, const IterationOptions& opts) {
  std::vector<double> margins;
  auto v = blind_values(m, objective, opts, margins);
  const std::size_t ns = m.num_states();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += objective == Objective::reward ? -margins[i / ns] : margins[i / ns];
  return to_alpha_set(m, v);
}

AlphaPairSet blind_pairs(const Model& m, const IterationOptions& opts) {
  auto r = blind_lower_bound(m, Objective::reward, opts);
  auto c = blind_lower_bound(m, Objective::cost, opts);
  AlphaPairSet out(m.num_actions());
  for (std::size_t a = 0; a < m.num_actions(); ++a) {
    out[a].action = static_cast<int>(a);
    out[a].alpha_r = std::move(r[a].values);
    out[a].alpha_c = std::move(c[a].values);
  }
  return out;
}

AlphaSet cost_part(const AlphaPairSet& pairs) {
  AlphaSet out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back({p.action, p.alpha_c});
  return out;
}

AlphaSet reward_part(const AlphaPairSet& pairs) {
  AlphaSet out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back({p.action, p.alpha_r});
  return out;
}

BoundSet make_bound_set(const Model& m, const AlphaPairSet& gamma_cmin, const IterationOptions& opts) {
  BoundSet bs;
  bs.upper_r = fib_bound(m, Objective::reward, opts);
  bs.lower_r = blind_lower_bound(m, Objective::reward, opts);
  bs.lower_c = fib_bound(m, Objective::cost, opts);
  bs.upper_c = gamma_cmin.empty() ? blind_lower_bound(m, Objective::cost, opts) : cost_part(gamma_cmin);
  return bs;
}

double cmax_upper_bound(const AlphaPairSet& gamma_cmin) {
  if (gamma_cmin.empty()) throw EmptySet("min-cost alpha set is empty");
  const std::size_t ns = gamma_cmin.front().alpha_c.size();
  // Variables: b(0..ns-1), t.
  LinearProgram lp;
  lp.objective.assign(ns + 1, 0.0);
  lp.objective[ns] = 1.0;
  for (const auto& p : gamma_cmin) {
    LinearConstraint c;
    c.coeffs.assign(ns + 1, 0.0);
    for (std::size_t s = 0; s < ns; ++s) c.coeffs[s] = -p.alpha_c[s];
    c.coeffs[ns] = 1.0;
    c.sense = Sense::le;
    c.rhs = 0.0;
    lp.constraints.push_back(std::move(c));
  }
  LinearConstraint simplex;
  simplex.coeffs.assign(ns + 1, 1.0);
  simplex.coeffs[ns] = 0.0;
  simplex.sense = Sense::eq;
  simplex.rhs = 1.0;
  lp.constraints.push_back(std::move(simplex));
  return lp_solve(lp).optimum;
}

json alpha_pairs_to_json(const AlphaPairSet& set) {
  json arr = json::array();
  for (const auto& p : set) arr.push_back({{"action", p.action}, {"alpha_r", p.alpha_r}, {"alpha_c", p.alpha_c}});
  return json{{"alphas", std::move(arr)}};
}

AlphaPairSet alpha_pairs_from_json(const json& j, std::size_t num_states) {
  if (!j.is_object() || !j.contains("alphas") || !j["alphas"].is_array())
    throw SchemaError("$.alphas", "expected an array");
  AlphaPairSet out;
  const auto& arr = j["alphas"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = "$.alphas[" + std::to_string(i) + "]";
    const auto& e = arr[i];
    if (!e.is_object()) throw SchemaError(p, "expected an object");
    if (!e.contains("action") || !e["action"].is_number_integer()) throw SchemaError(p + ".action", "expected an integer");
    AlphaPair pair;
    pair.action = e["action"].get<int>();
    for (const char* key : {"alpha_r", "alpha_c"}) {
      if (!e.contains(key) || !e[key].is_array() || e[key].size() != num_states)
        throw SchemaError(p + "." + key, "expected " + std::to_string(num_states) + " numbers");
      std::vector<double> v;
      for (const auto& x : e[key]) {
        if (!x.is_number()) throw SchemaError(p + "." + key, "expected numbers");
        v.push_back(x.get<double>());
      }
      (std::string(key) == "alpha_r" ? pair.alpha_r : pair.alpha_c) = std::move(v);
    }
    out.push_back(std::move(pair));
  }
  if (out.empty()) throw SchemaError("$.alphas", "must not be empty");
  return out;
}

}  // namespace rcpomdp
