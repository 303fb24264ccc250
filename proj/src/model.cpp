#include "rcpomdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace rcpomdp {

namespace {

std::string where(const char* what, std::initializer_list<std::size_t> idx) {
  std::ostringstream os;
  os << what;
  for (auto i : idx) os << '[' << i << ']';
  return os.str();
}

}  // namespace

Belief::Belief(std::vector<double> p) : p_(std::move(p)) {
  double sum = 0.0;
  for (double x : p_) {
    if (!(x >= 0.0)) throw InvalidModel("belief has a negative or NaN entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance) throw InvalidModel("belief does not sum to 1");
}

Belief Belief::point_mass(std::size_t num_states, std::size_t state) {
  std::vector<double> p(num_states, 0.0);
  p.at(state) = 1.0;
  return Belief(std::move(p));
}

Belief Belief::uniform(std::size_t num_states) {
  return Belief(std::vector<double>(num_states, 1.0 / static_cast<double>(num_states)));
}

Belief Belief::normalized(std::vector<double> unnormalized) {
  double sum = std::accumulate(unnormalized.begin(), unnormalized.end(), 0.0);
  if (!(sum > kObservationEpsilon)) throw ZeroProbabilityObservation("belief mass is zero");
  for (double& x : unnormalized) x /= sum;
  Belief b;
  b.p_ = std::move(unnormalized);
  return b;
}

double Belief::l1_distance(const Belief& other) const {
  if (other.size() != size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) d += std::abs(p_[i] - other.p_[i]);
  return d;
}

// ---------------------------------------------------------------------------

std::span<const Transition> Model::transitions(int s, int a) const {
  std::size_t row = static_cast<std::size_t>(s) * num_actions_ + a;
  return {trans_.data() + row_begin_[row], row_begin_[row + 1] - row_begin_[row]};
}

double Model::transition(int s, int a, int next) const {
  for (const auto& t : transitions(s, a))
    if (t.next == next) return t.prob;
  return 0.0;
}

double Model::max_reward() const { return *std::max_element(r_.begin(), r_.end()); }
double Model::min_reward() const { return *std::min_element(r_.begin(), r_.end()); }
double Model::max_cost() const { return *std::max_element(c_.begin(), c_.end()); }

Model Model::with_start(Belief b0, double c_hat) const {
  if (b0.size() != num_states_) throw InvalidModel("start belief has wrong size");
  if (!(c_hat >= 0.0)) throw InvalidModel("c_hat must be nonnegative");
  Model m = *this;
  m.b0_ = std::move(b0);
  m.c_hat_ = c_hat;
  return m;
}

void Model::finalize() {
  terminal_.assign(num_states_, 0);
  for (std::size_t s = 0; s < num_states_; ++s) {
    bool term = true;
    for (std::size_t a = 0; a < num_actions_ && term; ++a) {
      int si = static_cast<int>(s), ai = static_cast<int>(a);
      term = transition(si, ai, si) == 1.0 && reward(si, ai) == 0.0 && cost(si, ai) == 0.0;
    }
    terminal_[s] = term ? 1 : 0;
  }
}

// ---------------------------------------------------------------------------

ModelBuilder::ModelBuilder(std::size_t num_states, std::size_t num_actions,
                           std::size_t num_observations)
    : ns_(num_states), na_(num_actions), no_(num_observations) {
  if (ns_ == 0 || na_ == 0 || no_ == 0) throw InvalidModel("model dimensions must be positive");
  rows_.resize(ns_ * na_);
  z_.assign(ns_ * na_ * no_, 0.0);
  r_.assign(ns_ * na_, 0.0);
  c_.assign(ns_ * na_, 0.0);
}

ModelBuilder& ModelBuilder::state_names(std::vector<std::string> names) {
  sn_ = std::move(names);
  return *this;
}
ModelBuilder& ModelBuilder::action_names(std::vector<std::string> names) {
  an_ = std::move(names);
  return *this;
}
ModelBuilder& ModelBuilder::observation_names(std::vector<std::string> names) {
  on_ = std::move(names);
  return *this;
}

ModelBuilder& ModelBuilder::add_transition(int s, int a, int next, double p) {
  if (s < 0 || a < 0 || next < 0 || static_cast<std::size_t>(s) >= ns_ ||
      static_cast<std::size_t>(a) >= na_ || static_cast<std::size_t>(next) >= ns_)
    throw InvalidModel(where("T", {std::size_t(s), std::size_t(a), std::size_t(next)}) +
                       " out of range");
  if (p == 0.0) return *this;
  auto& row = rows_[static_cast<std::size_t>(s) * na_ + a];
  for (auto& t : row) {
    if (t.next == next) {
      t.prob += p;
      return *this;
    }
  }
  row.push_back({next, p});
  return *this;
}

ModelBuilder& ModelBuilder::set_observation(int next, int a, int o, double p) {
  z_.at((static_cast<std::size_t>(next) * na_ + a) * no_ + o) = p;
  return *this;
}
ModelBuilder& ModelBuilder::set_reward(int s, int a, double r) {
  r_.at(static_cast<std::size_t>(s) * na_ + a) = r;
  return *this;
}
ModelBuilder& ModelBuilder::set_cost(int s, int a, double c) {
  c_.at(static_cast<std::size_t>(s) * na_ + a) = c;
  return *this;
}
ModelBuilder& ModelBuilder::gamma(double g) {
  gamma_ = g;
  return *this;
}
ModelBuilder& ModelBuilder::cost_budget(double c_hat) {
  c_hat_ = c_hat;
  return *this;
}
ModelBuilder& ModelBuilder::initial_belief(std::vector<double> b0) {
  b0_ = std::move(b0);
  return *this;
}

Model ModelBuilder::build() && {
  if (!(gamma_ >= 0.0 && gamma_ < 1.0)) throw InvalidModel("gamma must lie in [0, 1)");
  if (!(c_hat_ >= 0.0)) throw InvalidModel("c_hat must be nonnegative");
  if (b0_.size() != ns_) throw InvalidModel("b0 has wrong size");

  for (std::size_t s = 0; s < ns_; ++s) {
    for (std::size_t a = 0; a < na_; ++a) {
      double sum = 0.0;
      for (const auto& t : rows_[s * na_ + a]) {
        if (!(t.prob >= 0.0 && t.prob <= 1.0))
          throw StochasticityError(where("T", {s, a, std::size_t(t.next)}) + " outside [0,1]");
        sum += t.prob;
      }
      if (std::abs(sum - 1.0) > kStochasticTolerance)
        throw StochasticityError(where("T", {s, a}) + " sums to " + std::to_string(sum));
      if (!(c_[s * na_ + a] >= 0.0)) throw InvalidModel(where("C", {s, a}) + " is negative");
      if (!std::isfinite(r_[s * na_ + a])) throw InvalidModel(where("R", {s, a}) + " not finite");
    }
  }
  for (std::size_t sp = 0; sp < ns_; ++sp) {
    for (std::size_t a = 0; a < na_; ++a) {
      double sum = 0.0;
      for (std::size_t o = 0; o < no_; ++o) {
        double p = z_[(sp * na_ + a) * no_ + o];
        if (!(p >= 0.0 && p <= 1.0)) throw StochasticityError(where("Z", {sp, a, o}) + " outside [0,1]");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kStochasticTolerance)
        throw StochasticityError(where("Z", {sp, a}) + " sums to " + std::to_string(sum));
    }
  }

  Model m;
  m.num_states_ = ns_;
  m.num_actions_ = na_;
  m.num_observations_ = no_;
  m.row_begin_.reserve(ns_ * na_ + 1);
  m.row_begin_.push_back(0);
  for (auto& row : rows_) {
    std::sort(row.begin(), row.end(), [](const Transition& x, const Transition& y) { return x.next < y.next; });
    m.trans_.insert(m.trans_.end(), row.begin(), row.end());
    m.row_begin_.push_back(m.trans_.size());
  }
  m.z_ = std::move(z_);
  m.r_ = std::move(r_);
  m.c_ = std::move(c_);
  m.gamma_ = gamma_;
  m.c_hat_ = c_hat_;
  m.b0_ = Belief(std::move(b0_));

  auto fill_names = [](std::vector<std::string> names, std::size_t n, const char* prefix) {
    if (names.empty()) {
      for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
    }
    if (names.size() != n) throw InvalidModel(std::string(prefix) + " name count mismatch");
    return names;
  };
  m.state_names_ = fill_names(std::move(sn_), ns_, "s");
  m.action_names_ = fill_names(std::move(an_), na_, "a");
  m.observation_names_ = fill_names(std::move(on_), no_, "o");
  m.finalize();
  return m;
}

// ---------------------------------------------------------------------------

std::vector<Transition> predict(const Model& m, const Belief& b, int a) {
  std::vector<double> dense(m.num_states(), 0.0);
  std::vector<char> touched(m.num_states(), 0);
  std::vector<Transition> out;
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    double bs = b[s];
    if (bs == 0.0) continue;
    for (const auto& t : m.transitions(static_cast<int>(s), a)) {
      dense[t.next] += bs * t.prob;
      if (!touched[t.next]) {
        touched[t.next] = 1;
        out.push_back({t.next, 0.0});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Transition& x, const Transition& y) { return x.next < y.next; });
  for (auto& t : out) t.prob = dense[t.next];
  return out;
}

double observation_prob(const Model& m, const Belief& b, int a, int o) {
  double p = 0.0;
  for (const auto& t : predict(m, b, a)) p += m.observation(t.next, a, o) * t.prob;
  return p;
}

Belief belief_update(const Model& m, const Belief& b, int a, int o) {
  std::vector<double> next(m.num_states(), 0.0);
  double mass = 0.0;
  for (const auto& t : predict(m, b, a)) {
    double v = m.observation(t.next, a, o) * t.prob;
    next[t.next] = v;
    mass += v;
  }
  if (!(mass > kObservationEpsilon))
    throw ZeroProbabilityObservation("observation " + m.observation_names()[o] +
                                     " has zero probability after action " + m.action_names()[a]);
  return Belief::normalized(std::move(next));
}

std::vector<Successor> successors(const Model& m, const Belief& b, int a) {
  auto pred = predict(m, b, a);
  std::vector<Successor> out(m.num_observations());
  for (std::size_t o = 0; o < m.num_observations(); ++o) {
    double mass = 0.0;
    for (const auto& t : pred) mass += m.observation(t.next, a, static_cast<int>(o)) * t.prob;
    out[o].prob = mass;
    if (mass <= kObservationEpsilon) continue;
    std::vector<double> next(m.num_states(), 0.0);
    for (const auto& t : pred) next[t.next] = m.observation(t.next, a, static_cast<int>(o)) * t.prob;
    out[o].belief = Belief::normalized(std::move(next));
  }
  return out;
}

double expected_reward(const Model& m, const Belief& b, int a) {
  double v = 0.0;
  for (std::size_t s = 0; s < m.num_states(); ++s)
    if (b[s] != 0.0) v += b[s] * m.reward(static_cast<int>(s), a);
  return v;
}

double expected_cost(const Model& m, const Belief& b, int a) {
  double v = 0.0;
  for (std::size_t s = 0; s < m.num_states(); ++s)
    if (b[s] != 0.0) v += b[s] * m.cost(static_cast<int>(s), a);
  return v;
}

double cumulative_cost(const Model& m, const Belief& b0, const History& h) {
  Belief b = b0;
  double w = 0.0;
  double discount = 1.0;
  for (const auto& step : h) {
    w += discount * expected_cost(m, b, step.action);
    discount *= m.gamma();
    b = belief_update(m, b, step.action, step.observation);
  }
  return w;
}

}  // namespace rcpomdp
