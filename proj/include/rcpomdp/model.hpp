#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcpomdp {

class ZeroProbabilityObservation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StochasticityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kStochasticTolerance = 1e-9;
inline constexpr double kObservationEpsilon = 1e-12;

/// Probability vector over states.
class Belief {
 public:
  Belief() = default;
  /// Throws InvalidModel unless entries are >= 0 and sum to 1 within 1e-9.
  explicit Belief(std::vector<double> p);

  static Belief point_mass(std::size_t num_states, std::size_t state);
  static Belief uniform(std::size_t num_states);
  /// Normalizes a nonnegative vector; throws ZeroProbabilityObservation if
  /// the mass is <= 1e-12.
  static Belief normalized(std::vector<double> unnormalized);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t s) const { return p_[s]; }
  std::span<const double> probs() const { return p_; }
  double l1_distance(const Belief& other) const;

  bool operator==(const Belief&) const = default;

 private:
  std::vector<double> p_;
};

struct Transition {
  int next;
  double prob;
};

/// One (action, observation) step of a history.
struct Step {
  int action;
  int observation;
};
using History = std::vector<Step>;

class ModelBuilder;

/// Finite (R)C-POMDP with a scalar cost. Immutable once built.
///
/// Transitions are stored sparsely per (s, a); observations, rewards and costs
/// densely. Z is indexed by the successor state: Z(s', a, o).
class Model {
 public:
  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_observations() const { return num_observations_; }

  std::span<const Transition> transitions(int s, int a) const;
  double transition(int s, int a, int next) const;
  double observation(int next, int a, int o) const {
    return z_[(static_cast<std::size_t>(next) * num_actions_ + a) * num_observations_ + o];
  }
  double reward(int s, int a) const { return r_[static_cast<std::size_t>(s) * num_actions_ + a]; }
  double cost(int s, int a) const { return c_[static_cast<std::size_t>(s) * num_actions_ + a]; }
  double gamma() const { return gamma_; }
  double cost_budget() const { return c_hat_; }
  const Belief& initial_belief() const { return b0_; }

  /// Absorbing, reward-free and cost-free under every action.
  bool is_terminal(int s) const { return terminal_[s] != 0; }

  const std::vector<std::string>& state_names() const { return state_names_; }
  const std::vector<std::string>& action_names() const { return action_names_; }
  const std::vector<std::string>& observation_names() const { return observation_names_; }

  double max_reward() const;
  double min_reward() const;
  double max_cost() const;

  /// Same dynamics with a different start belief and budget.
  Model with_start(Belief b0, double c_hat) const;

 private:
  friend class ModelBuilder;
  Model() = default;
  void finalize();

  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::size_t num_observations_ = 0;
  std::vector<std::size_t> row_begin_;  // size S*A + 1, into trans_
  std::vector<Transition> trans_;
  std::vector<double> z_;
  std::vector<double> r_;
  std::vector<double> c_;
  std::vector<char> terminal_;
  double gamma_ = 0.95;
  double c_hat_ = 0.0;
  Belief b0_;
  std::vector<std::string> state_names_;
  std::vector<std::string> action_names_;
  std::vector<std::string> observation_names_;
};

class ModelBuilder {
 public:
  ModelBuilder(std::size_t num_states, std::size_t num_actions, std::size_t num_observations);

  ModelBuilder& state_names(std::vector<std::string> names);
  ModelBuilder& action_names(std::vector<std::string> names);
  ModelBuilder& observation_names(std::vector<std::string> names);
  /// Accumulates: repeated calls for the same triple add up.
  ModelBuilder& add_transition(int s, int a, int next, double p);
  ModelBuilder& set_observation(int next, int a, int o, double p);
  ModelBuilder& set_reward(int s, int a, double r);
  ModelBuilder& set_cost(int s, int a, double c);
  ModelBuilder& gamma(double g);
  ModelBuilder& cost_budget(double c_hat);
  ModelBuilder& initial_belief(std::vector<double> b0);

  /// Validates every invariant; throws StochasticityError for rows that do
  /// not sum to one and InvalidModel for everything else.
  Model build() &&;

 private:
  std::size_t ns_, na_, no_;
  std::vector<std::vector<Transition>> rows_;
  std::vector<double> z_, r_, c_;
  std::vector<double> b0_;
  double gamma_ = 0.95;
  double c_hat_ = 0.0;
  std::vector<std::string> sn_, an_, on_;
};

// ---------------------------------------------------------------------------
// Belief arithmetic

/// Σ_s b(s) T(s,a,·), sparse (state, mass) pairs in ascending state order.
std::vector<Transition> predict(const Model& m, const Belief& b, int a);

double observation_prob(const Model& m, const Belief& b, int a, int o);

/// Bayes filter. Throws ZeroProbabilityObservation if P(o | b, a) <= 1e-12.
Belief belief_update(const Model& m, const Belief& b, int a, int o);

/// Successor belief for every observation of (b, a). Entries with
/// probability <= 1e-12 carry an empty belief.
struct Successor {
  double prob = 0.0;
  Belief belief;
};
std::vector<Successor> successors(const Model& m, const Belief& b, int a);

double expected_reward(const Model& m, const Belief& b, int a);
double expected_cost(const Model& m, const Belief& b, int a);

/// W(h): discounted expected cost accumulated along the beliefs of h.
double cumulative_cost(const Model& m, const Belief& b0, const History& h);

/// d' = (d - step_cost) / gamma.
inline double d_update(double d, double step_cost, double gamma) { return (d - step_cost) / gamma; }

}  // namespace rcpomdp
