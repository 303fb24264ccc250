#include "rcpomdp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rcpomdp/arcs.hpp"
#include "rcpomdp/baseline.hpp"
#include "rcpomdp/envs.hpp"
#include "rcpomdp/io.hpp"
#include "rcpomdp/lp.hpp"
#include "rcpomdp/parallel.hpp"
#include "rcpomdp/policy_io.hpp"
#include "rcpomdp/sim.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#ifndef RCPOMDP_VERSION
#define RCPOMDP_VERSION "dev"
#endif

namespace rcpomdp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string command;
  std::string env;
  std::string model_path;
  std::vector<std::string> params;
  std::string solver = "arcs";
  std::vector<std::string> solvers;
  std::string k = "inf";
  double epsilon = 0.01;
  double budget = 300.0;
  double per_step_budget = -1.0;  // defaults to budget
  long long max_iterations = -1;
  long long max_nodes = -1;
  long long trials = -1;  // 1000, or 100 for cgcp-cl
  int horizon = 20;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  std::string policy_path;
  std::string out_dir = ".";
  std::string policy_out, report_out, runs_out, aggregate_out, trajectory_out, table_out, model_out, manifest_out;
  bool trajectory = false;
  std::string format = "md";
};

const std::vector<std::string> kSolvers{"arcs", "cgcp", "cgcp-cl", "mincost"};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string output_path(const Config& c, const std::string& explicit_path, const std::string& name) {
  if (!explicit_path.empty()) return explicit_path;
  return (fs::path(c.out_dir) / name).string();
}

void ensure_parent(const std::string& path) {
  auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

void write_text(const std::string& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

void write_json(const std::string& path, const json& j) {
  ensure_parent(path);
  write_json_file(j, path);
}

Horizon parse_k(const std::string& k) {
  if (k == "inf") return kInfinity;
  try {
    std::size_t used = 0;
    long long v = std::stoll(k, &used);
    if (used == k.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("--k expects a nonnegative integer or 'inf', got '" + k + "'");
}

Model build_model(const Config& c) {
  if (c.env.empty() == c.model_path.empty()) throw UsageError("exactly one of --env and --model is required");
  if (!c.model_path.empty()) {
    if (!c.params.empty()) throw UsageError("--param only applies to --env");
    return load_model(c.model_path);
  }
  EnvSpec spec{c.env, {}};
  for (const auto& p : c.params) {
    auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + p + "'");
    spec.params[p.substr(0, eq)] = p.substr(eq + 1);
  }
  try {
    return make_env(spec);
  } catch (const InvalidParams& e) {
    throw UsageError(e.what());
  }
}

ArcsOptions arcs_options(const Config& c) {
  ArcsOptions o;
  o.k_target = parse_k(c.k);
  o.epsilon = c.epsilon;
  o.time_budget = c.budget;
  o.seed = c.seed;
  if (c.max_iterations >= 0) o.max_iterations = c.max_iterations;
  if (c.max_nodes > 0) o.max_nodes = static_cast<std::size_t>(c.max_nodes);
  return o;
}

CgcpOptions cgcp_options(double budget) {
  CgcpOptions o;
  o.time_budget = budget;
  o.subproblem_budget = std::min(o.subproblem_budget, budget);
  return o;
}

struct Solved {
  std::unique_ptr<Policy> policy;
  json report;
};

Solved solve(const Model& m, const std::string& solver, const Config& c) {
  const auto t0 = Clock::now();
  Solved s;
  json& r = s.report;
  r["solver"] = solver;
  if (solver == "arcs") {
    auto res = solve_arcs(m, arcs_options(c));
    const auto& root = res.tree.root();
    r["certified_k"] = horizon_to_json(res.certified_k);
    r["v_r_lo"] = root.v_r_lo;
    r["v_r_hi"] = root.v_r_hi;
    r["v_c_lo"] = root.v_c_lo;
    r["v_c_hi"] = root.v_c_hi;
    r["root_action"] = m.action_names()[root.action];
    r["iterations"] = res.iterations;
    r["nodes"] = res.tree.size();
    r["converged"] = res.converged;
    r["c_max"] = res.tree.c_max();
    s.policy = std::make_unique<TreePolicy>(std::make_shared<const PolicyTree>(std::move(res.tree)));
  } else if (solver == "cgcp") {
    auto res = solve_cgcp(m, cgcp_options(c.budget));
    r["value_r"] = res.policy.value_r();
    r["value_c"] = res.policy.value_c();
    r["columns"] = res.policy.columns.size();
    r["weights"] = res.policy.weights;
    r["iterations"] = res.iterations;
    r["lambda"] = res.lambdas.empty() ? 0.0 : res.lambdas.back();
    r["feasible"] = res.feasible;
    s.policy = std::make_unique<MixedExecutor>(std::make_shared<const MixedPolicy>(std::move(res.policy)));
  } else if (solver == "cgcp-cl") {
    const double per_step = c.per_step_budget > 0.0 ? c.per_step_budget : c.budget;
    auto gamma = std::make_shared<const AlphaPairSet>(solve_min_cost_policy(m, std::min(per_step, c.budget)));
    r["per_step_budget"] = per_step;
    r["min_cost_alphas"] = gamma->size();
    s.policy = std::make_unique<ClosedLoopPolicy>(std::make_shared<const Model>(m), cgcp_options(per_step), gamma);
  } else if (solver == "mincost") {
    auto gamma = std::make_shared<const AlphaPairSet>(solve_min_cost_policy(m, c.budget));
    const auto& best = (*gamma)[best_pair(*gamma, m.initial_belief(), kMinCost)];
    r["value_r"] = dot(best.alpha_r, m.initial_belief());
    r["value_c"] = dot(best.alpha_c, m.initial_belief());
    r["alphas"] = gamma->size();
    s.policy = make_min_cost_policy(gamma);
  } else {
    throw UsageError("unknown solver '" + solver + "'");
  }
  r["wall_seconds"] = seconds_since(t0);
  return s;
}

EvalOptions eval_options(const Config& c, const std::string& solver) {
  EvalOptions o;
  o.trials = c.trials > 0 ? c.trials : (solver == "cgcp-cl" ? 100 : 1000);
  o.horizon = c.horizon;
  o.seed = c.seed;
  o.record_trajectories = c.trajectory;
  return o;
}

bool is_closed_loop(const Policy& p) { return dynamic_cast<const ClosedLoopPolicy*>(&p) != nullptr; }

int run_solve(const Config& c, const Model& m, std::ostream& out, json& outputs) {
  auto s = solve(m, c.solver, c);
  const auto policy_path = output_path(c, c.policy_out, "policy.json");
  const auto report_path = output_path(c, c.report_out, "report.json");
  write_json(policy_path, s.policy->to_json());
  write_json(report_path, s.report);
  outputs["policy"] = policy_path;
  outputs["report"] = report_path;
  out << s.report.dump(2) << '\n';
  return kExitOk;
}

int run_eval(const Config& c, const Model& m, std::ostream& out, json& outputs) {
  std::unique_ptr<Policy> policy;
  json report;
  if (!c.policy_path.empty()) {
    policy = load_policy(c.policy_path, m);
  } else {
    auto s = solve(m, c.solver, c);
    policy = std::move(s.policy);
    report = std::move(s.report);
  }
  auto ev = evaluate(m, *policy, eval_options(c, is_closed_loop(*policy) ? "cgcp-cl" : c.solver));

  const auto runs_path = output_path(c, c.runs_out, "runs.csv");
  const auto agg_path = output_path(c, c.aggregate_out, "aggregate.json");
  std::ostringstream runs;
  write_runs_csv(runs, ev.runs);
  write_text(runs_path, runs.str());
  json agg = aggregate_to_json(ev.aggregate);
  agg["policy"] = c.policy_path.empty() ? c.solver : c.policy_path;
  if (!report.empty()) agg["solve"] = report;
  write_json(agg_path, agg);
  outputs["runs"] = runs_path;
  outputs["aggregate"] = agg_path;
  if (c.trajectory) {
    const auto traj_path = output_path(c, c.trajectory_out, "trajectory.csv");
    std::ostringstream traj;
    write_trajectory_csv(traj, ev.runs);
    write_text(traj_path, traj.str());
    outputs["trajectory"] = traj_path;
  }
  out << agg.dump(2) << '\n';
  return kExitOk;
}

std::string fmt(double x, int precision = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << x;
  return os.str();
}

int run_compare(const Config& c, const Model& m, std::ostream& out, json& outputs) {
  if (c.solvers.size() < 2) throw UsageError("compare needs at least two solvers in --solvers");
  for (const auto& s : c.solvers)
    if (std::find(kSolvers.begin(), kSolvers.end(), s) == kSolvers.end())
      throw UsageError("unknown solver '" + s + "'");
  const std::string env = c.env.empty() ? fs::path(c.model_path).stem().string() : c.env;

  struct Row {
    std::string solver;
    AggregateMetrics agg;
  };
  std::vector<Row> rows;
  json details = json::array();
  for (const auto& name : c.solvers) {
    auto s = solve(m, name, c);
    auto ev = evaluate(m, *s.policy, eval_options(c, name));
    rows.push_back({name, ev.aggregate});
    json d = aggregate_to_json(ev.aggregate);
    d["solver"] = name;
    d["solve"] = s.report;
    details.push_back(std::move(d));
  }

  std::ostringstream table;
  if (c.format == "csv") {
    table << "env,algorithm,violation_rate,reward,reward_sem,cost,cost_sem\n" << std::setprecision(17);
    for (const auto& r : rows)
      table << env << ',' << r.solver << ',' << r.agg.violation_rate << ',' << r.agg.mean_reward << ','
            << r.agg.sem_reward << ',' << r.agg.mean_cost << ',' << r.agg.sem_cost << '\n';
  } else {
    table << "| env | algorithm | violation rate | reward | cost |\n|---|---|---|---|---|\n";
    for (const auto& r : rows)
      table << "| " << env << " | " << r.solver << " | " << fmt(r.agg.violation_rate) << " | " << fmt(r.agg.mean_reward)
            << " ± " << fmt(r.agg.sem_reward) << " | " << fmt(r.agg.mean_cost) << " ± " << fmt(r.agg.sem_cost)
            << " |\n";
  }
  const auto table_path = output_path(c, c.table_out, "comparison." + c.format);
  const auto details_path = (fs::path(table_path).parent_path() / "comparison.json").string();
  write_text(table_path, table.str());
  write_json(details_path, details);
  outputs["table"] = table_path;
  outputs["details"] = details_path;
  out << table.str();
  return kExitOk;
}

int run_export(const Config& c, const Model& m, std::ostream& out, json& outputs) {
  const auto path = output_path(c, c.model_out, "model.json");
  ensure_parent(path);
  save_model(m, path);
  outputs["model"] = path;
  out << path << '\n';
  return kExitOk;
}

json config_to_json(const Config& c) {
  return json{{"command", c.command},
              {"env", c.env},
              {"model", c.model_path},
              {"params", c.params},
              {"solver", c.solver},
              {"solvers", c.solvers},
              {"k", c.k},
              {"epsilon", c.epsilon},
              {"budget", c.budget},
              {"per_step_budget", c.per_step_budget},
              {"max_iterations", c.max_iterations},
              {"max_nodes", c.max_nodes},
              {"trials", c.trials},
              {"horizon", c.horizon},
              {"seed", c.seed},
              {"threads", c.threads},
              {"policy", c.policy_path},
              {"out_dir", c.out_dir},
              {"trajectory", c.trajectory},
              {"format", c.format}};
}

template <class T>
bool env_override(const char* name, T& value, std::ostream& err) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return true;
  std::istringstream is(raw);
  T v{};
  if (!(is >> v) || !is.eof()) {
    err << "error: " << name << " must be a number, got '" << raw << "'\n";
    return false;
  }
  value = v;
  return true;
}

void add_model_options(CLI::App* sub, Config& c) {
  sub->add_option("--env", c.env, "Built-in environment")->check(CLI::IsMember(env_names()));
  sub->add_option("--model", c.model_path, "Model JSON file");
  sub->add_option("--param", c.params, "Environment parameter key=value (repeatable)");
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--out-dir", c.out_dir, "Directory for default output paths");
  sub->add_option("--manifest", c.manifest_out, "Manifest path");
  sub->add_option("--threads", c.threads, "OpenMP threads (0 keeps the runtime default)");
}

void add_solver_options(CLI::App* sub, Config& c) {
  sub->add_option("--k", c.k, "Target admissible horizon (integer or inf)");
  sub->add_option("--epsilon", c.epsilon, "Target gap at the root");
  sub->add_option("--budget", c.budget, "Offline solve budget in seconds");
  sub->add_option("--per-step-budget", c.per_step_budget, "Closed-loop budget per action in seconds");
  sub->add_option("--max-iterations", c.max_iterations, "ARCS iteration cap");
  sub->add_option("--max-nodes", c.max_nodes, "ARCS tree size cap");
}

void add_eval_options(CLI::App* sub, Config& c) {
  sub->add_option("--trials", c.trials, "Rollouts (default 1000, 100 for cgcp-cl)")->check(CLI::PositiveNumber);
  sub->add_option("--horizon", c.horizon, "Steps per rollout")->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  if (!env_override("RCPOMDP_BUDGET", c.budget, err) || !env_override("RCPOMDP_SEED", c.seed, err)) return kExitUsage;

  CLI::App app{"Solvers and evaluation for recursively constrained POMDPs", "rcpomdp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RCPOMDP_VERSION);

  auto* solve_cmd = app.add_subcommand("solve", "Solve and write a policy");
  add_model_options(solve_cmd, c);
  add_solver_options(solve_cmd, c);
  solve_cmd->add_option("--solver", c.solver, "Solver")->check(CLI::IsMember(kSolvers));
  solve_cmd->add_option("--policy-out", c.policy_out, "Policy JSON path");
  solve_cmd->add_option("--report", c.report_out, "Solve report path");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a policy by simulation");
  add_model_options(eval_cmd, c);
  add_solver_options(eval_cmd, c);
  add_eval_options(eval_cmd, c);
  auto* policy_opt = eval_cmd->add_option("--policy", c.policy_path, "Policy JSON file");
  eval_cmd->add_option("--solver", c.solver, "Solve first with this solver")
      ->check(CLI::IsMember(kSolvers))
      ->excludes(policy_opt);
  eval_cmd->add_option("--runs", c.runs_out, "Per-trial CSV path");
  eval_cmd->add_option("--aggregate", c.aggregate_out, "Aggregate JSON path");
  eval_cmd->add_flag("--trajectory", c.trajectory, "Record trajectories");
  eval_cmd->add_option("--trajectory-out", c.trajectory_out, "Trajectory CSV path");

  auto* cmp_cmd = app.add_subcommand("compare", "Solve and evaluate several solvers");
  add_model_options(cmp_cmd, c);
  add_solver_options(cmp_cmd, c);
  add_eval_options(cmp_cmd, c);
  cmp_cmd->add_option("--solvers", c.solvers, "Comma-separated solvers")->delimiter(',');
  cmp_cmd->add_option("--format", c.format, "Table format")->check(CLI::IsMember({"md", "csv"}));
  cmp_cmd->add_option("--table", c.table_out, "Table path");

  auto* exp_cmd = app.add_subcommand("export-model", "Write a model as JSON");
  add_model_options(exp_cmd, c);
  exp_cmd->add_option("--out", c.model_out, "Model JSON path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << RCPOMDP_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (eval_cmd->parsed() && c.policy_path.empty() && eval_cmd->count("--solver") == 0) {
    err << "error: eval needs --policy or --solver\n";
    return kExitUsage;
  }

#ifdef _OPENMP
  if (c.threads > 0) omp_set_num_threads(c.threads);
#endif

  const auto t0 = Clock::now();
  json outputs = json::object();
  int code = kExitOk;
  std::string error;
  try {
    Model m = build_model(c);
    if (c.command == "solve") code = run_solve(c, m, out, outputs);
    else if (c.command == "eval") code = run_eval(c, m, out, outputs);
    else if (c.command == "compare") code = run_compare(c, m, out, outputs);
    else code = run_export(c, m, out, outputs);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SchemaError& e) {
    error = std::string("schema error at ") + e.path() + ": " + e.what();
    code = kExitRuntime;
  } catch (const std::exception& e) {
    error = e.what();
    code = kExitRuntime;
  }
  if (!error.empty()) err << "error: " << error << '\n';

  json manifest{{"tool", "rcpomdp"},
                {"version", RCPOMDP_VERSION},
                {"args", args},
                {"config", config_to_json(c)},
                {"seed", c.seed},
                {"threads", max_threads()},
                {"compiler", __VERSION__},
                {"outputs", outputs},
                {"wall_seconds", seconds_since(t0)},
                {"exit_code", code}};
  if (!error.empty()) manifest["error"] = error;
  try {
    write_json(output_path(c, c.manifest_out, "manifest.json"), manifest);
  } catch (const std::exception& e) {
    err << "error: cannot write manifest: " << e.what() << '\n';
    return kExitRuntime;
  }
  return code;
}

}  // namespace rcpomdp
