#include "rcpomdp/io.hpp"

#include <fstream>

namespace rcpomdp {

using nlohmann::json;

namespace {

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

std::vector<std::string> names(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path, "expected a nonempty array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (e.is_string()) out.push_back(e.get<std::string>());
    else if (e.is_number_integer()) out.push_back(std::to_string(e.get<long long>()));
    else throw SchemaError(path + "[" + std::to_string(i) + "]", "expected a string or integer id");
  }
  return out;
}

const json& array_of(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  if (j.size() != n)
    throw SchemaError(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  return j;
}

std::string idx(const std::string& p, std::size_t i) { return p + "[" + std::to_string(i) + "]"; }

}  // namespace

json model_to_json(const Model& m) {
  const auto ns = m.num_states(), na = m.num_actions(), no = m.num_observations();
  json t = json::array(), z = json::array(), r = json::array(), c = json::array();
  for (std::size_t s = 0; s < ns; ++s) {
    json ts = json::array(), rs = json::array(), cs = json::array();
    for (std::size_t a = 0; a < na; ++a) {
      std::vector<double> row(ns, 0.0);
      for (const auto& tr : m.transitions(static_cast<int>(s), static_cast<int>(a))) row[tr.next] = tr.prob;
      ts.push_back(row);
      rs.push_back(m.reward(static_cast<int>(s), static_cast<int>(a)));
      cs.push_back(m.cost(static_cast<int>(s), static_cast<int>(a)));
    }
    t.push_back(std::move(ts));
    r.push_back(std::move(rs));
    c.push_back(std::move(cs));
  }
  for (std::size_t sp = 0; sp < ns; ++sp) {
    json zs = json::array();
    for (std::size_t a = 0; a < na; ++a) {
      std::vector<double> row(no);
      for (std::size_t o = 0; o < no; ++o)
        row[o] = m.observation(static_cast<int>(sp), static_cast<int>(a), static_cast<int>(o));
      zs.push_back(row);
    }
    z.push_back(std::move(zs));
  }
  std::vector<double> b0(m.initial_belief().probs().begin(), m.initial_belief().probs().end());
  return json{{"states", m.state_names()},
              {"actions", m.action_names()},
              {"observations", m.observation_names()},
              {"T", std::move(t)},
              {"Z", std::move(z)},
              {"R", std::move(r)},
              {"C", std::move(c)},
              {"gamma", m.gamma()},
              {"b0", b0},
              {"c_hat", m.cost_budget()}};
}

Model model_from_json(const json& j) {
  const std::string root = "$";
  auto states = names(field(j, "states", root), root + ".states");
  auto actions = names(field(j, "actions", root), root + ".actions");
  auto observations = names(field(j, "observations", root), root + ".observations");
  const auto ns = states.size(), na = actions.size(), no = observations.size();

  ModelBuilder b(ns, na, no);
  b.state_names(states).action_names(actions).observation_names(observations);

  const auto& t = array_of(field(j, "T", root), ns, "$.T");
  for (std::size_t s = 0; s < ns; ++s) {
    const auto& ts = array_of(t[s], na, idx("$.T", s));
    for (std::size_t a = 0; a < na; ++a) {
      std::string p = idx(idx("$.T", s), a);
      const auto& row = array_of(ts[a], ns, p);
      for (std::size_t sp = 0; sp < ns; ++sp) {
        double v = number(row[sp], idx(p, sp));
        if (v < 0.0) throw SchemaError(idx(p, sp), "negative probability");
        b.add_transition(static_cast<int>(s), static_cast<int>(a), static_cast<int>(sp), v);
      }
    }
  }
  const auto& z = array_of(field(j, "Z", root), ns, "$.Z");
  for (std::size_t sp = 0; sp < ns; ++sp) {
    const auto& zs = array_of(z[sp], na, idx("$.Z", sp));
    for (std::size_t a = 0; a < na; ++a) {
      std::string p = idx(idx("$.Z", sp), a);
      const auto& row = array_of(zs[a], no, p);
      for (std::size_t o = 0; o < no; ++o)
        b.set_observation(static_cast<int>(sp), static_cast<int>(a), static_cast<int>(o), number(row[o], idx(p, o)));
    }
  }
  const auto& r = array_of(field(j, "R", root), ns, "$.R");
  const auto& c = array_of(field(j, "C", root), ns, "$.C");
  for (std::size_t s = 0; s < ns; ++s) {
    const auto& rs = array_of(r[s], na, idx("$.R", s));
    const auto& cs = array_of(c[s], na, idx("$.C", s));
    for (std::size_t a = 0; a < na; ++a) {
      b.set_reward(static_cast<int>(s), static_cast<int>(a), number(rs[a], idx(idx("$.R", s), a)));
      double cv = number(cs[a], idx(idx("$.C", s), a));
      if (cv < 0.0) throw SchemaError(idx(idx("$.C", s), a), "cost must be nonnegative");
      b.set_cost(static_cast<int>(s), static_cast<int>(a), cv);
    }
  }
  double gamma = number(field(j, "gamma", root), "$.gamma");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw SchemaError("$.gamma", "must lie in [0, 1)");
  double c_hat = number(field(j, "c_hat", root), "$.c_hat");
  if (!(c_hat >= 0.0)) throw SchemaError("$.c_hat", "must be nonnegative");
  const auto& b0j = array_of(field(j, "b0", root), ns, "$.b0");
  std::vector<double> b0(ns);
  for (std::size_t s = 0; s < ns; ++s) b0[s] = number(b0j[s], idx("$.b0", s));
  double mass = 0.0;
  for (double x : b0) {
    if (x < 0.0) throw SchemaError("$.b0", "negative probability");
    mass += x;
  }
  if (std::abs(mass - 1.0) > kStochasticTolerance) throw StochasticityError("$.b0 sums to " + std::to_string(mass));
  b.gamma(gamma).cost_budget(c_hat).initial_belief(std::move(b0));
  return std::move(b).build();
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

Model load_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

void save_model(const Model& m, const std::filesystem::path& path) { write_json_file(model_to_json(m), path); }

}  // namespace rcpomdp
