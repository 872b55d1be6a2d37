#include "dtvcn/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dtvcn/error.hpp"

namespace dtvcn {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::ConfigInvalid, path + ": " + why);
}

bool non_negative_integer(const json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

// Reads one section, rejecting keys it does not know.
class Section {
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) invalid(path_, "expected an object");
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) invalid(at(key), "unknown field");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      invalid(at(key), "wrong type");
    }
  }

  void get_count(const char* key, std::size_t& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (!non_negative_integer(*it))
      invalid(at(key), "expected a non-negative integer");
    out = it->get<std::size_t>();
  }

  void get_seed(const char* key, std::uint64_t& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (!non_negative_integer(*it))
      invalid(at(key), "expected a non-negative integer");
    out = it->get<std::uint64_t>();
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

GrowthModel model_at(const json& j, const std::string& path) {
  if (!j.is_string()) invalid(path, "expected a model name");
  try {
    return parse_growth_model(j.get<std::string>());
  } catch (const Error&) {
    invalid(path, "unknown model '" + j.get<std::string>() + "'");
  }
}

CapacityKind capacity_kind(const std::string& s, const std::string& path) {
  if (s == "degree") return CapacityKind::DegreeBased;
  if (s == "betweenness") return CapacityKind::BetweennessBased;
  invalid(path, "expected \"degree\" or \"betweenness\"");
}

}  // namespace

bool OutputConfig::wants(const std::string& name) const {
  return std::find(emit.begin(), emit.end(), name) != emit.end();
}

GrowthParams ExperimentConfig::growth_params(std::size_t node_count) const {
  GrowthParams p = growth;
  p.T = static_cast<TimeStep>(node_count) - static_cast<TimeStep>(growth.n0);
  return p;
}

std::size_t ExperimentConfig::power_law_k_min() const {
  return k_min ? k_min : growth.budget().add;
}

void ExperimentConfig::validate() const {
  if (growth.n0 < 2) invalid("growth.n0", "must be >= 2");
  if (nodes <= growth.n0) invalid("growth.nodes", "must exceed growth.n0");
  if (growth.M < 1) invalid("growth.M", "must be >= 1");
  if (!(growth.beta > 0.0 && growth.beta < 1.0)) invalid("growth.beta", "must lie in (0,1)");
  if (!(growth.gamma > 0.5 && growth.gamma < 1.0)) invalid("growth.gamma", "must lie in (0.5,1)");
  if (!(capacity.cap_beta >= 0.0)) invalid("capacity.beta", "must be >= 0");
  const auto& e = traffic.estimate_options;
  if (!(e.epsilon > 0.0)) invalid("traffic.epsilon", "must be > 0");
  if (e.rounds < 0) invalid("traffic.rounds", "must be >= 0");
  if (e.seeds < 1) invalid("traffic.seeds", "must be >= 1");
  if (e.steps.window < 100) invalid("traffic.window", "must be >= 100");
  for (double m : traffic.sweep)
    if (!(m >= 0.0)) invalid("traffic.sweep", "multiples must be >= 0");
  const auto& r = rate_control;
  if (!(r.price.c > 0.0)) invalid("rate_control.c", "must be > 0");
  if (!(r.price.C > 0.0)) invalid("rate_control.C", "must be > 0");
  if (!(r.price.omega > 0.0)) invalid("rate_control.omega", "must be > 0");
  if (!(r.ode.dt > 0.0)) invalid("rate_control.dt", "must be > 0");
  if (!(r.ode.tol > 0.0)) invalid("rate_control.tol", "must be > 0");
  if (!(r.ode.x0 > 0.0)) invalid("rate_control.x0", "must be > 0");
  if (users.path_cap < 1) invalid("users.path_cap", "must be >= 1");
  for (const auto& name : outputs.emit)
    if (std::find(kArtifactNames.begin(), kArtifactNames.end(), name) == kArtifactNames.end())
      invalid("outputs.emit", "unknown artifact '" + name + "'");
  for (std::size_t n : compare.nodes)
    if (n <= growth.n0) invalid("compare.nodes", "every size must exceed growth.n0");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  ExperimentConfig c;
  Section top(root, "");

  if (const json* j = top.child("growth")) {
    Section s(*j, "growth");
    s.get_count("n0", c.growth.n0);
    s.get_count("nodes", c.nodes);
    s.get_count("M", c.growth.M);
    s.get("beta", c.growth.beta);
    s.get("gamma", c.growth.gamma);
    s.get_seed("seed", c.growth.rng_seed);
    if (const json* m = s.child("model")) c.growth.model = model_at(*m, "growth.model");
    s.finish();
  }
  if (const json* j = top.child("metrics")) {
    Section s(*j, "metrics");
    s.get_count("k_min", c.k_min);
    s.finish();
  }
  if (const json* j = top.child("capacity")) {
    Section s(*j, "capacity");
    std::string kind = c.capacity.kind == CapacityKind::DegreeBased ? "degree" : "betweenness";
    s.get("kind", kind);
    c.capacity.kind = capacity_kind(kind, "capacity.kind");
    s.get("beta", c.capacity.cap_beta);
    s.finish();
  }
  if (const json* j = top.child("traffic")) {
    Section s(*j, "traffic");
    auto& e = c.traffic.estimate_options;
    s.get("estimate", c.traffic.estimate);
    s.get_seed("seed", c.traffic.seed);
    s.get("epsilon", e.epsilon);
    s.get("rounds", e.rounds);
    s.get("seeds", e.seeds);
    s.get("lambda_max", e.lambda_max);
    s.get_count("warmup", e.steps.warmup);
    s.get_count("window", e.steps.window);
    s.get("sweep", c.traffic.sweep);
    std::string tie = e.tie == TieBreak::PathCount ? "path_count" : "smallest_id";
    s.get("tie_break", tie);
    if (tie == "path_count")
      e.tie = TieBreak::PathCount;
    else if (tie == "smallest_id")
      e.tie = TieBreak::SmallestId;
    else
      invalid("traffic.tie_break", "expected \"path_count\" or \"smallest_id\"");
    s.finish();
  }
  if (const json* j = top.child("rate_control")) {
    Section s(*j, "rate_control");
    auto& r = c.rate_control;
    s.get("c", r.price.c);
    s.get("C", r.price.C);
    s.get("omega", r.price.omega);
    s.get("dt", r.ode.dt);
    s.get("tol", r.ode.tol);
    s.get_count("max_iters", r.ode.max_iters);
    s.get("x0", r.ode.x0);
    s.get_count("trace_every", r.ode.trace_every);
    s.finish();
  }
  if (const json* j = top.child("users")) {
    Section s(*j, "users");
    s.get_count("count", c.users.count);
    s.get_seed("seed", c.users.seed);
    s.get_count("path_cap", c.users.path_cap);
    s.finish();
  }
  if (const json* j = top.child("outputs")) {
    Section s(*j, "outputs");
    std::string dir = c.outputs.dir.string();
    s.get("dir", dir);
    c.outputs.dir = dir;
    s.get("emit", c.outputs.emit);
    s.finish();
  }
  if (const json* j = top.child("compare")) {
    Section s(*j, "compare");
    if (const json* m = s.child("models")) {
      if (!m->is_array()) invalid("compare.models", "expected an array");
      c.compare.models.clear();
      for (std::size_t i = 0; i < m->size(); ++i)
        c.compare.models.push_back(model_at((*m)[i], "compare.models[" + std::to_string(i) + "]"));
    }
    s.get("nodes", c.compare.nodes);
    s.finish();
  }
  top.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["growth"] = {{"n0", c.growth.n0},       {"nodes", c.nodes},
                 {"M", c.growth.M},         {"beta", c.growth.beta},
                 {"gamma", c.growth.gamma}, {"model", std::string(to_string(c.growth.model))},
                 {"seed", c.growth.rng_seed}};
  j["metrics"] = {{"k_min", c.k_min}};
  j["capacity"] = {
      {"kind", c.capacity.kind == CapacityKind::DegreeBased ? "degree" : "betweenness"},
      {"beta", c.capacity.cap_beta}};
  const auto& e = c.traffic.estimate_options;
  j["traffic"] = {{"estimate", c.traffic.estimate},
                  {"seed", c.traffic.seed},
                  {"epsilon", e.epsilon},
                  {"rounds", e.rounds},
                  {"seeds", e.seeds},
                  {"lambda_max", e.lambda_max},
                  {"warmup", e.steps.warmup},
                  {"window", e.steps.window},
                  {"sweep", c.traffic.sweep},
                  {"tie_break", e.tie == TieBreak::PathCount ? "path_count" : "smallest_id"}};
  const auto& r = c.rate_control;
  j["rate_control"] = {{"c", r.price.c},           {"C", r.price.C},
                       {"omega", r.price.omega},   {"dt", r.ode.dt},
                       {"tol", r.ode.tol},         {"max_iters", r.ode.max_iters},
                       {"x0", r.ode.x0},           {"trace_every", r.ode.trace_every}};
  j["users"] = {{"count", c.users.count}, {"seed", c.users.seed}, {"path_cap", c.users.path_cap}};
  j["outputs"] = {{"dir", c.outputs.dir.string()}, {"emit", c.outputs.emit}};
  std::vector<std::string> models;
  for (auto m : c.compare.models) models.emplace_back(to_string(m));
  j["compare"] = {{"models", models}, {"nodes", c.compare.nodes}};
  return j.dump(2) + "\n";
}

}  // namespace dtvcn
