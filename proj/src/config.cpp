// Copyright 2026 The qnetsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qnet/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "qnet/errors.hpp"

namespace qnet::cli {

using nlohmann::json;

namespace {

class Reader {
 public:
  void fail(const std::string& where, const std::string& what) {
    problems.push_back(where + ": " + what);
  }

  bool object(const json& j, const std::string& where) {
    if (j.is_object()) return true;
    fail(where, "expected an object");
    return false;
  }

  void only_keys(const json& j, const std::string& where,
                 std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : j.items()) {
      if (std::none_of(keys.begin(), keys.end(),
                       [&](const char* key) { return k == key; })) {
        fail(where, "unknown field '" + k + "'");
      }
    }
  }

  std::optional<double> number(const json& j, const std::string& key,
                               const std::string& where) {
    if (!j.contains(key)) {
      fail(where, "missing field '" + key + "'");
      return std::nullopt;
    }
    const auto& v = j.at(key);
    if (!v.is_number()) {
      fail(where + "." + key, "expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  // Absent or null maps to `fallback`.
  std::optional<double> nullable_number(const json& j, const std::string& key,
                                        const std::string& where,
                                        std::optional<double> fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) {
      fail(where + "." + key, "expected a number or null");
      return fallback;
    }
    return v.get<double>();
  }

  std::optional<std::int64_t> integer(const json& j, const std::string& key,
                                      const std::string& where, bool required,
                                      std::optional<std::int64_t> fallback) {
    if (!j.contains(key) || j.at(key).is_null()) {
      if (required) fail(where, "missing field '" + key + "'");
      return fallback;
    }
    const auto& v = j.at(key);
    if (!v.is_number_integer()) {
      fail(where + "." + key, "expected an integer");
      return fallback;
    }
    return v.get<std::int64_t>();
  }

  std::optional<std::string> string(const json& j, const std::string& key,
                                    const std::string& where) {
    if (!j.contains(key)) {
      fail(where, "missing field '" + key + "'");
      return std::nullopt;
    }
    const auto& v = j.at(key);
    if (!v.is_string()) {
      fail(where + "." + key, "expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::vector<std::string> problems;
};

std::string describe_position(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json nullable(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

netsim::Network ExperimentConfig::network() const {
  return netsim::Network(topology, commodities, params);
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("syntax error at " + describe_position(text, e.byte) +
                      ": " + e.what());
  }

  Reader r;
  ExperimentConfig cfg;
  if (!r.object(doc, "config")) throw ConfigError(r.problems);
  r.only_keys(doc, "config",
              {"schema", "seed", "horizon", "nodes", "edges", "commodities",
               "fidelity", "policy", "output"});

  if (doc.contains("schema") &&
      (!doc["schema"].is_string() || doc["schema"] != kConfigSchema)) {
    r.fail("schema", std::string("expected \"") + kConfigSchema + "\"");
  }

  if (!doc.contains("seed")) {
    r.fail("config", "missing field 'seed' (seeds are mandatory)");
  } else if (!doc["seed"].is_number_integer() ||
             (doc["seed"].is_number_integer() && !doc["seed"].is_number_unsigned() &&
              doc["seed"].get<std::int64_t>() < 0)) {
    r.fail("seed", "expected a nonnegative integer");
  } else {
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }

  if (auto h = r.integer(doc, "horizon", "config", true, std::nullopt)) {
    if (*h < 1) r.fail("horizon", "must be at least 1");
    cfg.horizon = *h;
  }

  // fidelity
  if (doc.contains("fidelity")) {
    const auto& f = doc["fidelity"];
    if (r.object(f, "fidelity")) {
      r.only_keys(f, "fidelity",
                  {"coherence_time", "cutoff_age", "f0", "min_service_fidelity"});
      auto t = r.nullable_number(f, "coherence_time", "fidelity",
                                 std::numeric_limits<double>::infinity());
      if (t && !(*t > 0.0)) r.fail("fidelity.coherence_time", "must be positive");
      cfg.params.fidelity.coherence_time = *t;
      if (f.contains("cutoff_age") && f["cutoff_age"].is_null()) {
        cfg.params.fidelity.cutoff_age = std::nullopt;
      } else {
        auto c = r.integer(f, "cutoff_age", "fidelity", false, 1);
        if (c && *c < 1) r.fail("fidelity.cutoff_age", "must be at least 1");
        cfg.params.fidelity.cutoff_age = c;
      }
      auto f0 = r.nullable_number(f, "f0", "fidelity", 1.0);
      if (!(*f0 >= 0.25 && *f0 <= 1.0)) r.fail("fidelity.f0", "outside [1/4, 1]");
      cfg.default_f0 = *f0;
      cfg.params.min_service_fidelity =
          r.nullable_number(f, "min_service_fidelity", "fidelity", std::nullopt);
      if (cfg.params.min_service_fidelity &&
          !(*cfg.params.min_service_fidelity >= 0.25 &&
            *cfg.params.min_service_fidelity <= 1.0)) {
        r.fail("fidelity.min_service_fidelity", "outside [1/4, 1]");
      }
    }
  }

  // policy
  if (doc.contains("policy")) {
    const auto& p = doc["policy"];
    if (r.object(p, "policy")) {
      r.only_keys(p, "policy",
                  {"name", "fallback", "max_path_hops", "enumeration_budget"});
      if (p.contains("name")) {
        auto name = r.string(p, "name", "policy");
        if (name && *name != "random" && *name != "greedy" && *name != "maxweight") {
          r.fail("policy.name", "unknown policy '" + *name +
                                    "' (expected random, greedy or maxweight)");
        }
        if (name) cfg.policy.name = *name;
      }
      if (p.contains("fallback")) {
        if (!p["fallback"].is_boolean()) {
          r.fail("policy.fallback", "expected a boolean");
        } else {
          cfg.policy.fallback = p["fallback"].get<bool>();
        }
      }
      auto hops = r.integer(p, "max_path_hops", "policy", false, 6);
      if (hops && *hops < 1) r.fail("policy.max_path_hops", "must be at least 1");
      cfg.params.max_path_hops = static_cast<std::size_t>(std::max<std::int64_t>(*hops, 1));
      auto budget = r.integer(p, "enumeration_budget", "policy", false, 200000);
      if (budget && *budget < 1) {
        r.fail("policy.enumeration_budget", "must be at least 1");
      }
      cfg.params.enumeration_budget =
          static_cast<std::size_t>(std::max<std::int64_t>(*budget, 1));
    }
  }

  // output
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    if (r.object(o, "output")) {
      r.only_keys(o, "output", {"metrics_csv", "summary_json"});
      for (auto [key, slot] : {std::pair{"metrics_csv", &cfg.output.metrics_csv},
                               std::pair{"summary_json", &cfg.output.summary_json}}) {
        if (!o.contains(key) || o[key].is_null()) continue;
        if (!o[key].is_string()) {
          r.fail(std::string("output.") + key, "expected a string or null");
        } else {
          *slot = o[key].get<std::string>();
        }
      }
    }
  }

  // nodes
  std::vector<netsim::Node> nodes;
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    r.fail("config", "missing array 'nodes'");
  } else {
    std::set<std::string> names;
    for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
      const auto& n = doc["nodes"][i];
      const std::string where = "nodes[" + std::to_string(i) + "]";
      if (!r.object(n, where)) continue;
      r.only_keys(n, where, {"name", "role", "memory"});
      netsim::Node node;
      if (auto name = r.string(n, "name", where)) {
        node.name = *name;
        if (!names.insert(*name).second) r.fail(where, "duplicate node '" + *name + "'");
      }
      if (n.contains("role")) {
        auto role = r.string(n, "role", where);
        if (role == "client") {
          node.role = netsim::NodeRole::Client;
        } else if (role == "switch") {
          node.role = netsim::NodeRole::Switch;
        } else if (role) {
          r.fail(where + ".role", "expected \"client\" or \"switch\"");
        }
      }
      node.memory_capacity = r.integer(n, "memory", where, false, std::nullopt);
      if (node.memory_capacity && *node.memory_capacity < 1) {
        r.fail(where + ".memory", "must be at least 1 or null");
      }
      nodes.push_back(std::move(node));
    }
  }
  auto lookup = [&](const std::string& name) -> std::optional<netsim::NodeId> {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].name == name) return i;
    }
    return std::nullopt;
  };

  // edges
  std::vector<netsim::Edge> edges;
  if (!doc.contains("edges") || !doc["edges"].is_array()) {
    r.fail("config", "missing array 'edges'");
  } else {
    for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
      const auto& e = doc["edges"][i];
      std::string where = "edges[" + std::to_string(i) + "]";
      if (!r.object(e, where)) continue;
      r.only_keys(e, where, {"u", "v", "p_gen", "f0"});
      auto u = r.string(e, "u", where);
      auto v = r.string(e, "v", where);
      if (u && v) where += " (" + *u + "-" + *v + ")";
      netsim::Edge edge;
      bool ok = true;
      for (const auto& [end, slot] : {std::pair{u, &edge.u}, std::pair{v, &edge.v}}) {
        if (!end) {
          ok = false;
          continue;
        }
        if (auto id = lookup(*end)) {
          *slot = *id;
        } else {
          r.fail(where, "unknown node '" + *end + "'");
          ok = false;
        }
      }
      if (auto p = r.number(e, "p_gen", where)) {
        edge.p_gen = *p;
        if (!(*p >= 0.0 && *p <= 1.0)) {
          r.fail(where, "p_gen " + json(*p).dump() + " outside [0, 1]");
        }
      }
      edge.f0 = *r.nullable_number(e, "f0", where, cfg.default_f0);
      if (!(edge.f0 >= 0.25 && edge.f0 <= 1.0)) {
        r.fail(where, "f0 " + json(edge.f0).dump() + " outside [1/4, 1]");
      }
      if (ok) edges.push_back(edge);
    }
  }

  // commodities
  if (!doc.contains("commodities") || !doc["commodities"].is_array()) {
    r.fail("config", "missing array 'commodities'");
  } else {
    std::set<std::int64_t> ids;
    for (std::size_t i = 0; i < doc["commodities"].size(); ++i) {
      const auto& c = doc["commodities"][i];
      const std::string where = "commodities[" + std::to_string(i) + "]";
      if (!r.object(c, where)) continue;
      r.only_keys(c, where, {"id", "src", "dst", "rate"});
      netsim::Commodity com;
      bool ok = true;
      if (auto id = r.integer(c, "id", where, true, std::nullopt)) {
        com.id = static_cast<int>(*id);
        if (!ids.insert(*id).second) r.fail(where, "duplicate commodity id");
      } else {
        ok = false;
      }
      for (const auto& [key, slot] : {std::pair{"src", &com.src}, std::pair{"dst", &com.dst}}) {
        auto name = r.string(c, key, where);
        if (!name) {
          ok = false;
          continue;
        }
        auto id = lookup(*name);
        if (!id) {
          r.fail(where + "." + key, "unknown node '" + *name + "'");
          ok = false;
        } else {
          *slot = *id;
          if (nodes[*id].role != netsim::NodeRole::Client) {
            r.fail(where + "." + key, "node '" + *name + "' is not a client");
          }
        }
      }
      if (ok && com.src == com.dst) r.fail(where, "src equals dst");
      if (auto rate = r.number(c, "rate", where)) {
        com.rate = *rate;
        if (!(*rate >= 0.0 && *rate <= 1.0)) {
          r.fail(where + ".rate", json(*rate).dump() + " outside [0, 1]");
        }
      }
      if (ok) cfg.commodities.push_back(com);
    }
  }
  std::sort(cfg.commodities.begin(), cfg.commodities.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  if (!r.problems.empty()) throw ConfigError(std::move(r.problems));
  // Structural checks shared with the library types.
  cfg.topology = netsim::Topology(std::move(nodes), std::move(edges));
  (void)cfg.network();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json emit_config(const ExperimentConfig& config) {
  json doc;
  doc["schema"] = kConfigSchema;
  doc["seed"] = config.seed;
  doc["horizon"] = config.horizon;
  const auto& topo = config.topology;
  doc["nodes"] = json::array();
  for (const auto& n : topo.nodes()) {
    doc["nodes"].push_back(
        {{"name", n.name},
         {"role", n.role == netsim::NodeRole::Client ? "client" : "switch"},
         {"memory", n.memory_capacity ? json(*n.memory_capacity) : json(nullptr)}});
  }
  doc["edges"] = json::array();
  for (const auto& e : topo.edges()) {
    doc["edges"].push_back({{"u", topo.nodes()[e.u].name},
                            {"v", topo.nodes()[e.v].name},
                            {"p_gen", e.p_gen},
                            {"f0", e.f0}});
  }
  doc["commodities"] = json::array();
  for (const auto& c : config.commodities) {
    doc["commodities"].push_back({{"id", c.id},
                                  {"src", topo.nodes()[c.src].name},
                                  {"dst", topo.nodes()[c.dst].name},
                                  {"rate", c.rate}});
  }
  const auto& f = config.params.fidelity;
  doc["fidelity"] = {
      {"coherence_time",
       std::isinf(f.coherence_time) ? json(nullptr) : json(f.coherence_time)},
      {"cutoff_age", f.cutoff_age ? json(*f.cutoff_age) : json(nullptr)},
      {"f0", config.default_f0},
      {"min_service_fidelity", nullable(config.params.min_service_fidelity)}};
  doc["policy"] = {{"name", config.policy.name},
                   {"fallback", config.policy.fallback},
                   {"max_path_hops", config.params.max_path_hops},
                   {"enumeration_budget", config.params.enumeration_budget}};
  auto opt_string = [](const std::optional<std::string>& s) {
    return s ? json(*s) : json(nullptr);
  };
  doc["output"] = {{"metrics_csv", opt_string(config.output.metrics_csv)},
                   {"summary_json", opt_string(config.output.summary_json)}};
  return doc;
}

}  // namespace qnet::cli
