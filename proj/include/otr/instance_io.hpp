#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "otr/instance.hpp"

namespace otr {

// On-disk instance schema: {"kind", "n", "edges" | "dist", "sites",
// "capacities", "requests", "seed"?}. Rationals travel as "p/q" strings.
inline nlohmann::json instance_to_json(const OnlineInstance& inst) {
  nlohmann::json j;
  j["kind"] = kind_name(inst.kind);
  j["n"] = inst.num_points();
  if (inst.on_tree()) {
    const WeightedTree& t = inst.tree();
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : t.edges())
      edges.push_back({e.u, e.v, rat_to_string(e.weight)});
    j["edges"] = edges;
    j["root"] = t.root();
  } else {
    const MetricSpace& m = inst.metric();
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.size(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int k = 0; k < m.size(); ++k) row.push_back(rat_to_string(m.dist(i, k)));
      rows.push_back(row);
    }
    j["dist"] = rows;
  }
  j["sites"] = inst.sites;
  j["capacities"] = inst.capacities;
  j["requests"] = inst.requests;
  if (inst.seed) j["seed"] = *inst.seed;
  return j;
}

inline OnlineInstance instance_from_json(const nlohmann::json& j) {
  OnlineInstance inst;
  inst.kind = kind_from_name(j.at("kind").get<std::string>());
  int n = j.at("n").get<int>();
  if (j.contains("edges")) {
    std::vector<TreeEdge> edges;
    for (const auto& e : j.at("edges"))
      edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(),
                       rat_from_string(e.at(2).get<std::string>())});
    int root = j.value("root", 0);
    inst.geometry = WeightedTree(n, edges, root);
  } else {
    const auto& rows = j.at("dist");
    std::vector<std::vector<Rat>> matrix(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        matrix[i][k] = rat_from_string(rows.at(i).at(k).get<std::string>());
    inst.geometry = MetricSpace(matrix);
  }
  inst.sites = j.at("sites").get<std::vector<int>>();
  inst.capacities = j.at("capacities").get<std::vector<int>>();
  inst.requests = j.at("requests").get<std::vector<int>>();
  if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();
  inst.validate();
  return inst;
}

inline std::string instance_to_string(const OnlineInstance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

inline OnlineInstance instance_from_string(const std::string& text) {
  return instance_from_json(nlohmann::json::parse(text));
}

inline void write_instance_file(const OnlineInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << instance_to_string(inst);
}

inline OnlineInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_string(ss.str());
}

// Stable content digest used to identify instances in reports.
inline std::string instance_digest(const OnlineInstance& inst) {
  std::string s = instance_to_json(inst).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace otr
