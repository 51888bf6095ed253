#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "stablecut/core.hpp"

namespace stablecut {

using json = nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An instance together with the names it was written with.
struct InstanceFile {
  Instance instance;
  std::vector<std::string> names;
  std::vector<std::string> facility_names;  // k-median with separate facilities only
};

inline std::string problem_name(const Instance& inst) {
  return std::visit(
      [](const auto& i) -> std::string {
        using I = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<I, MultiwayCutInstance>) return "edge_mc";
        else if constexpr (std::is_same_v<I, NodeMultiwayCutInstance>) return "node_mc";
        else if constexpr (std::is_same_v<I, MisInstance>) return "mis";
        else if constexpr (std::is_same_v<I, VertexCoverInstance>) return "vertex_cover";
        else if constexpr (std::is_same_v<I, KCenterInstance>) return "kcenter";
        else if constexpr (std::is_same_v<I, KMedianInstance>) return "kmedian";
        else return "tsp";
      },
      inst);
}

inline std::vector<std::string> default_names(int n, const std::string& prefix = "v") {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline Rational rational_of(const json& j, const std::string& where) {
  if (!j.is_string()) throw IoError(where + ": rationals are written as \"p/q\" strings");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw IoError(where + ": " + e.what());
  }
}

inline int int_of(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw IoError(where + ": expected an integer");
  return j.get<int>();
}

class NameIndex {
 public:
  NameIndex(const std::vector<std::string>& names, const std::string& what) : what_(what) {
    for (int i = 0; i < static_cast<int>(names.size()); ++i)
      if (!index_.emplace(names[i], i).second) throw IoError("duplicate " + what + " name '" + names[i] + "'");
  }
  int operator()(const json& j) const {
    if (!j.is_string()) throw IoError(what_ + " references must be name strings");
    auto it = index_.find(j.get<std::string>());
    if (it == index_.end()) throw IoError("unknown " + what_ + " '" + j.get<std::string>() + "'");
    return it->second;
  }

 private:
  std::string what_;
  std::map<std::string, int> index_;
};

inline std::vector<std::string> names_of(const json& j, const char* key) {
  const json& arr = field(j, key);
  if (!arr.is_array()) throw IoError(std::string("'") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& x : arr) {
    if (!x.is_string()) throw IoError(std::string("'") + key + "' entries must be strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

inline std::vector<int> refs(const json& arr, const NameIndex& idx, const char* key) {
  if (!arr.is_array()) throw IoError(std::string("'") + key + "' must be an array");
  std::vector<int> out;
  for (const auto& x : arr) out.push_back(idx(x));
  return out;
}

inline std::vector<std::vector<Rational>> matrix_of(const json& j, std::size_t rows, std::size_t cols,
                                                    const char* key) {
  if (!j.is_array() || j.size() != rows) throw IoError(std::string("'") + key + "' must have one row per vertex");
  std::vector<std::vector<Rational>> out;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw IoError(std::string("'") + key + "' row size mismatch");
    std::vector<Rational> row;
    for (std::size_t c = 0; c < cols; ++c)
      row.push_back(rational_of(j[r][c], std::string(key) + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
    out.push_back(std::move(row));
  }
  return out;
}

inline VertexWeightedGraph vertex_graph(const json& j, const std::vector<std::string>& names, const NameIndex& idx) {
  const json& ws = field(j, "weights");
  if (!ws.is_array() || ws.size() != names.size()) throw IoError("'weights' must have one entry per vertex");
  std::vector<Rational> w;
  for (std::size_t i = 0; i < ws.size(); ++i) w.push_back(rational_of(ws[i], "weights[" + std::to_string(i) + "]"));
  std::vector<std::pair<int, int>> es;
  const json& ej = field(j, "edges");
  if (!ej.is_array()) throw IoError("'edges' must be an array");
  for (const auto& e : ej) {
    if (!e.is_array() || e.size() != 2) throw IoError("vertex-weighted edges are [u, v]");
    es.emplace_back(idx(e[0]), idx(e[1]));
  }
  return VertexWeightedGraph(static_cast<int>(names.size()), std::move(es), std::move(w));
}

inline json rationals(const std::vector<Rational>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(x.str());
  return a;
}

inline json vertex_graph_json(const VertexWeightedGraph& g, const std::vector<std::string>& names) {
  json j;
  j["weights"] = rationals(g.weights());
  json es = json::array();
  for (auto [u, v] : g.edges()) es.push_back({names[u], names[v]});
  j["edges"] = es;
  return j;
}

inline json matrix_json(const MetricInstance& m) {
  json rows = json::array();
  for (const auto& row : m.matrix()) rows.push_back(rationals(row));
  return rows;
}

}  // namespace detail

inline InstanceFile load_instance(const json& j) {
  using namespace detail;
  InstanceFile f;
  const json& pj = field(j, "problem");
  if (!pj.is_string()) throw IoError("'problem' must be a string");
  const std::string problem = pj.get<std::string>();
  f.names = names_of(j, "vertices");
  NameIndex idx(f.names, "vertex");
  const int n = static_cast<int>(f.names.size());
  try {
    if (problem == "edge_mc") {
      std::vector<Edge> es;
      const json& ej = field(j, "edges");
      if (!ej.is_array()) throw IoError("'edges' must be an array");
      for (std::size_t i = 0; i < ej.size(); ++i) {
        const json& e = ej[i];
        if (!e.is_array() || e.size() != 3) throw IoError("edge_mc edges are [u, v, \"w\"]");
        es.push_back({idx(e[0]), idx(e[1]), rational_of(e[2], "edges[" + std::to_string(i) + "]")});
      }
      f.instance = MultiwayCutInstance(EdgeWeightedGraph(n, std::move(es)), refs(field(j, "terminals"), idx, "terminals"));
    } else if (problem == "node_mc") {
      f.instance = NodeMultiwayCutInstance(vertex_graph(j, f.names, idx), refs(field(j, "terminals"), idx, "terminals"));
    } else if (problem == "mis") {
      f.instance = MisInstance{vertex_graph(j, f.names, idx)};
    } else if (problem == "vertex_cover") {
      f.instance = VertexCoverInstance{vertex_graph(j, f.names, idx)};
    } else if (problem == "kcenter" || problem == "kmedian" || problem == "tsp") {
      auto d = matrix_of(field(j, "metric"), n, n, "metric");
      const int k = problem == "tsp" ? 1 : int_of(field(j, "k"), "k");
      std::optional<SteinerFacilities> sf;
      if (j.contains("facilities")) {
        if (problem != "kmedian") throw IoError("'facilities' is only allowed for kmedian");
        f.facility_names = names_of(j, "facilities");
        NameIndex fidx(f.facility_names, "facility");
        sf = SteinerFacilities{static_cast<int>(f.facility_names.size()),
                               matrix_of(field(j, "facility_metric"), n, f.facility_names.size(), "facility_metric")};
      }
      MetricInstance m(std::move(d), k, std::move(sf));
      if (problem == "kcenter") f.instance = KCenterInstance{std::move(m)};
      else if (problem == "kmedian") f.instance = KMedianInstance{std::move(m)};
      else f.instance = TspInstance{std::move(m)};
    } else {
      throw IoError("unknown problem '" + problem + "'");
    }
  } catch (const InvalidInstance& e) {
    throw IoError(std::string("invalid instance: ") + e.what());
  }
  return f;
}

inline json save_instance(const InstanceFile& f) {
  using namespace detail;
  json j;
  j["problem"] = problem_name(f.instance);
  j["vertices"] = f.names;
  const auto& nm = f.names;
  std::visit(
      [&](const auto& i) {
        using I = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<I, MultiwayCutInstance>) {
          json es = json::array();
          for (const auto& e : i.graph.edges()) es.push_back({nm[e.u], nm[e.v], e.w.str()});
          j["edges"] = es;
          json ts = json::array();
          for (int t : i.terminals) ts.push_back(nm[t]);
          j["terminals"] = ts;
        } else if constexpr (std::is_same_v<I, NodeMultiwayCutInstance>) {
          j.update(vertex_graph_json(i.graph, nm));
          json ts = json::array();
          for (int t : i.terminals) ts.push_back(nm[t]);
          j["terminals"] = ts;
        } else if constexpr (std::is_same_v<I, MisInstance> || std::is_same_v<I, VertexCoverInstance>) {
          j.update(vertex_graph_json(i.graph, nm));
        } else {
          j["metric"] = matrix_json(i.metric);
          if constexpr (!std::is_same_v<I, TspInstance>) j["k"] = i.metric.k();
          if (i.metric.has_steiner()) {
            j["facilities"] = f.facility_names;
            json rows = json::array();
            for (const auto& row : i.metric.steiner()->cross) rows.push_back(rationals(row));
            j["facility_metric"] = rows;
          }
        }
      },
      f.instance);
  return j;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Parses text, reporting line, column and byte offset of malformed JSON.
inline json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character
    const std::size_t at = std::min(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + at, '\n');
    const auto nl = text.rfind('\n', at == 0 ? std::string::npos : at - 1);
    const std::size_t col = nl == std::string::npos || at == 0 ? at + 1 : at - nl;
    throw IoError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON at byte " +
                  std::to_string(e.byte) + ": " + e.what());
  }
}

namespace detail {

inline const std::vector<std::string>& center_names(const InstanceFile& f, const MetricInstance& m) {
  return m.has_steiner() ? f.facility_names : f.names;
}

inline const MetricInstance* metric_of(const Instance& inst) {
  if (auto* a = std::get_if<KCenterInstance>(&inst)) return &a->metric;
  if (auto* b = std::get_if<KMedianInstance>(&inst)) return &b->metric;
  if (auto* c = std::get_if<TspInstance>(&inst)) return &c->metric;
  return nullptr;
}

}  // namespace detail

inline json solution_to_json(const InstanceFile& f, const Solution& sol) {
  const auto& nm = f.names;
  json j;
  auto vertex_list = [&](const std::vector<int>& vs) {
    json a = json::array();
    for (int v : vs) a.push_back(nm[v]);
    return a;
  };
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, EdgeCut>) {
          const auto& g = std::get<MultiwayCutInstance>(f.instance).graph;
          json es = json::array();
          for (int e : s.edges) es.push_back({nm[g.edge(e).u], nm[g.edge(e).v]});
          j["cut"] = es;
        } else if constexpr (std::is_same_v<S, Clustering>) {
          const auto& cn = detail::center_names(f, *detail::metric_of(f.instance));
          json cs = json::array(), as = json::array();
          for (int c : s.centers) cs.push_back(cn[c]);
          for (int a : s.assign) as.push_back(cn[s.centers[a]]);
          j["centers"] = cs;
          j["assign"] = as;
        } else if constexpr (std::is_same_v<S, Tour>) {
          j["tour"] = vertex_list(s.order);
        } else {
          j["vertices"] = vertex_list(s.vertices);
        }
      },
      sol);
  return j;
}

inline Solution solution_from_json(const InstanceFile& f, const json& j) {
  using namespace detail;
  NameIndex idx(f.names, "vertex");
  return std::visit(
      [&](const auto& i) -> Solution {
        using I = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<I, MultiwayCutInstance>) {
          std::map<std::pair<int, int>, int> by_ends;
          for (int e = 0; e < i.graph.m(); ++e) by_ends[std::minmax(i.graph.edge(e).u, i.graph.edge(e).v)] = e;
          EdgeCut c;
          const json& cj = field(j, "cut");
          if (!cj.is_array()) throw IoError("'cut' must be an array");
          for (const auto& e : cj) {
            if (!e.is_array() || e.size() != 2) throw IoError("cut edges are [u, v]");
            auto it = by_ends.find(std::minmax(idx(e[0]), idx(e[1])));
            if (it == by_ends.end()) throw IoError("cut edge is not an edge of the instance");
            c.edges.push_back(it->second);
          }
          c.edges = sorted_unique(std::move(c.edges));
          return c;
        } else if constexpr (std::is_same_v<I, NodeMultiwayCutInstance>) {
          return NodeCut{sorted_unique(refs(field(j, "vertices"), idx, "vertices"))};
        } else if constexpr (std::is_same_v<I, MisInstance>) {
          return IndependentSet{sorted_unique(refs(field(j, "vertices"), idx, "vertices"))};
        } else if constexpr (std::is_same_v<I, VertexCoverInstance>) {
          return VertexCover{sorted_unique(refs(field(j, "vertices"), idx, "vertices"))};
        } else if constexpr (std::is_same_v<I, TspInstance>) {
          return Tour{refs(field(j, "tour"), idx, "tour")};
        } else {
          NameIndex cidx(center_names(f, i.metric), "center");
          Clustering c;
          c.centers = refs(field(j, "centers"), cidx, "centers");
          const auto assigned = refs(field(j, "assign"), cidx, "assign");
          for (int a : assigned) {
            auto it = std::find(c.centers.begin(), c.centers.end(), a);
            if (it == c.centers.end()) throw IoError("point assigned to a facility that is not a center");
            c.assign.push_back(static_cast<int>(it - c.centers.begin()));
          }
          return c;
        }
      },
      f.instance);
}

}  // namespace stablecut
