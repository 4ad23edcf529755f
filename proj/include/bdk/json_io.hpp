#pragma once

#include "diagram.hpp"
#include "report.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bdk {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

}  // namespace detail

inline Diagram diagram_from_json(const json& doc) {
  using detail::field;
  if (!doc.is_object()) throw ParseError("document: expected an object");
  const json& kind = field(doc, "kind", "document");
  if (!kind.is_string() || kind.get<std::string>() != "bratteli") throw ParseError("kind: expected \"bratteli\"");
  const json& kj = field(doc, "k", "document");
  if (!kj.is_number_integer() || kj.get<long long>() < 1) throw ParseError("k: expected a positive integer");
  int k = kj.get<int>();
  const json& st = field(doc, "stationary", "document");
  if (!st.is_boolean()) throw ParseError("stationary: expected a boolean");
  const json& lv = field(doc, "levels", "document");
  if (!lv.is_array() || lv.empty()) throw ParseError("levels: expected a nonempty array");

  std::vector<Level> levels;
  std::map<std::string, std::size_t> prev_index{{"root", 0}};
  for (std::size_t n = 1; n <= lv.size(); ++n) {
    std::string where = "levels[" + std::to_string(n - 1) + "]";
    const json& lvl = lv[n - 1];
    const json& vs = field(lvl, "vertices", where);
    const json& es = field(lvl, "edges", where);
    if (!vs.is_array()) throw ParseError(where + ".vertices: expected an array");
    if (!es.is_array()) throw ParseError(where + ".edges: expected an array");
    Level L;
    std::map<std::string, std::size_t> index;
    for (std::size_t v = 0; v < vs.size(); ++v) {
      std::string vw = where + ".vertices[" + std::to_string(v) + "]";
      const json& id = field(vs[v], "id", vw);
      if (!id.is_string()) throw ParseError(vw + ".id: expected a string");
      const json& cls = field(vs[v], "class", vw);
      int c = 0;
      if (cls.is_string() && cls.get<std::string>() == "other") {
        c = 0;
      } else if (cls.is_object() && cls.contains("minimal") && cls["minimal"].is_number_integer()) {
        c = cls["minimal"].get<int>();
        if (c < 1 || c > k) throw ParseError(vw + ".class: minimal component out of range 1.." + std::to_string(k));
      } else {
        throw ParseError(vw + ".class: expected \"other\" or {\"minimal\": i}");
      }
      if (!index.emplace(id.get<std::string>(), v).second)
        throw ParseError(vw + ".id: duplicate vertex id " + id.get<std::string>());
      L.ids.push_back(id.get<std::string>());
      L.comp.push_back(c);
    }
    for (std::size_t e = 0; e < es.size(); ++e) {
      std::string ew = where + ".edges[" + std::to_string(e) + "]";
      const json& s = field(es[e], "source", ew);
      const json& r = field(es[e], "range", ew);
      if (!s.is_string() || !r.is_string()) throw ParseError(ew + ": source and range must be strings");
      auto si = prev_index.find(s.get<std::string>());
      if (si == prev_index.end()) throw ParseError(ew + ".source: dangling vertex id " + s.get<std::string>());
      auto ri = index.find(r.get<std::string>());
      if (ri == index.end()) throw ParseError(ew + ".range: dangling vertex id " + r.get<std::string>());
      L.edges.push_back({si->second, ri->second});
    }
    prev_index = index;
    levels.push_back(std::move(L));
  }
  try {
    return Diagram(k, st.get<bool>(), std::move(levels));
  } catch (const DiagramError& e) {
    throw ParseError(e.what());
  }
}

inline Diagram parse_diagram(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return diagram_from_json(doc);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Diagram load_diagram(const std::string& path) {
  try {
    return parse_diagram(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline json to_json(const Diagram& d) {
  json doc;
  doc["kind"] = "bratteli";
  doc["k"] = d.k();
  doc["stationary"] = d.stationary();
  doc["levels"] = json::array();
  for (std::size_t n = 1; n <= d.depth(); ++n) {
    const Level& L = d.level(n);
    json lv;
    lv["vertices"] = json::array();
    for (std::size_t v = 0; v < L.size(); ++v) {
      json cls = L.comp[v] == 0 ? json("other") : json{{"minimal", L.comp[v]}};
      lv["vertices"].push_back({{"id", L.ids[v]}, {"class", cls}});
    }
    lv["edges"] = json::array();
    for (const auto& e : L.edges) lv["edges"].push_back({{"source", d.name(n - 1, e.source)}, {"range", L.ids[e.range]}});
    doc["levels"].push_back(std::move(lv));
  }
  return doc;
}

// Integers small enough for int64 stay numbers; larger ones become strings.
inline json int_json(const Int& x) {
  if (x <= Int(std::numeric_limits<long long>::max()) && x >= Int(std::numeric_limits<long long>::min()))
    return static_cast<long long>(x);
  return x.str();
}

inline json to_json(const Vec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(int_json(x));
  return a;
}

inline json to_json(const Matrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_json(m(i, j)));
    a.push_back(row);
  }
  return a;
}

}  // namespace bdk
