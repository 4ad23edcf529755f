#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace bdk {

using json = nlohmann::ordered_json;

enum class Verdict { Holds, Fails, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

// Fails dominates Unknown dominates Holds.
inline Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::Fails || b == Verdict::Fails) return Verdict::Fails;
  if (a == Verdict::Unknown || b == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::Holds;
}

struct PropertyResult {
  std::string property;
  Verdict verdict = Verdict::Unknown;
  json witness = json::object();
  bool required = true;  // informational results do not affect the overall verdict
};

struct Report {
  std::vector<PropertyResult> results;
  std::vector<std::string> findings;

  void add(std::string property, Verdict v, json witness = json::object(), bool required = true) {
    results.push_back({std::move(property), v, std::move(witness), required});
  }

  const PropertyResult* find(const std::string& property) const {
    for (const auto& r : results)
      if (r.property == property) return &r;
    return nullptr;
  }

  Verdict verdict(const std::string& property) const {
    const PropertyResult* r = find(property);
    return r ? r->verdict : Verdict::Unknown;
  }

  Verdict overall() const {
    Verdict v = Verdict::Holds;
    for (const auto& r : results)
      if (r.required) v = worst(v, r.verdict);
    return v;
  }

  void merge(const Report& o) {
    results.insert(results.end(), o.results.begin(), o.results.end());
    findings.insert(findings.end(), o.findings.begin(), o.findings.end());
  }

  json to_json() const {
    json out;
    out["verdict"] = to_string(overall());
    out["results"] = json::array();
    for (const auto& r : results)
      out["results"].push_back({{"property", r.property}, {"verdict", to_string(r.verdict)}, {"witness", r.witness}, {"required", r.required}});
    out["findings"] = findings;
    return out;
  }
};

}  // namespace bdk
