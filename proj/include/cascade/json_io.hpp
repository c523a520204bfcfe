#pragma once

#include <json.hpp>

#include <map>
#include <stdexcept>
#include <string>

#include "cascade/classical.hpp"
#include "cascade/lindblad.hpp"

// JSON encodings shared by the CLI and any file-based pipeline.
//
//   polynomial    [[j, k, re, im], ...]      canonical key order
//   real poly     [[i, j, c], ...]
//   system        { "form": "real",    "f": [...], "g": [...] }
//                 { "form": "complex", "h": [...] }
//                 { "name": "...", "params": { ... } }   catalog reference
//   lindblad      { "hamiltonian": [...],
//                   "dissipators": [ { "rate": r, "operator": [...] }, ... ] }

namespace cascade {

using nlohmann::json;

template <typename Mul>
json poly_to_json(const Polynomial<Mul>& p) {
  json out = json::array();
  for (const auto& [m, c] : p.terms())
    out.push_back({m.dag, m.ann, c.real(), c.imag()});
  return out;
}

inline json poly_to_json(const RealPoly& p) {
  json out = json::array();
  for (const auto& [m, c] : p.terms())
    out.push_back({m.first, m.second, c});
  return out;
}

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

template <class Poly>
Poly quad_entries(const json& arr, const std::string& what) {
  require(arr.is_array(), what + " must be an array of [j,k,re,im] entries");
  Poly p;
  for (const auto& entry : arr) {
    require(entry.is_array() && entry.size() == 4 && entry[0].is_number() &&
                entry[1].is_number(),
            what + " entries must be [j,k,re,im]");
    const int j = entry[0].get<int>(), k = entry[1].get<int>();
    require(j >= 0 && k >= 0, what + " exponents must be nonnegative");
    p += Poly::term(j, k, cplx{entry[2].get<double>(), entry[3].get<double>()});
  }
  return p;
}

}  // namespace detail

inline ClassicalPoly poly_from_json(const json& arr) {
  return detail::quad_entries<ClassicalPoly>(arr, "polynomial");
}

inline OpPoly op_poly_from_json(const json& arr) {
  return detail::quad_entries<OpPoly>(arr, "operator polynomial");
}

inline RealPoly real_poly_from_json(const json& arr) {
  detail::require(arr.is_array(), "real polynomial must be an array");
  RealPoly p;
  for (const auto& entry : arr) {
    detail::require(entry.is_array() && entry.size() == 3,
                    "real polynomial entries must be [i,j,c]");
    const int i = entry[0].get<int>(), j = entry[1].get<int>();
    detail::require(i >= 0 && j >= 0, "exponents must be nonnegative");
    p += RealPoly::term(i, j, entry[2].get<double>());
  }
  return p;
}

/// Resolve a system file to its complex drift h.  Accepts the real form, the
/// complex form, and catalog references by name with parameter overrides.
inline ClassicalPoly system_from_json(const json& doc) {
  detail::require(doc.is_object(), "system document must be a JSON object");
  if (doc.contains("name") && !doc.contains("form")) {
    std::map<std::string, double> overrides;
    if (doc.contains("params"))
      for (const auto& [key, value] : doc.at("params").items())
        overrides[key] = value.get<double>();
    return catalog(doc.at("name").get<std::string>(), overrides).h;
  }
  const std::string form = doc.value("form", "");
  if (form == "real") {
    RealSystem sys;
    sys.f = real_poly_from_json(doc.at("f"));
    sys.g = real_poly_from_json(doc.at("g"));
    return to_complex(sys);
  }
  if (form == "complex") return poly_from_json(doc.at("h"));
  throw std::invalid_argument("system form must be \"real\" or \"complex\"");
}

inline json system_to_json(const CatalogEntry& entry) {
  json doc;
  doc["form"] = "real";
  doc["name"] = entry.name;
  json params = json::object();
  for (const auto& [key, value] : entry.params) params[key] = value;
  doc["params"] = params;
  doc["f"] = poly_to_json(entry.real.f);
  doc["g"] = poly_to_json(entry.real.g);
  doc["h"] = poly_to_json(entry.h);
  return doc;
}

inline json lindblad_to_json(const Lindbladian& lb) {
  json doc;
  doc["hamiltonian"] = poly_to_json(lb.hamiltonian);
  doc["dissipators"] = json::array();
  for (const auto& d : lb.dissipators)
    doc["dissipators"].push_back(
        {{"rate", d.rate}, {"operator", poly_to_json(d.op)}});
  return doc;
}

inline Lindbladian lindblad_from_json(const json& doc) {
  detail::require(doc.is_object(), "lindblad document must be a JSON object");
  Lindbladian lb;
  if (doc.contains("hamiltonian"))
    lb.hamiltonian = op_poly_from_json(doc.at("hamiltonian"));
  if (doc.contains("dissipators")) {
    detail::require(doc.at("dissipators").is_array(),
                    "dissipators must be an array");
    for (const auto& entry : doc.at("dissipators")) {
      detail::require(entry.is_object() && entry.contains("rate") &&
                          entry.contains("operator"),
                      "each dissipator needs a rate and an operator");
      const double rate = entry.at("rate").get<double>();
      detail::require(rate >= 0.0, "dissipator rates must be nonnegative");
      lb.dissipators.push_back({rate, op_poly_from_json(entry.at("operator"))});
    }
  }
  return lb;
}

}  // namespace cascade
