#include "mono/mapdoc.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mono {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& msg) {
  fail("MapDocumentInvalid", msg);
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + " must be a number");
  return v.get<double>();
}

cpx pair_at(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2)
    bad(where + " must be a [re, im] pair");
  double re = number_at(v[0], where + "[0]");
  double im = number_at(v[1], where + "[1]");
  if (!std::isfinite(re) || !std::isfinite(im))
    bad(where + " must be finite");
  return cpx(re, im);
}

SpherePt point_at(const json& v, const std::string& where) {
  if (v.is_string()) {
    if (v.get<std::string>() != "inf")
      bad(where + ": the only accepted string is \"inf\"");
    return SpherePt::infinity();
  }
  return SpherePt(pair_at(v, where));
}

Poly poly_at(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty())
    bad(where + " must be a non-empty array of coefficient pairs");
  std::vector<cpx> c;
  c.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    c.push_back(pair_at(v[i], where + "[" + std::to_string(i) + "]"));
  return Poly(c);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok) bad("unknown key \"" + it.key() + "\" in " + where);
  }
}

Options options_at(const json& v) {
  if (!v.is_object()) bad("options must be an object");
  check_keys(v, {"root_residual", "cluster", "tracking", "clearance",
                 "seed", "orientation"}, "options");
  Options o;
  if (v.contains("root_residual")) {
    o.tol.root_residual = number_at(v["root_residual"], "options.root_residual");
    if (o.tol.root_residual <= 0) bad("options.root_residual must be positive");
  }
  if (v.contains("cluster")) {
    o.tol.cluster = number_at(v["cluster"], "options.cluster");
    if (o.tol.cluster <= 0) bad("options.cluster must be positive");
  }
  if (v.contains("tracking")) {
    o.tol.tracking = number_at(v["tracking"], "options.tracking");
    if (o.tol.tracking <= 0) bad("options.tracking must be positive");
  }
  if (v.contains("clearance")) {
    o.tol.clearance = number_at(v["clearance"], "options.clearance");
    if (o.tol.clearance <= 0) bad("options.clearance must be positive");
  }
  if (v.contains("seed")) {
    const json& s = v["seed"];
    if (!s.is_number_unsigned()) bad("options.seed must be a non-negative integer");
    o.seed = s.get<uint64_t>();
  }
  if (v.contains("orientation")) {
    const json& s = v["orientation"];
    if (!s.is_string()) bad("options.orientation must be \"ccw\" or \"cw\"");
    std::string t = s.get<std::string>();
    if (t == "ccw") o.orientation = Orientation::CCW;
    else if (t == "cw") o.orientation = Orientation::CW;
    else bad("options.orientation must be \"ccw\" or \"cw\"");
  }
  return o;
}

json pair_json(cpx z) {
  double re = z.real(), im = z.imag();
  if (re == 0.0) re = 0.0;  // flush -0
  if (im == 0.0) im = 0.0;
  return json::array({re, im});
}

json point_json(const SpherePt& p) {
  if (p.is_inf()) return json("inf");
  return pair_json(p.z);
}

json poly_json(const Poly& p) {
  json a = json::array();
  for (const cpx& c : p.coeffs()) a.push_back(pair_json(c));
  return a;
}

}  // namespace

MapDocument parse_map_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");
  check_keys(j, {"name", "numerator", "denominator", "marked_points",
                 "base_point", "options"}, "the document");
  for (const char* k : {"name", "numerator", "denominator", "marked_points"})
    if (!j.contains(k)) bad(std::string("missing required key \"") + k + "\"");

  if (!j["name"].is_string()) bad("name must be a string");
  std::string name = j["name"].get<std::string>();
  if (name.empty()) bad("name must not be empty");

  Poly num = poly_at(j["numerator"], "numerator");
  Poly den = poly_at(j["denominator"], "denominator");
  MapDocument doc{name, [&] {
                    try {
                      return RationalMap(num, den);
                    } catch (const CalcError& e) {
                      bad(std::string(
                              "numerator/denominator do not define a map: ") +
                          e.what());
                    }
                  }(),
                  {}, std::nullopt, {}};

  const json& mp = j["marked_points"];
  if (!mp.is_array()) bad("marked_points must be an array");
  for (size_t i = 0; i < mp.size(); ++i)
    doc.marked.push_back(point_at(mp[i], "marked_points[" + std::to_string(i) + "]"));

  if (j.contains("base_point"))
    doc.base = pair_at(j["base_point"], "base_point");
  if (j.contains("options"))
    doc.options = options_at(j["options"]);
  return doc;
}

MapDocument load_map_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_map_document(ss.str());
}

std::string serialize_map_document(const MapDocument& doc) {
  json j = json::object();
  j["name"] = doc.name;
  j["numerator"] = poly_json(doc.f.num());
  j["denominator"] = poly_json(doc.f.den());
  json mp = json::array();
  for (const SpherePt& p : doc.marked) mp.push_back(point_json(p));
  j["marked_points"] = mp;
  if (doc.base) j["base_point"] = pair_json(*doc.base);

  const Options defaults;
  json o = json::object();
  if (doc.options.tol.root_residual != defaults.tol.root_residual)
    o["root_residual"] = doc.options.tol.root_residual;
  if (doc.options.tol.cluster != defaults.tol.cluster)
    o["cluster"] = doc.options.tol.cluster;
  if (doc.options.tol.tracking != defaults.tol.tracking)
    o["tracking"] = doc.options.tol.tracking;
  if (doc.options.tol.clearance != defaults.tol.clearance)
    o["clearance"] = doc.options.tol.clearance;
  if (doc.options.seed != defaults.seed)
    o["seed"] = doc.options.seed;
  if (doc.options.orientation != defaults.orientation)
    o["orientation"] = "cw";
  if (!o.empty()) j["options"] = o;

  return j.dump(2) + "\n";
}

}  // namespace mono
