#include "qnm/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qnm/error.hpp"
#include "qnm/report.hpp"

namespace qnm {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorKind::ParseError, where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw Error(ErrorKind::ParseError, "unknown key '" + key + "' in " + where);
}

double number_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing '") + key + "' in " + where);
  const auto& v = obj.at(key);
  if (!v.is_number()) throw Error(ErrorKind::ParseError, std::string("'") + key + "' in " + where + " is not a number");
  return v.get<double>();
}

Family parse_family(const json& v) {
  if (!v.is_string()) throw Error(ErrorKind::ParseError, "'family' must be a string");
  const auto s = v.get<std::string>();
  if (s == "Wave") return Family::Wave;
  if (s == "KleinGordon") return Family::KleinGordon;
  throw Error(ErrorKind::ParseError, "unknown family '" + s + "'");
}

}  // namespace

std::string to_string(Family family) { return family == Family::Wave ? "Wave" : "KleinGordon"; }

DensityProfile parse_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  reject_unknown_keys(doc, {"family", "a", "segments", "point_masses"}, "model");

  ModelCandidate raw;
  if (!doc.contains("family")) throw Error(ErrorKind::ParseError, "missing 'family' in model");
  raw.family = parse_family(doc.at("family"));
  raw.a = number_field(doc, "a", "model");

  if (!doc.contains("segments") || !doc.at("segments").is_array())
    throw Error(ErrorKind::ParseError, "'segments' must be an array");
  for (const auto& s : doc.at("segments")) {
    reject_unknown_keys(s, {"x_left", "x_right", "rho"}, "segment");
    raw.segments.push_back(
        {number_field(s, "x_left", "segment"), number_field(s, "x_right", "segment"), number_field(s, "rho", "segment")});
  }
  if (doc.contains("point_masses")) {
    if (!doc.at("point_masses").is_array()) throw Error(ErrorKind::ParseError, "'point_masses' must be an array");
    for (const auto& pm : doc.at("point_masses")) {
      reject_unknown_keys(pm, {"position", "mass"}, "point mass");
      raw.point_masses.push_back({number_field(pm, "position", "point mass"), number_field(pm, "mass", "point mass")});
    }
  }
  return validate_model(raw);
}

DensityProfile load_model(const std::string& path) {
  return parse_model(read_file(path));
}

std::string serialize_model(const DensityProfile& model) {
  nlohmann::ordered_json doc;
  doc["family"] = to_string(model.family());
  doc["a"] = model.a();
  auto segs = nlohmann::ordered_json::array();
  for (const auto& s : model.segments()) {
    nlohmann::ordered_json e;
    e["x_left"] = s.x_left;
    e["x_right"] = s.x_right;
    e["rho"] = s.rho;
    segs.push_back(e);
  }
  doc["segments"] = segs;
  auto masses = nlohmann::ordered_json::array();
  for (const auto& pm : model.point_masses()) {
    nlohmann::ordered_json e;
    e["position"] = pm.position;
    e["mass"] = pm.mass;
    masses.push_back(e);
  }
  doc["point_masses"] = masses;
  return dump_json(doc);
}

}  // namespace qnm
