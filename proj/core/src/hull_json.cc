// Copyright 2026 The hcap Authors
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

#include "hcap/hull_json.h"

#include <initializer_list>
#include <set>
#include <string>

#include "hcap/errors.h"

namespace hcap {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw PreconditionError(where + ": expected a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.contains(key)) throw PreconditionError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw PreconditionError(where + ": missing key '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw PreconditionError(where + ": key '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

std::vector<double> numbers(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw PreconditionError(where + ": key '" + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const json& v : j.at(key)) {
    if (!v.is_number()) throw PreconditionError(where + ": key '" + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

const char* profile_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::kLorentzian:
      return "lorentzian";
    case ProfileKind::kGaussian:
      return "gaussian";
    case ProfileKind::kTable:
      return "table";
    case ProfileKind::kConstant:
      return "constant";
  }
  return "?";
}

}  // namespace

json point_to_json(Point p) { return json::array({p.re, p.im}); }

Point point_from_json(const json& j) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object()) {
    check_keys(j, {"re", "im"}, "point");
    return {number(j, "re", "point"), number(j, "im", "point")};
  }
  throw PreconditionError("point: expected [re, im] or {\"re\":..., \"im\":...}");
}

json hull_to_json(const Hull& h) {
  return std::visit(
      Overloaded{
          [](const EmptyHull&) { return json{{"kind", "empty"}}; },
          [](const VerticalSlit& s) { return json{{"kind", "vertical_slit"}, {"base", s.base}, {"height", s.height}}; },
          [](const HalfDisk& d) { return json{{"kind", "half_disk"}, {"center", d.center}, {"radius", d.radius}}; },
          [](const Ridge& r) {
            const RidgeProfile& p = r.profile;
            json out{{"kind", "ridge"}, {"profile", profile_name(p.kind)}};
            switch (p.kind) {
              case ProfileKind::kLorentzian:
              case ProfileKind::kGaussian:
                out["height"] = p.height;
                out["center"] = p.center;
                out["width"] = p.width;
                break;
              case ProfileKind::kTable:
                out["xs"] = p.xs;
                out["heights"] = p.heights;
                break;
              case ProfileKind::kConstant:
                out["height"] = p.height;
                break;
            }
            return out;
          },
          [](const Polyline& p) {
            json pts = json::array();
            for (const Point& v : p.vertices) pts.push_back(point_to_json(v));
            return json{{"kind", "polyline"}, {"points", pts}};
          },
          [](const HullUnion& u) {
            json parts = json::array();
            for (const Hull& part : u.parts) parts.push_back(hull_to_json(part));
            return json{{"kind", "union"}, {"parts", parts}};
          },
          [](const Shifted& s) { return json{{"kind", "shifted"}, {"offset", s.offset}, {"hull", hull_to_json(*s.inner)}}; },
          [](const Scaled& s) { return json{{"kind", "scaled"}, {"factor", s.factor}, {"hull", hull_to_json(*s.inner)}}; },
      },
      h.variant());
}

Hull hull_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw PreconditionError("hull: expected an object with a string 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  const std::string where = "hull(" + kind + ")";
  if (kind == "empty") {
    check_keys(j, {"kind"}, where);
    return Hull::empty();
  }
  if (kind == "vertical_slit") {
    check_keys(j, {"kind", "base", "height"}, where);
    return Hull::vertical_slit(number_or(j, "base", 0.0, where), number(j, "height", where));
  }
  if (kind == "half_disk") {
    check_keys(j, {"kind", "center", "radius"}, where);
    return Hull::half_disk(number_or(j, "center", 0.0, where), number(j, "radius", where));
  }
  if (kind == "ridge") {
    if (!j.contains("profile") || !j.at("profile").is_string()) {
      throw PreconditionError(where + ": missing string 'profile'");
    }
    const std::string profile = j.at("profile").get<std::string>();
    if (profile == "lorentzian" || profile == "gaussian") {
      check_keys(j, {"kind", "profile", "height", "center", "width"}, where);
      const double c = number(j, "height", where);
      const double a = number_or(j, "center", 0.0, where);
      const double w = number_or(j, "width", 1.0, where);
      return Hull::ridge(profile == "lorentzian" ? RidgeProfile::lorentzian(c, a, w)
                                                 : RidgeProfile::gaussian(c, a, w));
    }
    if (profile == "table") {
      check_keys(j, {"kind", "profile", "xs", "heights"}, where);
      return Hull::ridge(RidgeProfile::table(numbers(j, "xs", where), numbers(j, "heights", where)));
    }
    if (profile == "constant") {
      check_keys(j, {"kind", "profile", "height"}, where);
      return Hull::ridge(RidgeProfile::constant(number(j, "height", where)));
    }
    throw PreconditionError(where + ": unknown profile '" + profile + "'");
  }
  if (kind == "polyline") {
    check_keys(j, {"kind", "points"}, where);
    if (!j.contains("points") || !j.at("points").is_array()) {
      throw PreconditionError(where + ": 'points' must be an array");
    }
    std::vector<Point> pts;
    for (const json& p : j.at("points")) pts.push_back(point_from_json(p));
    return Hull::polyline(std::move(pts));
  }
  if (kind == "union") {
    check_keys(j, {"kind", "parts"}, where);
    if (!j.contains("parts") || !j.at("parts").is_array()) {
      throw PreconditionError(where + ": 'parts' must be an array");
    }
    std::vector<Hull> parts;
    for (const json& p : j.at("parts")) parts.push_back(hull_from_json(p));
    return Hull::union_of(std::move(parts));
  }
  if (kind == "shifted") {
    check_keys(j, {"kind", "offset", "hull"}, where);
    if (!j.contains("hull")) throw PreconditionError(where + ": missing 'hull'");
    return Hull::shifted(hull_from_json(j.at("hull")), number(j, "offset", where));
  }
  if (kind == "scaled") {
    check_keys(j, {"kind", "factor", "hull"}, where);
    if (!j.contains("hull")) throw PreconditionError(where + ": missing 'hull'");
    return Hull::scaled(hull_from_json(j.at("hull")), number(j, "factor", where));
  }
  throw PreconditionError("hull: unknown kind '" + kind + "'");
}

json slits_to_json(const SlitDomain& d) {
  json out = json::array();
  for (const Slit& s : d.slits()) out.push_back({{"y", s.y}, {"x_lo", s.x_lo}, {"x_hi", s.x_hi}});
  return out;
}

SlitDomain slits_from_json(const json& j) {
  if (!j.is_array()) throw PreconditionError("slits: expected an array");
  std::vector<Slit> slits;
  for (const json& s : j) {
    check_keys(s, {"y", "x_lo", "x_hi"}, "slit");
    slits.push_back({number(s, "y", "slit"), number(s, "x_lo", "slit"), number(s, "x_hi", "slit")});
  }
  return SlitDomain(std::move(slits));
}

}  // namespace hcap
