#include "planar/certificate_json.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "planar/parser.hpp"

namespace planar {

using nlohmann::json;

namespace {

json bound_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

double bound_from_json(const json& j) {
  if (j.is_string()) {
    if (j == "inf") return std::numeric_limits<double>::infinity();
    if (j == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("bad bound " + j.dump());
  }
  if (!j.is_number_float()) throw std::invalid_argument("bound must be a float: " + j.dump());
  return j.get<double>();
}

Interval interval_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("interval must be [lo, hi]");
  return Interval(bound_from_json(j[0]), bound_from_json(j[1]));
}

Box box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("box must be [[x], [y]]");
  return {interval_from_json(j[0]), interval_from_json(j[1])};
}

BivarPoly poly_from_json(const json& j) {
  if (!j.is_string()) throw std::invalid_argument("polynomial must be a string");
  ParseOptions opts;
  opts.max_degree = BivarPoly::kUnlimited;
  return parse_poly(j.get<std::string>(), opts);
}

double float_from_json(const json& j) {
  if (!j.is_number_float()) throw std::invalid_argument("expected a float: " + j.dump());
  return j.get<double>();
}

void require_keys(const json& j, std::set<std::string> keys) {
  if (!j.is_object()) throw std::invalid_argument("certificate must be an object");
  keys.insert({"kind", "claimed", "poly"});
  for (const auto& [k, _] : j.items()) {
    if (!keys.contains(k)) throw std::invalid_argument("unexpected key '" + k + "'");
  }
  for (const auto& k : keys) {
    if (!j.contains(k)) throw std::invalid_argument("missing key '" + k + "'");
  }
}

CertKind kind_from_string(const std::string& s) {
  for (CertKind k : {CertKind::constant, CertKind::even_monomial, CertKind::perfect_square, CertKind::sos_user,
                     CertKind::leading_form_radius, CertKind::bb_tree, CertKind::cover, CertKind::infeasible}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown certificate kind '" + s + "'");
}

json constraints_to_json(const std::vector<Constraint>& cons) {
  json a = json::array();
  for (const auto& c : cons) a.push_back({{"poly", c.poly.to_string()}, {"rel", to_string(c.rel)}});
  return a;
}

std::vector<Constraint> constraints_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("constraints must be an array");
  std::vector<Constraint> out;
  for (const auto& c : j) {
    if (!c.is_object() || c.size() != 2) throw std::invalid_argument("bad constraint");
    out.push_back({poly_from_json(c.at("poly")), relation_from_string(c.at("rel").get<std::string>())});
  }
  return out;
}

}  // namespace

json box_to_json(const Box& b) {
  return json::array({json::array({bound_to_json(b.x.lo), bound_to_json(b.x.hi)}),
                      json::array({bound_to_json(b.y.lo), bound_to_json(b.y.hi)})});
}

json region_to_json(const Region& r) {
  json j;
  switch (r.kind) {
    case Region::Kind::whole_plane: j["kind"] = "whole_plane"; break;
    case Region::Kind::outside_box: j["kind"] = "outside_box"; j["box"] = box_to_json(r.box); break;
    case Region::Kind::box: j["kind"] = "box"; j["box"] = box_to_json(r.box); break;
    case Region::Kind::eventually: j["kind"] = "eventually"; break;
  }
  j["constraints"] = constraints_to_json(r.constraints);
  return j;
}

json certificate_to_json(const SignCertificate& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["claimed"] = to_string(c.claimed);
  j["poly"] = c.poly.to_string();
  auto squares = [&] {
    json a = json::array();
    for (const auto& g : c.squares) a.push_back(g.to_string());
    return a;
  };
  auto parts = [&] {
    json a = json::array();
    for (const auto& p : c.parts) a.push_back(certificate_to_json(p));
    return a;
  };
  switch (c.kind) {
    case CertKind::constant:
      break;
    case CertKind::even_monomial:
      j["offset"] = to_string(c.offset);
      break;
    case CertKind::perfect_square:
    case CertKind::sos_user:
      j["offset"] = to_string(c.offset);
      j["squares"] = squares();
      break;
    case CertKind::leading_form_radius:
      j["axes"] = c.axes;
      j["radius"] = c.radius;
      j["form_min"] = c.form_min;
      break;
    case CertKind::bb_tree: {
      j["constraints"] = constraints_to_json(c.constraints);
      json boxes = json::array();
      for (const auto& b : c.boxes) boxes.push_back({{"box", box_to_json(b.box)}, {"log", b.log}});
      j["boxes"] = boxes;
      break;
    }
    case CertKind::cover:
      j["constraints"] = constraints_to_json(c.constraints);
      j["excluded"] = c.excluded ? box_to_json(*c.excluded) : json(nullptr);
      j["radius"] = c.radius;
      j["axes"] = c.axes;
      j["subject"] = c.subject;
      j["parts"] = parts();
      break;
    case CertKind::infeasible:
      j["constraints"] = constraints_to_json(c.constraints);
      j["subject"] = c.subject;
      j["parts"] = parts();
      break;
  }
  return j;
}

SignCertificate certificate_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw std::invalid_argument("certificate needs a string 'kind'");
  }
  SignCertificate c;
  c.kind = kind_from_string(j["kind"].get<std::string>());
  switch (c.kind) {
    case CertKind::constant: require_keys(j, {}); break;
    case CertKind::even_monomial: require_keys(j, {"offset"}); break;
    case CertKind::perfect_square:
    case CertKind::sos_user: require_keys(j, {"offset", "squares"}); break;
    case CertKind::leading_form_radius: require_keys(j, {"axes", "radius", "form_min"}); break;
    case CertKind::bb_tree: require_keys(j, {"constraints", "boxes"}); break;
    case CertKind::cover: require_keys(j, {"constraints", "excluded", "radius", "axes", "subject", "parts"}); break;
    case CertKind::infeasible: require_keys(j, {"constraints", "subject", "parts"}); break;
  }
  if (!j["claimed"].is_string()) throw std::invalid_argument("claimed must be a string");
  c.claimed = sign_from_string(j["claimed"].get<std::string>());
  c.poly = poly_from_json(j["poly"]);
  if (j.contains("offset")) {
    if (!j["offset"].is_string()) throw std::invalid_argument("offset must be a string");
    c.offset = rational_from_string(j["offset"].get<std::string>());
  }
  if (j.contains("squares")) {
    if (!j["squares"].is_array()) throw std::invalid_argument("squares must be an array");
    for (const auto& g : j["squares"]) c.squares.push_back(poly_from_json(g));
  }
  if (j.contains("axes")) {
    if (!j["axes"].is_string()) throw std::invalid_argument("axes must be a string");
    c.axes = j["axes"].get<std::string>();
    if (c.axes != "xy" && c.axes != "x" && c.axes != "y") throw std::invalid_argument("bad axes");
  }
  if (j.contains("radius")) c.radius = float_from_json(j["radius"]);
  if (j.contains("form_min")) c.form_min = float_from_json(j["form_min"]);
  if (j.contains("constraints")) c.constraints = constraints_from_json(j["constraints"]);
  if (j.contains("boxes")) {
    if (!j["boxes"].is_array()) throw std::invalid_argument("boxes must be an array");
    for (const auto& b : j["boxes"]) {
      if (!b.is_object() || b.size() != 2 || !b.at("log").is_string()) throw std::invalid_argument("bad box log");
      c.boxes.push_back({box_from_json(b.at("box")), b.at("log").get<std::string>()});
    }
  }
  if (j.contains("excluded") && !j["excluded"].is_null()) c.excluded = box_from_json(j["excluded"]);
  if (j.contains("subject")) {
    if (!j["subject"].is_number_integer()) throw std::invalid_argument("subject must be an integer");
    c.subject = j["subject"].get<int>();
  }
  if (j.contains("parts")) {
    if (!j["parts"].is_array()) throw std::invalid_argument("parts must be an array");
    for (const auto& p : j["parts"]) c.parts.push_back(certificate_from_json(p));
  }
  return c;
}

std::string serialize_certificate(const SignCertificate& cert) { return certificate_to_json(cert).dump(); }

SignCertificate parse_certificate(const std::string& text) { return certificate_from_json(json::parse(text)); }

bool verify_certificate_text(const std::string& text, const BivarPoly& p, const Region& region) {
  try {
    const SignCertificate c = parse_certificate(text);
    if (serialize_certificate(c) != text) return false;
    return certificate_covers(c, region) && verify_certificate(p, c);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace planar
