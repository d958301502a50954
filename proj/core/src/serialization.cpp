#include "normlab/serialization.hpp"

#include <json.hpp>

#include <sstream>

namespace normlab {

namespace {

using Json = nlohmann::ordered_json;

Json scalar_to_json(const Scalar& v) {
  if (v.is_exact()) return Json(rat_to_string(v.rat()));
  return Json(v.dbl());
}

Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return Scalar(rat_from_string(j.get<std::string>()));
  if (j.is_number()) return Scalar(j.get<double>());
  throw std::invalid_argument("scalar_from_json: expected string rational or number");
}

Json scalar_array(const std::vector<Scalar>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(scalar_to_json(v));
  return a;
}

std::vector<Scalar> scalar_array_from(const Json& a) {
  std::vector<Scalar> out;
  out.reserve(a.size());
  for (const auto& j : a) out.push_back(scalar_from_json(j));
  return out;
}

Json tagged_scalar(const Scalar& v) {
  Json j;
  j["backend"] = v.backend_name();
  j["value"] = v.is_exact() ? Json(rat_to_string(v.rat())) : Json(v.dbl());
  return j;
}

}  // namespace

std::string stepfn_to_json(const StepFunction& f) {
  Json j;
  if (f.space()->has_geometry()) {
    j["breakpoints"] = scalar_array(f.space()->breakpoints());
  } else {
    j["weights"] = scalar_array(f.space()->weights());
  }
  j["values"] = scalar_array(f.values());
  j["backend"] = f.all_exact() ? "exact" : "float64";
  return j.dump();
}

StepFunction stepfn_from_json(const std::string& text) {
  const Json j = Json::parse(text);
  SpacePtr space;
  if (j.contains("breakpoints")) {
    space = PartitionSpace::from_breakpoints(scalar_array_from(j.at("breakpoints")));
  } else if (j.contains("weights")) {
    space = PartitionSpace::from_weights(scalar_array_from(j.at("weights")));
  } else {
    throw std::invalid_argument("stepfn_from_json: missing breakpoints or weights");
  }
  return StepFunction(std::move(space), scalar_array_from(j.at("values")));
}

std::string sampling_to_text(const SamplingSet& s) {
  std::ostringstream out;
  for (const auto& t : s.points) out << t.to_string() << "\n";
  return out.str();
}

SamplingSet sampling_from_text(const std::string& text) {
  SamplingSet s;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    s.points.push_back(Scalar::parse(line));
  }
  if (s.points.empty()) throw std::invalid_argument("sampling_from_text: no points");
  return s;
}

std::string frame_to_json(const FiniteFrame& f) {
  Json j;
  j["dim"] = f.dim;
  j["weights"] = scalar_array(f.weights);
  Json vectors = Json::array();
  for (const auto& v : f.vectors) vectors.push_back(scalar_array(v));
  j["vectors"] = std::move(vectors);
  return j.dump();
}

FiniteFrame frame_from_json(const std::string& text) {
  const Json j = Json::parse(text);
  FiniteFrame f;
  f.dim = j.at("dim").get<std::size_t>();
  f.weights = scalar_array_from(j.at("weights"));
  for (const auto& v : j.at("vectors")) f.vectors.push_back(scalar_array_from(v));
  if (f.weights.size() != f.vectors.size())
    throw std::invalid_argument("frame_from_json: weights/vectors length mismatch");
  for (const auto& v : f.vectors)
    if (v.size() != f.dim) throw std::invalid_argument("frame_from_json: vector dim mismatch");
  return f;
}

std::string report_to_json(const DiscretizationReport& r) {
  Json j;
  j["p"] = tagged_scalar(r.p);
  Json a;
  a["value"] = tagged_scalar(r.A_value);
  a["kind"] = bound_kind_name(r.A_kind);
  a["witness"] = scalar_array(r.A_witness);
  j["A"] = std::move(a);
  Json b;
  b["value"] = tagged_scalar(r.B_value);
  b["kind"] = bound_kind_name(r.B_kind);
  b["witness"] = scalar_array(r.B_witness);
  j["B"] = std::move(b);
  j["valid"] = r.valid;
  j["M"] = r.M;
  j["family"] = r.family;
  return j.dump();
}

}  // namespace normlab
