#include "normlab/reports.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace normlab {

const char* const kLibraryVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

using Json = nlohmann::ordered_json;

Json tagged(const Scalar& v) {
  Json j;
  j["backend"] = v.backend_name();
  j["value"] = v.is_exact() ? Json(rat_to_string(v.rat())) : Json(v.dbl());
  return j;
}

Json suite_to_json(const SuiteResult& s) {
  Json j;
  j["suite"] = s.name;
  j["pass"] = s.all_pass();
  Json checks = Json::array();
  for (const auto& c : s.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["detail"] = c.detail;
    cj["backend"] = c.backend;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  Json numbers = Json::object();
  for (const auto& [name, value] : s.numbers) numbers[name] = tagged(value);
  j["numbers"] = std::move(numbers);
  j["elapsed_sec"] = s.elapsed_sec;
  return j;
}

std::string csv_from_suite(const SuiteResult& s) {
  std::ostringstream out;
  out << "name,value,backend\n";
  for (const auto& [name, value] : s.numbers)
    out << name << "," << value.to_string() << "," << value.backend_name() << "\n";
  for (const auto& c : s.checks)
    out << "check:" << c.name << "," << (c.pass ? "pass" : "fail") << ",boolean\n";
  return out.str();
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

}  // namespace

ReportBundle bundle_with_documents(
    std::span<const SuiteResult> suites, const ExperimentConfig& config,
    std::span<const std::pair<std::string, std::string>> documents) {
  ReportBundle bundle;

  Json root;
  root["command"] = config.command;
  Json suites_json = Json::array();
  for (const auto& s : suites) suites_json.push_back(suite_to_json(s));
  root["suites"] = std::move(suites_json);
  for (const auto& [key, doc] : documents) root[key] = Json::parse(doc);
  bundle.json_text = root.dump(2) + "\n";

  for (const auto& s : suites)
    bundle.csv_files.emplace_back(sanitize(s.name) + ".csv", csv_from_suite(s));

  // plot series grouped by name, one two-column file each
  std::map<std::string, std::ostringstream> series;
  for (const auto& s : suites)
    for (const auto& [name, px, py] : s.plot_points)
      series[name] << double_to_string(px) << " " << double_to_string(py) << "\n";
  for (auto& [name, text] : series)
    bundle.plot_files.emplace_back(sanitize(name) + ".txt", text.str());

  const std::string canonical = config.canonical();
  Json manifest;
  manifest["config"] = canonical;
  manifest["version"] = kLibraryVersion;
  {
    std::ostringstream hashed;
    hashed << canonical << "|" << kLibraryVersion;
    std::ostringstream hex;
    hex << std::hex << fnv1a64(hashed.str());
    manifest["hash"] = hex.str();
  }
  manifest["timestamp"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  bundle.manifest_text = manifest.dump(2) + "\n";
  return bundle;
}

ReportBundle bundle_from_suites(std::span<const SuiteResult> suites,
                                const ExperimentConfig& config) {
  return bundle_with_documents(suites, config, {});
}

void ReportBundle::write_to(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + name + " under " + dir);
    out << content;
  };
  write("results.json", json_text);
  for (const auto& [name, content] : csv_files) write(name, content);
  for (const auto& [name, content] : plot_files) write(name, content);
  write("manifest.json", manifest_text);
}

}  // namespace normlab
