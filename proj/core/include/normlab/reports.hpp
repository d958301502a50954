#pragma once

#include "normlab/config.hpp"
#include "normlab/suites.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace normlab {

/// Batch output of one CLI run: a machine-readable JSON document, CSV tables
/// whose every figure also appears in the JSON, two-column plot-data text
/// files, and a manifest whose hash covers the canonical config and library
/// version but not the timestamp.
struct ReportBundle {
  std::string json_text;
  std::vector<std::pair<std::string, std::string>> csv_files;
  std::vector<std::pair<std::string, std::string>> plot_files;
  std::string manifest_text;

  /// Creates the directory if needed and writes results.json, the CSV and
  /// plot files, and manifest.json.
  void write_to(const std::string& dir) const;
};

std::uint64_t fnv1a64(std::string_view text);

ReportBundle bundle_from_suites(std::span<const SuiteResult> suites,
                                const ExperimentConfig& config);

/// Appends extra top-level JSON documents (already serialized) under the
/// given keys; used by commands that emit artifacts beyond suite tables.
ReportBundle bundle_with_documents(
    std::span<const SuiteResult> suites, const ExperimentConfig& config,
    std::span<const std::pair<std::string, std::string>> documents);

extern const char* const kLibraryVersion;

}  // namespace normlab
