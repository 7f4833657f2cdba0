#pragma once

// File formats: permutation and tuple JSON, experiment records as CSV/JSON.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "affperm/core.hpp"
#include "affperm/decomposition.hpp"

namespace affperm {

using json = nlohmann::json;

/// {"size": N, "window": [...]}; entries may be arbitrarily large integers in
/// the text, they are validated before use.
json to_json(const AffinePermutation& sigma);
AffinePermutation permutation_from_json(const json& j);

/// {"n": [...], "G": [[...],...], "H": [[...],...], "delta": [...]}
json to_json(const DecompTuple& t);
DecompTuple tuple_from_json(const json& j);

/// Parses text as JSON, keeping integers too wide for 64 bits as decimal strings.
json parse_json_text(const std::string& text);
json read_json_file(const std::string& path);

struct ExperimentRecord {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::map<std::string, std::string> outputs;
  std::uint64_t seed = 0;
  double elapsed_seconds = 0;

  bool operator==(const ExperimentRecord&) const = default;
};

json to_json(const ExperimentRecord& r);
ExperimentRecord record_from_json(const json& j);

/// Header: command,seed,elapsed_seconds,param:<key>...,output:<key>... over
/// the union of keys. Fields are quoted when they contain a comma, quote or
/// newline.
std::string records_to_csv(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> records_from_csv(const std::string& text);

/// Fixed-column CSV: a header row, then one row per record, taking the named
/// columns from parameters, outputs, or the seed/elapsed_seconds fields.
std::string records_to_csv(const std::vector<ExperimentRecord>& records, const std::vector<std::string>& columns);

/// Shortest round-trip decimal for a double.
std::string format_exact(double v);
/// 12 significant digits.
std::string format_estimate(long double v);

/// `content` is written to a temporary sibling and renamed into place.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace affperm
