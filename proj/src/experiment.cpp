#include "affperm/experiment.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "affperm/error.hpp"

namespace affperm {

namespace {

// DOM builder that keeps integer literals too wide for 64 bits as strings
// instead of rounding them to doubles.
class WideIntegerSax : public nlohmann::detail::json_sax_dom_parser<json> {
 public:
  using nlohmann::detail::json_sax_dom_parser<json>::json_sax_dom_parser;

  bool number_float(number_float_t val, const string_t& text) {
    if (is_integer_literal(text)) {
      string_t copy = text;
      return string(copy);
    }
    return nlohmann::detail::json_sax_dom_parser<json>::number_float(val, text);
  }

 private:
  static bool is_integer_literal(const std::string& s) {
    std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  }
};

[[noreturn]] void bad_input(const std::string& what) { throw Error(ErrorKind::InvalidParams, what); }

BigInt integer_from_json(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.is_number_unsigned() ? BigInt(v.get<std::uint64_t>()) : BigInt(v.get<std::int64_t>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
    bool ok = i < s.size();
    for (; ok && i < s.size(); ++i) ok = s[i] >= '0' && s[i] <= '9';
    if (ok) return BigInt(s);
  }
  bad_input(where + " must be an integer, got " + v.dump());
}

int small_int(const json& v, const std::string& where) {
  const BigInt b = integer_from_json(v, where);
  if (b > std::numeric_limits<int>::max() || b < std::numeric_limits<int>::min()) bad_input(where + " is out of range");
  return static_cast<int>(b);
}

std::vector<int> int_list(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) bad_input(std::string("missing array field \"") + key + "\"");
  std::vector<int> out;
  for (const auto& v : j[key]) out.push_back(small_int(v, key));
  return out;
}

std::vector<std::vector<int>> block_list(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) bad_input(std::string("missing array field \"") + key + "\"");
  std::vector<std::vector<int>> out;
  for (const auto& b : j[key]) {
    if (!b.is_array()) bad_input(std::string("\"") + key + "\" must be a list of lists");
    std::vector<int> block;
    for (const auto& v : b) block.push_back(small_int(v, key));
    std::sort(block.begin(), block.end());
    out.push_back(std::move(block));
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (quoted) bad_input("unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json to_json(const AffinePermutation& sigma) {
  return json{{"size", sigma.size()}, {"window", sigma.window()}};
}

AffinePermutation permutation_from_json(const json& j) {
  if (!j.is_object()) bad_input("permutation JSON must be an object {\"size\": N, \"window\": [...]}");
  if (!j.contains("window") || !j["window"].is_array()) bad_input("missing array field \"window\"");
  std::vector<BigInt> window;
  for (const auto& v : j["window"]) window.push_back(integer_from_json(v, "window entry"));
  if (j.contains("size")) {
    const int size = small_int(j["size"], "size");
    if (size != static_cast<int>(window.size())) {
      bad_input("size is " + std::to_string(size) + " but the window has " + std::to_string(window.size()) + " entries");
    }
  }
  return AffinePermutation::validate(std::span<const BigInt>(window));
}

json to_json(const DecompTuple& t) {
  auto sorted = [](std::vector<std::vector<int>> blocks) {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    return blocks;
  };
  return json{{"n", t.n}, {"G", sorted(t.G)}, {"H", sorted(t.H)}, {"delta", t.delta}};
}

DecompTuple tuple_from_json(const json& j) {
  if (!j.is_object()) bad_input("tuple JSON must be an object with n, G, H, delta");
  DecompTuple t;
  t.n = int_list(j, "n");
  t.G = block_list(j, "G");
  t.H = block_list(j, "H");
  t.delta = int_list(j, "delta");
  validate_tuple(t);
  return t;
}

json parse_json_text(const std::string& text) {
  json result;
  WideIntegerSax sax(result, true);
  try {
    json::sax_parse(text, &sax);
  } catch (const json::exception& e) {
    bad_input(std::string("malformed JSON: ") + e.what());
  }
  return result;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad_input("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

json to_json(const ExperimentRecord& r) {
  return json{{"command", r.command},
              {"parameters", r.parameters},
              {"outputs", r.outputs},
              {"seed", r.seed},
              {"elapsed_seconds", r.elapsed_seconds}};
}

ExperimentRecord record_from_json(const json& j) {
  ExperimentRecord r;
  r.command = j.at("command").get<std::string>();
  r.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
  r.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  return r;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::set<std::string> params, outputs;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.parameters) params.insert(k);
    for (const auto& [k, v] : r.outputs) outputs.insert(k);
  }
  std::string out = "command,seed,elapsed_seconds";
  for (const auto& k : params) out += "," + csv_field("param:" + k);
  for (const auto& k : outputs) out += "," + csv_field("output:" + k);
  out += "\n";
  for (const auto& r : records) {
    out += csv_field(r.command) + "," + std::to_string(r.seed) + "," + format_exact(r.elapsed_seconds);
    for (const auto& k : params) {
      auto it = r.parameters.find(k);
      out += "," + (it == r.parameters.end() ? std::string() : csv_field(it->second));
    }
    for (const auto& k : outputs) {
      auto it = r.outputs.find(k);
      out += "," + (it == r.outputs.end() ? std::string() : csv_field(it->second));
    }
    out += "\n";
  }
  return out;
}

std::vector<ExperimentRecord> records_from_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) bad_input("CSV has no header row");
  const auto& header = rows[0];
  if (header.size() < 3 || header[0] != "command" || header[1] != "seed" || header[2] != "elapsed_seconds") {
    bad_input("CSV header must start with command,seed,elapsed_seconds");
  }
  std::vector<ExperimentRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) bad_input("CSV row " + std::to_string(r) + " has the wrong number of fields");
    ExperimentRecord rec;
    rec.command = row[0];
    rec.seed = std::stoull(row[1]);
    rec.elapsed_seconds = std::stod(row[2]);
    for (std::size_t c = 3; c < header.size(); ++c) {
      if (row[c].empty()) continue;
      const std::string& h = header[c];
      if (h.rfind("param:", 0) == 0) rec.parameters[h.substr(6)] = row[c];
      else if (h.rfind("output:", 0) == 0) rec.outputs[h.substr(7)] = row[c];
      else bad_input("unknown CSV column " + h);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records, const std::vector<std::string>& columns) {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + csv_field(columns[c]);
  out += "\n";
  for (const auto& r : records) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const std::string& name = columns[c];
      std::string value;
      if (auto it = r.parameters.find(name); it != r.parameters.end()) value = it->second;
      else if (auto jt = r.outputs.find(name); jt != r.outputs.end()) value = jt->second;
      else if (name == "seed") value = std::to_string(r.seed);
      else if (name == "elapsed_seconds") value = format_exact(r.elapsed_seconds);
      else if (name == "command") value = r.command;
      out += (c ? "," : "") + csv_field(value);
    }
    out += "\n";
  }
  return out;
}

std::string format_exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_estimate(long double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.12Lg", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) bad_input("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) bad_input("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    bad_input("cannot move output into place at " + path + ": " + ec.message());
  }
}

}  // namespace affperm
