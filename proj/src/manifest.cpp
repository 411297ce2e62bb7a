#include "bogo/manifest.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bogo {

bool RunManifest::all_pass() const {
  for (const Assertion& a : assertions)
    if (!a.pass) return false;
  return true;
}

void RunManifest::add(Assertion a) { assertions.push_back(std::move(a)); }

Assertion& RunManifest::assert_le(const std::string& name, double value, double tolerance) {
  Assertion a;
  a.name = name;
  a.value = value;
  a.tolerance = tolerance;
  a.pass = value <= tolerance;
  assertions.push_back(std::move(a));
  return assertions.back();
}

Assertion& RunManifest::assert_true(const std::string& name, bool ok, const std::string& note) {
  Assertion a;
  a.name = name;
  a.pass = ok;
  a.note = note;
  a.value = ok ? 1 : 0;
  a.tolerance = 1;
  assertions.push_back(std::move(a));
  return assertions.back();
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "bogo";
  j["version"] = "0.1.0";
  j["rng"] = "philox4x32-10";
  j["subcommand"] = subcommand;
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["tolerance_scale"] = tolerance_scale;
  if (!config_snapshot.empty()) {
    try {
      j["config"] = nlohmann::json::parse(config_snapshot);
    } catch (...) {
      j["config"] = config_snapshot;
    }
  }
  j["stages"] = nlohmann::json::array();
  for (const auto& [name, secs] : stage_wall_s) j["stages"].push_back({{"name", name}, {"wall_s", secs}});
  j["assertions"] = nlohmann::json::array();
  for (const Assertion& a : assertions) {
    nlohmann::json e = {{"name", a.name}, {"pass", a.pass}, {"value", a.value}, {"tolerance", a.tolerance}};
    if (!a.note.empty()) e["note"] = a.note;
    j["assertions"].push_back(std::move(e));
  }
  j["inputs"] = nlohmann::json::array();
  for (const auto& [path, hash] : input_hashes) j["inputs"].push_back({{"path", path}, {"sha256", hash}});
  j["outputs"] = outputs;
  j["all_pass"] = all_pass();
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::runtime, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(Errc::runtime, "short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::runtime, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvWriter::CsvWriter(std::vector<std::string> header) : n_cols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += header[i];
  }
  buf_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_cols_) fail(Errc::invalid_argument, "csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += format_double(values[i]);
  }
  buf_ += '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  if (values.size() != n_cols_) fail(Errc::invalid_argument, "csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += values[i];
  }
  buf_ += '\n';
}

}  // namespace bogo
