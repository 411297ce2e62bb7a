#ifndef BOGO_MANIFEST_HPP
#define BOGO_MANIFEST_HPP

#include <string>
#include <vector>

#include "bogo/common.hpp"

namespace bogo {

struct Assertion {
  std::string name;
  bool pass = false;
  double value = 0;
  double tolerance = 0;
  std::string note;
};

// Everything needed to trace and reproduce a run.  Wall times are the only
// fields allowed to differ between identically seeded runs; results.json
// and the data files must be byte-identical.
struct RunManifest {
  std::string subcommand;
  std::string config_snapshot;  // serialized config JSON
  std::uint64_t seed = 0;
  int jobs = 1;
  double tolerance_scale = 1.0;
  std::vector<std::pair<std::string, double>> stage_wall_s;
  std::vector<Assertion> assertions;
  std::vector<std::pair<std::string, std::string>> input_hashes;  // (path, sha256)
  std::vector<std::string> outputs;

  bool all_pass() const;
  void add(Assertion a);
  Assertion& assert_le(const std::string& name, double value, double tolerance);
  Assertion& assert_true(const std::string& name, bool ok, const std::string& note = "");

  std::string to_json() const;
};

// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// CSV writer with locale-free shortest round-trip doubles.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
  std::size_t n_cols_;
};

}  // namespace bogo

#endif
