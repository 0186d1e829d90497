#pragma once

#include <string>
#include <vector>

namespace sdairp {

// Record of one CLI run, written atomically next to the outputs. Replaying a
// manifest re-executes the recorded command line and must reproduce every
// output byte for byte (timing lives only here, never in output files).
struct RunManifest {
  std::string tool = "sdairp";
  std::string version;
  std::string command;
  std::vector<std::string> argv;
  std::string instance;
  std::string config;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  double wall_time_ms = 0.0;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

// Writes content to path via a temp file + rename so readers never observe a
// partial file.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace sdairp
