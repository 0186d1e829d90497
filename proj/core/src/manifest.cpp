#include "sdairp/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sdairp {

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = tool;
  j["version"] = version;
  j["command"] = command;
  j["argv"] = argv;
  j["instance"] = instance;
  j["config"] = config;
  j["seeds"] = seeds;
  j["out_dir"] = out_dir;
  j["wall_time_ms"] = wall_time_ms;
  return j.dump(2);
}

RunManifest RunManifest::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RunManifest m;
  m.tool = j.value("tool", "sdairp");
  m.version = j.value("version", "");
  m.command = j.value("command", "");
  m.argv = j.value("argv", std::vector<std::string>{});
  m.instance = j.value("instance", "");
  m.config = j.value("config", "");
  m.seeds = j.value("seeds", std::vector<std::uint64_t>{});
  m.out_dir = j.value("out_dir", "");
  m.wall_time_ms = j.value("wall_time_ms", 0.0);
  return m;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
}

}  // namespace sdairp
