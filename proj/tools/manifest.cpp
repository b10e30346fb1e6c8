#include "manifest.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>

#include "vabench/error.hpp"
#include "vabench/random.hpp"

namespace vabench::app {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "' for digest");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return hex64(fnv1a64(bytes));
}

RunManifest::RunManifest(std::string command) : command_(std::move(command)) {}

void RunManifest::add_input(const std::string& path) {
  inputs_.push_back({{"path", path}, {"fnv1a64", file_digest(path)}});
}

void RunManifest::begin_stage(const std::string& name) {
  end_stage();
  stage_ = name;
  stage_start_ = std::chrono::steady_clock::now();
}

void RunManifest::end_stage() {
  if (stage_.empty()) return;
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            stage_start_).count();
  timings_.push_back({{"stage", stage_}, {"ms", ms}});
  stage_.clear();
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j{{"toolkit", "vabench"},
                   {"version", kToolkitVersion},
                   {"command", command_},
                   {"seed", seed_},
                   {"config", config_},
                   {"inputs", inputs_},
                   {"outputs", outputs_},
                   {"timing", timings_}};
  for (const auto& [k, v] : extra_.items()) j[k] = v;
  return j;
}

void RunManifest::write(const std::string& path) {
  end_stage();
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest '" + path + "'");
  out << to_json().dump(2) << '\n';
  if (!out) throw DataError("failed writing manifest '" + path + "'");
}

}  // namespace vabench::app
