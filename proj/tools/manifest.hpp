#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace vabench::app {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// FNV-1a 64 digest of a file's bytes as 16 hex digits.
std::string file_digest(const std::string& path);
std::string hex64(std::uint64_t v);

/// Provenance record written next to every artifact.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void set_config(nlohmann::json config) { config_ = std::move(config); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_input(const std::string& path);
  void add_output(const std::string& path) { outputs_.push_back(path); }
  void set_field(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

  /// Starts timing a stage; the previous stage, if any, is closed.
  void begin_stage(const std::string& name);
  void end_stage();

  nlohmann::json to_json() const;
  void write(const std::string& path);

 private:
  std::string command_;
  nlohmann::json config_ = nlohmann::json::object();
  std::uint64_t seed_ = 0;
  nlohmann::json inputs_ = nlohmann::json::array();
  std::vector<std::string> outputs_;
  nlohmann::json extra_ = nlohmann::json::object();
  nlohmann::json timings_ = nlohmann::json::array();
  std::string stage_;
  std::chrono::steady_clock::time_point stage_start_;
};

}  // namespace vabench::app
