#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace zk {

// Run configuration: `key = value` lines, '#' starts a comment. Keys a
// scenario never reads are rejected when the scenario finalizes, so typos
// fail loudly. echo() serializes the resolved configuration in a form that
// parses back to the same map.
class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig parse_file(const std::filesystem::path& path);
  static RunConfig parse_string(const std::string& text);

  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma-separated list of reals.
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;

  // Serialization of every stored key, including defaults recorded by the
  // getters, sorted by key.
  std::string echo() const;

  // Throws if any stored key was never consumed by a getter.
  void reject_unknown_keys() const;

  bool operator==(const RunConfig& o) const { return values_ == o.values_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
  mutable std::map<std::string, std::string> defaults_;
};

}  // namespace zk
