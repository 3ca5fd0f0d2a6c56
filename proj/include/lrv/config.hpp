#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace lrv {

// Flat key = value file. Blank lines and '#' comments are ignored; a value may
// be quoted or a bracketed, comma-separated list.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

std::vector<std::string> split_list(const std::string& value);

}  // namespace lrv
