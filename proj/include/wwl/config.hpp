#pragma once

#include <map>
#include <string>
#include <vector>

namespace wwl {

/// INI-style config: [section] headers, key = value lines, # or ; comments.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback = "") const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  long get_int(const std::string& section, const std::string& key,
               long fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  /// Whitespace- or comma-separated list of reals.
  std::vector<double> get_list(const std::string& section,
                               const std::string& key,
                               const std::vector<double>& fallback) const;

  void set(const std::string& section, const std::string& key,
           const std::string& value);

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

}  // namespace wwl
