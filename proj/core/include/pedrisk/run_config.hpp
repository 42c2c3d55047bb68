#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace pedrisk {

// Flat key = value configuration ('#' starts a comment). Unknown keys are
// rejected and every value is type-checked against the schema at load time,
// so a manifest echoing the effective config can be re-consumed verbatim.
class RunConfig {
 public:
  RunConfig();  // schema defaults

  static RunConfig from_file(const std::filesystem::path& path);
  void load_file(const std::filesystem::path& path);

  // Applies one "key=value" override (CLI --set).
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
  std::uint64_t seed() const;

  // Effective configuration in schema order, formatted for a manifest.
  std::vector<std::pair<std::string, std::string>> entries() const;

 private:
  enum class Type { Int, Double, String };
  struct Entry {
    Type type;
    std::string value;
    std::vector<std::string> allowed;  // non-empty: enumerated string values
  };

  const Entry& lookup(const std::string& key) const;
  void check_value(const std::string& key, Entry& entry, const std::string& value);

  std::vector<std::string> order_;
  std::map<std::string, Entry> entries_;
};

}  // namespace pedrisk
