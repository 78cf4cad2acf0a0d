#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fgnav {

/// Flat TOML-subset reader for the tool config files: comments, [section]
/// headers, and `key = value` lines where value is a number, a boolean, a
/// quoted string or an array of numbers. Keys are exposed as
/// "section.key" (or bare "key" before any section header).
class ConfigFile {
 public:
  static ConfigFile load(const std::string& path);
  static ConfigFile parse(const std::string& text);

  std::optional<double> number(const std::string& key) const;
  std::optional<bool> boolean(const std::string& key) const;
  std::optional<std::string> string(const std::string& key) const;
  std::optional<std::vector<double>> numbers(const std::string& key) const;

  /// Overwrites `target` when the key is present.
  template <typename T>
  void read(const std::string& key, T& target) const {
    if (const auto v = number(key)) {
      target = static_cast<T>(*v);
    }
  }
  void read(const std::string& key, bool& target) const {
    if (const auto v = boolean(key)) {
      target = *v;
    }
  }

  bool empty() const { return values_.empty(); }

 private:
  struct Value {
    std::string raw;
  };
  std::map<std::string, Value> values_;
};

}  // namespace fgnav
