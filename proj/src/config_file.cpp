#include "fgnav/config_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fgnav {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) {
      // Keep '#' inside quoted strings.
      const auto quote = line.find('"');
      if (quote == std::string::npos || comment < quote) {
        line = line.substr(0, comment);
      }
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    cfg.values_[full] = Value{value};
  }
  return cfg;
}

std::optional<double> ConfigFile::number(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return std::nullopt;
  }
  try {
    size_t used = 0;
    const double v = std::stod(it->second.raw, &used);
    if (used != it->second.raw.size()) {
      return std::nullopt;
    }
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<bool> ConfigFile::boolean(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return std::nullopt;
  }
  if (it->second.raw == "true") {
    return true;
  }
  if (it->second.raw == "false") {
    return false;
  }
  return std::nullopt;
}

std::optional<std::string> ConfigFile::string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return std::nullopt;
  }
  std::string raw = it->second.raw;
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    return raw.substr(1, raw.size() - 2);
  }
  return raw;
}

std::optional<std::vector<double>> ConfigFile::numbers(
    const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return std::nullopt;
  }
  const std::string& raw = it->second.raw;
  if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') {
    return std::nullopt;
  }
  std::vector<double> out;
  std::istringstream in(raw.substr(1, raw.size() - 2));
  std::string token;
  while (std::getline(in, token, ',')) {
    token = trim(token);
    if (token.empty()) {
      continue;
    }
    out.push_back(std::stod(token));
  }
  return out;
}

}  // namespace fgnav
