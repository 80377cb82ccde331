// Flat key=value configuration shared by all CLI commands: values come from
// an optional config file, overridden by command-line flags. Every command
// echoes its fully resolved configuration (defaults included) into the CSV
// comment header.
#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "z2lgt/errors.hpp"

namespace z2lgt::cli {

class Options {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) {
    auto it = values_.find(key);
    std::string v = (it == values_.end()) ? fallback : it->second;
    resolved_[key] = v;
    return v;
  }
  long get_int(const std::string& key, long fallback) {
    auto it = values_.find(key);
    long v = fallback;
    if (it != values_.end()) {
      try {
        v = std::stol(it->second);
      } catch (...) {
        throw DomainError("config value for '" + key + "' is not an integer: " + it->second);
      }
    }
    resolved_[key] = std::to_string(v);
    return v;
  }
  double get_double(const std::string& key, double fallback) {
    auto it = values_.find(key);
    double v = fallback;
    if (it != values_.end()) {
      try {
        v = std::stod(it->second);
      } catch (...) {
        throw DomainError("config value for '" + key + "' is not a number: " + it->second);
      }
    }
    char buf[40];
    snprintf(buf, sizeof buf, "%.17g", v);
    resolved_[key] = buf;
    return v;
  }
  std::vector<double> get_double_list(const std::string& key, const std::string& fallback) {
    std::string raw = get_string(key, fallback);
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        out.push_back(std::stod(item));
      } catch (...) {
        throw DomainError("config value for '" + key + "' is not a number list: " + raw);
      }
    }
    if (out.empty()) throw DomainError("config list '" + key + "' is empty");
    return out;
  }
  std::vector<int> get_int_list(const std::string& key, const std::string& fallback) {
    std::string raw = get_string(key, fallback);
    std::vector<int> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        out.push_back(std::stoi(item));
      } catch (...) {
        throw DomainError("config value for '" + key + "' is not an integer list: " + raw);
      }
    }
    if (out.empty()) throw DomainError("config list '" + key + "' is empty");
    return out;
  }

  const std::map<std::string, std::string>& resolved() const { return resolved_; }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> resolved_;
};

}  // namespace z2lgt::cli
