#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rivid {

/// Flat `key = value` document: one assignment per line, `#` comments,
/// optional double quotes around string values. This is the whole config
/// grammar — no sections, no nesting.
class KvConfig {
 public:
  static KvConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
  }

  static KvConfig parse(const std::string& text, const std::string& origin = "<string>") {
    KvConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string s = strip_comment(line);
      s = trim(s);
      if (s.empty()) continue;
      auto eq = s.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
      std::string key = trim(s.substr(0, eq));
      std::string value = trim(s.substr(eq + 1));
      if (key.empty()) throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
        value = value.substr(1, value.size() - 2);
      cfg.values_[key] = value;
    }
    return cfg;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key) {
    mark(key);
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("missing config key: " + key);
    return it->second;
  }
  std::string get_string(const std::string& key, const std::string& dflt) {
    mark(key);
    auto it = values_.find(key);
    return it == values_.end() ? dflt : it->second;
  }

  std::int64_t get_int(const std::string& key, std::int64_t dflt) {
    return has(key) ? parse_int(key, get_string(key)) : (mark(key), dflt);
  }
  std::int64_t get_int(const std::string& key) { return parse_int(key, get_string(key)); }

  double get_double(const std::string& key, double dflt) {
    return has(key) ? parse_double(key, get_string(key)) : (mark(key), dflt);
  }

  bool get_bool(const std::string& key, bool dflt) {
    if (!has(key)) { mark(key); return dflt; }
    std::string v = get_string(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::runtime_error("config key " + key + ": expected bool, got '" + v + "'");
  }

  /// Comma-separated doubles, e.g. `ratios = 0.5, 0.25`.
  std::vector<double> get_double_list(const std::string& key) {
    std::string v = get_string(key);
    std::vector<double> out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    return out;
  }

  /// Throws if any key was never consumed by a getter. Catches typos and
  /// keys from the wrong schema.
  void reject_unknown_keys() const {
    for (const auto& [k, v] : values_)
      if (!consumed_.count(k)) throw std::runtime_error("unknown config key: " + k);
  }

  const std::map<std::string, std::string>& raw() const { return values_; }

 private:
  void mark(const std::string& key) { consumed_.insert(key); }

  static std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') quoted = !quoted;
      if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
  }

  static std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

  std::int64_t parse_int(const std::string& key, const std::string& v) {
    std::int64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
      throw std::runtime_error("config key " + key + ": expected integer, got '" + v + "'");
    return out;
  }

  double parse_double(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      double out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw std::runtime_error("config key " + key + ": expected number, got '" + v + "'");
    }
  }

  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
};

}  // namespace rivid
