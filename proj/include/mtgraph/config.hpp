#pragma once
/// \file config.hpp
/// Flat `key = value` configuration files.
///
/// Grammar (one entry per line):
///   key = scalar              e.g.  n = 2000
///   key = [a, b, c]           vector
///   key = [a, b; c, d]        matrix, rows separated by ';'
///   key = word or [w1, w2]    strings / string lists
///   # comment lines and blank lines are skipped; '#' also trails values.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mtgraph/common.hpp"

namespace mtg {

class Config {
 public:
  static Config parse_string(const std::string& text) {
    Config cfg;
    cfg.raw_text_ = text;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (trim(line).empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ValidationError("BadConfig",
                              "line " + std::to_string(lineno) + ": expected 'key = value'");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty())
        throw ValidationError("BadConfig",
                              "line " + std::to_string(lineno) + ": empty key or value");
      cfg.entries_[key] = value;
    }
    return cfg;
  }

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("FileNotFound", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  const std::string& raw_text() const { return raw_text_; }

  std::string get_string(const std::string& key) const { return require(key); }

  long long get_int(const std::string& key) const {
    const std::string& v = require(key);
    try {
      std::size_t pos = 0;
      long long x = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ValidationError("BadConfig", "key '" + key + "': expected integer, got '" + v + "'");
    }
  }

  double get_real(const std::string& key) const { return to_real(require(key), key); }

  std::vector<double> get_vector(const std::string& key) const {
    auto rows = parse_bracketed(require(key), key);
    if (rows.size() != 1)
      throw ValidationError("BadConfig", "key '" + key + "': expected a single-row vector");
    std::vector<double> out;
    for (const auto& cell : rows[0]) out.push_back(to_real(cell, key));
    return out;
  }

  std::vector<std::vector<double>> get_matrix(const std::string& key) const {
    auto rows = parse_bracketed(require(key), key);
    std::vector<std::vector<double>> out;
    for (const auto& row : rows) {
      out.emplace_back();
      for (const auto& cell : row) out.back().push_back(to_real(cell, key));
    }
    return out;
  }

  std::vector<std::string> get_string_list(const std::string& key) const {
    auto rows = parse_bracketed(require(key), key);
    if (rows.size() != 1)
      throw ValidationError("BadConfig", "key '" + key + "': expected a single-row list");
    return rows[0];
  }

 private:
  static std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static double to_real(const std::string& v, const std::string& key) {
    try {
      std::size_t pos = 0;
      double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ValidationError("BadConfig", "key '" + key + "': expected number, got '" + v + "'");
    }
  }

  /// "[a, b; c, d]" -> {{a,b},{c,d}}; cells returned as trimmed strings.
  static std::vector<std::vector<std::string>> parse_bracketed(const std::string& v,
                                                               const std::string& key) {
    std::string s = trim(v);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
      throw ValidationError("BadConfig", "key '" + key + "': expected bracketed [ ... ] value");
    s = s.substr(1, s.size() - 2);
    std::vector<std::vector<std::string>> rows;
    std::stringstream rs(s);
    std::string row;
    while (std::getline(rs, row, ';')) {
      rows.emplace_back();
      std::stringstream cs(row);
      std::string cell;
      while (std::getline(cs, cell, ',')) {
        std::string t = trim(cell);
        if (t.empty())
          throw ValidationError("BadConfig", "key '" + key + "': empty cell in bracketed value");
        rows.back().push_back(t);
      }
      if (rows.back().empty())
        throw ValidationError("BadConfig", "key '" + key + "': empty row in bracketed value");
    }
    if (rows.empty())
      throw ValidationError("BadConfig", "key '" + key + "': empty bracketed value");
    std::size_t w = rows[0].size();
    for (const auto& r : rows)
      if (r.size() != w)
        throw ValidationError("BadConfig", "key '" + key + "': ragged rows in bracketed value");
    return rows;
  }

  const std::string& require(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
      throw ValidationError("BadConfig", "missing required key '" + key + "'");
    return it->second;
  }

  std::map<std::string, std::string> entries_;
  std::string raw_text_;
};

}  // namespace mtg
