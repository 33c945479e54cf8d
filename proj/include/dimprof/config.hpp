#pragma once

#include "dimprof/kernel.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimprof {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key/value configuration.
///
/// Grammar, one entry per line:
///
///   line    := blank | comment | entry
///   comment := '#' anything
///   entry   := key '=' value [comment]
///   key     := [A-Za-z_][A-Za-z0-9_.]*
///
/// Whitespace around keys and values is ignored; a value may be wrapped in
/// double quotes. Lists are comma separated. Later entries overwrite earlier
/// ones, so overrides are simply applied last.
class Config {
 public:
  Config() = default;

  static Config parse(std::istream& is, const std::string& source = "<stream>");
  static Config load(const std::string& path);

  /// Applies one "key=value" override.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);
  /// Entries of `defaults` not present here.
  void merge_defaults(const Config& defaults);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;
  std::vector<KernelOrder> get_orders(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }
  /// Canonical "key = value" text, sorted by key.
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over the canonical text.
  std::string hash() const;

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace dimprof
