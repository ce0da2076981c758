// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ripley {

/// One `[section]` of a flat key=value experiment file, with typed access.
class Section {
 public:
  Section() = default;
  explicit Section(std::string name, std::map<std::string, std::string> entries = {})
      : name_(std::move(name)), entries_(std::move(entries)) {}

  const std::string& name() const noexcept { return name_; }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  std::string text(const std::string& key) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::optional<double> maybe_number(const std::string& key) const;
  std::int64_t integer_or(const std::string& key, std::int64_t fallback) const;
  std::vector<double> numbers(const std::string& key) const;

 private:
  std::string name_;
  std::map<std::string, std::string> entries_;
};

/// INI-style file: `[section]` headers, `key = value` lines, `#` or `;`
/// comments.
class Config {
 public:
  const Section& section(const std::string& name) const;
  bool has(const std::string& name) const { return sections_.count(name) != 0; }
  Section& add(const std::string& name);

 private:
  std::map<std::string, Section> sections_;
};

Config read_config(std::istream& in);
Config load_config(const std::string& path);

}  // namespace ripley
