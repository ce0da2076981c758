// SPDX-License-Identifier: Apache-2.0
#include "ripley/config.hpp"

#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ripley/error.hpp"

namespace ripley {

namespace {

double to_number(const std::string& section, const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || text.find_first_not_of(" \t", used) != std::string::npos)
    throw InvalidArgument("[" + section + "] " + key + ": '" + text + "' is not a number");
  return value;
}

}  // namespace

std::string Section::text(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw InvalidArgument("[" + name_ + "] is missing key '" + key + "'");
  return it->second;
}

std::string Section::text_or(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Section::number(const std::string& key) const { return to_number(name_, key, text(key)); }

double Section::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::optional<double> Section::maybe_number(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return number(key);
}

std::int64_t Section::integer_or(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) return fallback;
  const double v = number(key);
  if (v != static_cast<double>(static_cast<std::int64_t>(v)))
    throw InvalidArgument("[" + name_ + "] " + key + " must be an integer");
  return static_cast<std::int64_t>(v);
}

std::vector<double> Section::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(text(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_number(name_, key, item));
  if (out.empty()) throw InvalidArgument("[" + name_ + "] " + key + " is empty");
  return out;
}

const Section& Config::section(const std::string& name) const {
  const auto it = sections_.find(name);
  if (it == sections_.end()) throw InvalidArgument("config has no [" + name + "] section");
  return it->second;
}

Section& Config::add(const std::string& name) {
  auto [it, inserted] = sections_.try_emplace(name, Section(name));
  return it->second;
}

Config read_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidArgument(std::string("config parse error: ") + e.what());
  }
  Config config;
  for (const auto& [name, child] : tree) {
    if (child.empty() && !child.data().empty())
      throw InvalidArgument("config key '" + name + "' is outside any [section]");
    Section& s = config.add(name);
    for (const auto& [key, value] : child) s.set(key, value.get_value<std::string>());
  }
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeError("cannot open config '" + path + "'");
  return read_config(in);
}

}  // namespace ripley
