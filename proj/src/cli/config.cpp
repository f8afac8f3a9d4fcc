#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rabi2q::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw ConfigError("cannot parse " + what + " '" + text + "'");
  }
  return v;
}

}  // namespace

Range parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(trim(part));
  if (!text.empty() && text.back() == ':') parts.emplace_back();
  Range r;
  if (parts.size() == 1) {
    r.start = r.stop = parse_number(parts[0], "value");
    return r;
  }
  if (parts.size() != 3) throw ConfigError("range must be start:stop:step, got '" + text + "'");
  r.start = parse_number(parts[0], "range start");
  r.stop = parse_number(parts[1], "range stop");
  r.step = parse_number(parts[2], "range step");
  if (!(r.step > 0.0)) throw ConfigError("range step must be positive in '" + text + "'");
  if (r.stop < r.start) throw ConfigError("range stop lies below its start in '" + text + "'");
  return r;
}

std::vector<std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args,
                                       const std::vector<std::string>& commands) {
  std::vector<std::string> rest;
  std::vector<std::string> from_file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (i > 0 && a == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file path");
      const auto t = read_config_file(args[++i]);
      from_file.insert(from_file.end(), t.begin(), t.end());
    } else if (i > 0 && a.rfind("--config=", 0) == 0) {
      const auto t = read_config_file(a.substr(9));
      from_file.insert(from_file.end(), t.begin(), t.end());
    } else {
      rest.push_back(a);
    }
  }
  if (from_file.empty()) return rest;
  std::size_t at = 0;
  for (std::size_t i = 1; i < rest.size() && at == 0; ++i) {
    if (std::find(commands.begin(), commands.end(), rest[i]) != commands.end()) at = i + 1;
  }
  if (at == 0) throw ConfigError("--config requires a command");
  rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(at), from_file.begin(), from_file.end());
  return rest;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Canonical& Canonical::add(std::string_view key, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return add(key, std::string_view(buf));
}

Canonical& Canonical::add(std::string_view key, long long value) {
  return add(key, std::string_view(std::to_string(value)));
}

Canonical& Canonical::add(std::string_view key, std::string_view value) {
  text_.append(key);
  text_.push_back('=');
  text_.append(value);
  text_.push_back(';');
  return *this;
}

std::string Canonical::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text_)));
  return buf;
}

}  // namespace rabi2q::cli
