#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rabi2q::cli {

/// Bad user input detected after option parsing; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// start:stop:step, or a single number for a one-point range.
struct Range {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  bool single() const { return start == stop; }
};

Range parse_range(const std::string& text);

/// Reads key=value lines (blank lines and # comments skipped) and returns
/// them as --key=value tokens in file order.
std::vector<std::string> read_config_file(const std::string& path);

/// Moves the --config file contents in front of the explicit flags, right
/// after the command name, so that explicit flags override the file. args[0]
/// is the program name.
std::vector<std::string> expand_config(const std::vector<std::string>& args,
                                       const std::vector<std::string>& commands);

std::uint64_t fnv1a64(std::string_view text);

/// Ordered key=value record of the effective configuration; its hash goes
/// into every CSV header.
class Canonical {
 public:
  Canonical& add(std::string_view key, double value);
  Canonical& add(std::string_view key, long long value);
  Canonical& add(std::string_view key, int value) { return add(key, static_cast<long long>(value)); }
  Canonical& add(std::string_view key, std::string_view value);
  Canonical& flag(std::string_view key, bool value) { return add(key, value ? "true" : "false"); }

  const std::string& text() const { return text_; }
  std::string hash_hex() const;

 private:
  std::string text_;
};

}  // namespace rabi2q::cli
