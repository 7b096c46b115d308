#pragma once

#include <string>
#include <vector>

namespace bioright::cli {

std::string sha256_hex(const std::string& bytes);
/// Throws kParseError when the file cannot be read.
std::string file_sha256(const std::string& path);

/// Record of one command run, written as `<primary output>.manifest.json`.
/// Only `timestamp` varies between identical runs.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::vector<std::string> inputs;
  /// Canonical description of the effective settings (config dump, flags).
  std::string settings;
  std::vector<std::string> outputs;

  /// Hash over the settings and the input file contents.
  std::string config_digest() const;
  void write(const std::string& path) const;
};

}  // namespace bioright::cli
